#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "sropt/kernels.hpp"
#include "sropt/rng.hpp"

using namespace sropt;

namespace {

Mat random_mat(int r, int c, Rng& rng) {
  Mat m(r, c);
  for (auto& v : m.a) v = rng.uniform_real() * 2.0 - 1.0;
  return m;
}

}  // namespace

TEST_CASE("parallel kernels match the serial references") {
  Rng rng(5);
  const Mat A = random_mat(37, 41, rng);
  const Mat B = random_mat(41, 29, rng);

  Mat c_par, c_ser;
  kernels::matmul(A, B, c_par);
  kernels::serial::matmul(A, B, c_ser);
  REQUIRE(c_par.same_shape(c_ser));
  for (size_t i = 0; i < c_par.a.size(); ++i) CHECK(c_par.a[i] == doctest::Approx(c_ser.a[i]));

  Mat D = random_mat(30, 30, rng);
  for (int i = 0; i < 30; ++i) D.at(i, i) += 30.0;
  const Mat inv_par = kernels::inverse(D);
  const Mat inv_ser = kernels::serial::inverse(D);
  for (size_t i = 0; i < inv_par.a.size(); ++i)
    CHECK(inv_par.a[i] == doctest::Approx(inv_ser.a[i]).epsilon(1e-12));

  const Mat points = random_mat(200, 17, rng);
  const Mat centroids = random_mat(6, 17, rng);
  std::vector<int> a1, a2;
  std::vector<double> d1, d2;
  kernels::assign_nearest(points, centroids, a1, d1);
  kernels::serial::assign_nearest(points, centroids, a2, d2);
  CHECK(a1 == a2);

  Mat m1, m2;
  std::vector<int> s1, s2;
  kernels::centroid_means(points, a1, 6, m1, s1);
  kernels::serial::centroid_means(points, a1, 6, m2, s2);
  CHECK(s1 == s2);
  for (size_t i = 0; i < m1.a.size(); ++i) CHECK(m1.a[i] == doctest::Approx(m2.a[i]));

  std::vector<double> l1, l2;
  kernels::row_l1(points, l1);
  kernels::serial::row_l1(points, l2);
  for (size_t i = 0; i < l1.size(); ++i) CHECK(l1[i] == doctest::Approx(l2[i]));

  std::vector<double> cos1, cos2;
  kernels::cosine_to(points, centroids.row(0), cos1);
  kernels::serial::cosine_to(points, centroids.row(0), cos2);
  for (size_t i = 0; i < cos1.size(); ++i) CHECK(cos1[i] == doctest::Approx(cos2[i]));
}

TEST_CASE("inverse really inverts") {
  Rng rng(9);
  Mat A = random_mat(25, 25, rng);
  for (int i = 0; i < 25; ++i) A.at(i, i) += 25.0;
  const Mat inv = kernels::inverse(A);
  Mat prod;
  kernels::matmul(A, inv, prod);
  for (int i = 0; i < 25; ++i)
    for (int j = 0; j < 25; ++j)
      CHECK(prod.at(i, j) == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-9));
}

TEST_CASE("inverse rejects singular input") {
  Mat A(2, 2);
  A.at(0, 0) = 1.0;
  A.at(0, 1) = 2.0;
  A.at(1, 0) = 2.0;
  A.at(1, 1) = 4.0;
  CHECK_THROWS_AS(kernels::inverse(A), std::runtime_error);
}

TEST_CASE("sym_eigen on a known matrix") {
  // [[2,1],[1,2]] has eigenvalues 1 and 3.
  Mat A(2, 2);
  A.at(0, 0) = 2.0;
  A.at(0, 1) = 1.0;
  A.at(1, 0) = 1.0;
  A.at(1, 1) = 2.0;
  const auto eig = kernels::sym_eigen(A);
  CHECK(eig.values[0] == doctest::Approx(1.0));
  CHECK(eig.values[1] == doctest::Approx(3.0));
}

TEST_CASE("sym_eigen residuals and orthonormality") {
  Rng rng(13);
  const int n = 24;
  Mat A = random_mat(n, n, rng);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < i; ++j) A.at(i, j) = A.at(j, i);
  const auto eig = kernels::sym_eigen(A);
  for (int i = 0; i + 1 < n; ++i) CHECK(eig.values[i] <= eig.values[i + 1]);
  for (int i = 0; i < n; ++i) {
    const double* v = eig.vectors.row(i);
    // A v = lambda v
    for (int r = 0; r < n; ++r) {
      double av = 0.0;
      for (int c = 0; c < n; ++c) av += A.at(r, c) * v[c];
      CHECK(av == doctest::Approx(eig.values[i] * v[r]).epsilon(1e-8).scale(1.0));
    }
    for (int j = 0; j <= i; ++j) {
      double d = 0.0;
      for (int c = 0; c < n; ++c) d += v[c] * eig.vectors.at(j, c);
      CHECK(d == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-8).scale(1.0));
    }
  }
}
