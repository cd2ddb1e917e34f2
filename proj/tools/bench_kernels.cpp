// Times the OpenMP kernels against their serial references and reports the
// speedup. `--quick` shrinks the sizes for use as a smoke test.

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstring>
#include <functional>

#include "sropt/kernels.hpp"
#include "sropt/rng.hpp"

using sropt::Mat;
using sropt::Rng;

namespace {

double time_of(const std::function<void()>& fn, int reps) {
  fn();  // warm-up
  const auto t0 = std::chrono::steady_clock::now();
  for (int i = 0; i < reps; ++i) fn();
  const auto dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return dt / reps;
}

Mat random_mat(int r, int c, Rng& rng) {
  Mat m(r, c);
  for (auto& v : m.a) v = rng.uniform_real() * 2.0 - 1.0;
  return m;
}

void report(const char* name, double serial, double parallel) {
  std::printf("%-18s serial %10.4f ms   omp %10.4f ms   speedup %5.2fx\n", name, serial * 1e3,
              parallel * 1e3, parallel > 0 ? serial / parallel : 0.0);
}

}  // namespace

int main(int argc, char** argv) {
  const bool quick = argc > 1 && std::strcmp(argv[1], "--quick") == 0;
  const int n = quick ? 96 : 512;
  const int pts = quick ? 400 : 4000;
  const int dim = quick ? 64 : 400;
  const int k = 10;
  const int reps = quick ? 2 : 5;

  std::printf("threads: %d\n", omp_get_max_threads());
  Rng rng(7);

  {
    Mat A = random_mat(n, n, rng), B = random_mat(n, n, rng), C;
    report("matmul", time_of([&] { sropt::kernels::serial::matmul(A, B, C); }, reps),
           time_of([&] { sropt::kernels::matmul(A, B, C); }, reps));
  }
  {
    // Diagonally dominant, comfortably invertible.
    Mat A = random_mat(n, n, rng);
    for (int i = 0; i < n; ++i) A.at(i, i) += n;
    report("inverse", time_of([&] { (void)sropt::kernels::serial::inverse(A); }, reps),
           time_of([&] { (void)sropt::kernels::inverse(A); }, reps));
  }
  {
    Mat points = random_mat(pts, dim, rng);
    Mat centroids = random_mat(k, dim, rng);
    std::vector<int> assign;
    std::vector<double> d2;
    report("assign_nearest",
           time_of([&] { sropt::kernels::serial::assign_nearest(points, centroids, assign, d2); }, reps),
           time_of([&] { sropt::kernels::assign_nearest(points, centroids, assign, d2); }, reps));
    Mat means;
    std::vector<int> sizes;
    report("centroid_means",
           time_of([&] { sropt::kernels::serial::centroid_means(points, assign, k, means, sizes); }, reps),
           time_of([&] { sropt::kernels::centroid_means(points, assign, k, means, sizes); }, reps));
    std::vector<double> out;
    report("row_l1", time_of([&] { sropt::kernels::serial::row_l1(points, out); }, reps),
           time_of([&] { sropt::kernels::row_l1(points, out); }, reps));
    report("cosine_to",
           time_of([&] { sropt::kernels::serial::cosine_to(points, centroids.row(0), out); }, reps),
           time_of([&] { sropt::kernels::cosine_to(points, centroids.row(0), out); }, reps));
  }
  {
    // Symmetric eigendecomposition has no parallel variant; report standalone.
    const int en = quick ? 64 : 200;
    Mat A = random_mat(en, en, rng);
    for (int i = 0; i < en; ++i)
      for (int j = 0; j < i; ++j) A.at(i, j) = A.at(j, i);
    const double t = time_of([&] { (void)sropt::kernels::sym_eigen(A); }, 1);
    std::printf("%-18s %10.4f ms (serial only)\n", "sym_eigen", t * 1e3);
  }
  return 0;
}
