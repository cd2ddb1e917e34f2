#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <vector>

#include "sropt/cluster.hpp"
#include "sropt/sr.hpp"

using namespace sropt;

namespace {

// Gaussian-ish noise from averaged uniforms; good enough for blob tests.
double noise(Rng& rng) {
  double s = 0.0;
  for (int i = 0; i < 12; ++i) s += rng.uniform_real();
  return s - 6.0;
}

}  // namespace

TEST_CASE("kmeanspp with identical vectors and k=1") {
  Mat points(8, 3);
  for (int p = 0; p < 8; ++p)
    for (int d = 0; d < 3; ++d) points.at(p, d) = 2.5;
  Rng rng(1);
  const auto res = kmeanspp(points, 1, rng);
  CHECK(res.k == 1);
  for (int d = 0; d < 3; ++d) CHECK(res.centroids.at(0, d) == doctest::Approx(2.5));
  CHECK(res.cluster_sizes[0] == 8);
  CHECK(res.objective == doctest::Approx(0.0));

  Rng rng2(1);
  CHECK_THROWS_AS(kmeanspp(points, 2, rng2), std::invalid_argument);
}

TEST_CASE("kmeanspp with k equal to the number of distinct points") {
  Mat points(4, 2);
  const double coords[4][2] = {{0, 0}, {5, 0}, {0, 5}, {7, 7}};
  for (int p = 0; p < 4; ++p)
    for (int d = 0; d < 2; ++d) points.at(p, d) = coords[p][d];
  Rng rng(3);
  const auto res = kmeanspp(points, 4, rng);
  CHECK(res.objective == doctest::Approx(0.0));
  std::set<int> clusters(res.assignment.begin(), res.assignment.end());
  CHECK(clusters.size() == 4);
  for (int sz : res.cluster_sizes) CHECK(sz == 1);
}

TEST_CASE("kmeanspp separates two well-separated blobs") {
  Rng rng(17);
  const int per_blob = 60;
  Mat points(2 * per_blob, 2);
  for (int p = 0; p < per_blob; ++p) {
    points.at(p, 0) = 0.0 + 0.5 * noise(rng);
    points.at(p, 1) = 0.0 + 0.5 * noise(rng);
    points.at(per_blob + p, 0) = 20.0 + 0.5 * noise(rng);
    points.at(per_blob + p, 1) = 20.0 + 0.5 * noise(rng);
  }
  Rng crng(4);
  const auto res = kmeanspp(points, 2, crng);
  // All points of a blob share a cluster, and the blobs differ.
  for (int p = 1; p < per_blob; ++p) {
    CHECK(res.assignment[p] == res.assignment[0]);
    CHECK(res.assignment[per_blob + p] == res.assignment[per_blob]);
  }
  CHECK(res.assignment[0] != res.assignment[per_blob]);
}

TEST_CASE("kmeanspp is deterministic given the seed") {
  Rng data_rng(23);
  Mat points(50, 4);
  for (auto& v : points.a) v = data_rng.uniform_real();
  Rng r1(99), r2(99);
  const auto a = kmeanspp(points, 5, r1);
  const auto b = kmeanspp(points, 5, r2);
  CHECK(a.assignment == b.assignment);
  CHECK(a.centroids.a == b.centroids.a);
  CHECK(a.cluster_sizes == b.cluster_sizes);
}

TEST_CASE("kmeans objective trace is nonincreasing") {
  Rng data_rng(31);
  Mat points(120, 6);
  for (auto& v : points.a) v = data_rng.uniform_real() * 10.0;
  Rng rng(7);
  const auto res = kmeanspp(points, 6, rng);
  REQUIRE(!res.objective_trace.empty());
  for (size_t i = 1; i < res.objective_trace.size(); ++i)
    CHECK(res.objective_trace[i] <= res.objective_trace[i - 1] + 1e-9);
}

TEST_CASE("centroids are the means of their clusters at termination") {
  Rng data_rng(41);
  Mat points(80, 3);
  for (auto& v : points.a) v = data_rng.uniform_real();
  Rng rng(11);
  const auto res = kmeanspp(points, 4, rng);
  Mat sums(4, 3);
  std::vector<int> counts(4, 0);
  for (int p = 0; p < points.rows; ++p) {
    const int c = res.assignment[p];
    for (int d = 0; d < 3; ++d) sums.at(c, d) += points.at(p, d);
    ++counts[c];
  }
  for (int c = 0; c < 4; ++c) {
    REQUIRE(counts[c] == res.cluster_sizes[c]);
    REQUIRE(counts[c] > 0);
    for (int d = 0; d < 3; ++d)
      CHECK(res.centroids.at(c, d) == doctest::Approx(sums.at(c, d) / counts[c]).epsilon(1e-9));
  }
  int total = 0;
  for (int sz : res.cluster_sizes) total += sz;
  CHECK(total == points.rows);
}

TEST_CASE("select_landmarks maps centroids to states") {
  // SR stand-in with easily recognisable rows.
  SRMatrix sr = make_sr(3, 0.99);
  sr.psi.at(0, 0) = 1.0;
  sr.psi.at(1, 1) = 1.0;
  sr.psi.at(2, 0) = 1.0;
  sr.psi.at(2, 2) = 1.0;
  const std::vector<int> participating = {0, 1, 2};
  const Mat rows = gather_rows(sr, participating);
  Rng rng(5);
  const auto clusters = kmeanspp(rows, 3, rng);
  const auto goals = select_landmarks(sr, clusters, participating);
  REQUIRE(goals.goals.size() == 3);
  // Singleton clusters: each landmark is its own state, cosine exactly 1.
  std::set<int> landmarks;
  for (const auto& g : goals.goals) landmarks.insert(g.state);
  CHECK(landmarks == std::set<int>{0, 1, 2});
}

TEST_CASE("select_landmarks dedupes repeated landmarks") {
  SRMatrix sr = make_sr(2, 0.99);
  sr.psi.at(0, 0) = 1.0;
  sr.psi.at(1, 0) = 1.0;  // same direction as state 0: same landmark
  sr.psi.at(1, 1) = 0.0;
  ClusterResult clusters;
  clusters.k = 2;
  clusters.centroids = Mat(2, 2);
  clusters.centroids.at(0, 0) = 1.0;
  clusters.centroids.at(1, 0) = 2.0;  // parallel centroids, same argmax
  clusters.assignment = {0, 1};
  clusters.cluster_sizes = {1, 1};
  const auto goals = select_landmarks(sr, clusters, {0, 1});
  CHECK(goals.goals.size() == 1);
  CHECK(goals.goals[0].state == 0);  // tie broken to the lowest state index
  CHECK(goals.goals[0].cluster_id == 0);
}

TEST_CASE("landmarks on the open five-by-five grid spread over the quadrants") {
  const GridMap m = parse_map(".....\n.....\n.....\n.....\n.....");
  const Mat psi = sr_oracle(transition_matrix(m, uniform_policy(25)), 0.99);
  SRMatrix sr = make_sr(25, 0.99);
  sr.psi = psi;
  std::vector<int> participating(25);
  for (int i = 0; i < 25; ++i) participating[i] = i;
  Rng rng(2);
  const auto clusters = kmeanspp(gather_rows(sr, participating), 4, rng);
  const auto goals = select_landmarks(sr, clusters, participating);
  REQUIRE(goals.goals.size() == 4);
  std::set<std::pair<bool, bool>> quadrants;
  for (const auto& g : goals.goals) {
    const auto [r, c] = m.coords(g.state);
    // Landmarks are prototypical, never the extreme corners.
    CHECK((r == 0 || r == 4 ? !(c == 0 || c == 4) : true));
    quadrants.insert({r <= 2, c <= 2});
  }
  CHECK(quadrants.size() == 4);
}

TEST_CASE("nearest-rank percentile") {
  std::vector<double> v;
  for (int i = 1; i <= 100; ++i) v.push_back(i);
  CHECK(nearest_rank_percentile(v, 5) == 5.0);
  CHECK(nearest_rank_percentile(v, 40) == 40.0);
  CHECK(nearest_rank_percentile(v, 0) == 1.0);
  CHECK(nearest_rank_percentile(v, 100) == 100.0);
  const std::vector<double> w = {2.0, 4.0, 8.0};
  CHECK(nearest_rank_percentile(w, 34) == 4.0);   // ceil(0.34*3)=2
  CHECK(nearest_rank_percentile(w, 33) == 2.0);   // ceil(0.33*3)=1
}

TEST_CASE("filter_candidates agrees with a sort-and-slice oracle") {
  SRMatrix sr = make_sr(100, 0.99);
  Rng rng(77);
  std::vector<double> norms(100);
  for (int s = 0; s < 100; ++s) {
    norms[s] = 1.0 + rng.uniform_real() * 99.0;
    sr.psi.at(s, s) = norms[s];  // row L1 = the chosen norm
  }
  const auto got = filter_candidates(sr, 5, 40);

  // Oracle: sort, pick nearest-rank values, slice strictly between.
  std::vector<double> sorted = norms;
  std::sort(sorted.begin(), sorted.end());
  const double lo = sorted[static_cast<size_t>(std::ceil(0.05 * 100)) - 1];
  const double hi = sorted[static_cast<size_t>(std::ceil(0.40 * 100)) - 1];
  std::vector<int> expect;
  for (int s = 0; s < 100; ++s)
    if (norms[s] > lo && norms[s] < hi) expect.push_back(s);
  CHECK(got == expect);
}

TEST_CASE("filter_candidates edge cases") {
  SRMatrix sr = make_sr(6, 0.99);
  for (int s = 0; s < 6; ++s) sr.psi.at(s, s) = 3.0;  // all norms equal
  CHECK(filter_candidates(sr, 5, 40).empty());
  CHECK(filter_candidates(sr, 0, 100).empty());

  SRMatrix ramp = make_sr(5, 0.99);
  for (int s = 0; s < 5; ++s) ramp.psi.at(s, s) = 1.0 + s;
  // Full range still excludes the extremes (strict inequalities).
  const auto mid = filter_candidates(ramp, 0, 100);
  CHECK(mid == std::vector<int>{1, 2, 3});

  SRMatrix tiny = make_sr(3, 0.99);
  tiny.psi.at(0, 0) = 1.0;  // a single nonzero norm
  CHECK_THROWS_AS(filter_candidates(tiny, 5, 40), std::invalid_argument);
  CHECK_THROWS_AS(filter_candidates(ramp, 40, 5), std::invalid_argument);
}

TEST_CASE("filter_candidates ignores zero-norm states") {
  SRMatrix sr = make_sr(10, 0.99);
  for (int s = 0; s < 5; ++s) sr.psi.at(s, s) = 1.0 + s;  // states 5..9 unvisited
  const auto got = filter_candidates(sr, 0, 100);
  for (int s : got) CHECK(s < 5);
}
