#include "sropt/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "sropt/kernels.hpp"

namespace sropt {

int count_distinct_rows(const Mat& points) {
  std::vector<int> order(points.rows);
  for (int i = 0; i < points.rows; ++i) order[i] = i;
  const auto less = [&](int a, int b) {
    return std::lexicographical_compare(points.row(a), points.row(a) + points.cols,
                                        points.row(b), points.row(b) + points.cols);
  };
  std::sort(order.begin(), order.end(), less);
  int distinct = points.rows == 0 ? 0 : 1;
  for (int i = 1; i < points.rows; ++i)
    if (less(order[i - 1], order[i])) ++distinct;
  return distinct;
}

namespace {

double sq_dist(const double* a, const double* b, int n) {
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

double objective_of(const Mat& points, const Mat& centroids, const std::vector<int>& assign) {
  double obj = 0.0;
  for (int p = 0; p < points.rows; ++p)
    obj += sq_dist(points.row(p), centroids.row(assign[p]), points.cols);
  return obj;
}

}  // namespace

ClusterResult kmeanspp(const Mat& points, int k, Rng& rng, int max_iters) {
  const int n = points.rows;
  if (n == 0) throw std::invalid_argument("kmeanspp: empty input");
  if (k <= 0) throw std::invalid_argument("kmeanspp: k must be positive");
  if (k > count_distinct_rows(points))
    throw std::invalid_argument("kmeanspp: k exceeds number of distinct points");

  const int dim = points.cols;
  ClusterResult res;
  res.k = k;
  res.centroids = Mat(k, dim);

  // D^2 seeding: the first centroid uniform, then each next point with
  // probability proportional to its squared distance to the chosen set.
  {
    const int first = static_cast<int>(rng.uniform_int(n));
    std::memcpy(res.centroids.row(0), points.row(first), sizeof(double) * dim);
    std::vector<double> d2(n);
    for (int p = 0; p < n; ++p) d2[p] = sq_dist(points.row(p), res.centroids.row(0), dim);
    for (int c = 1; c < k; ++c) {
      double total = 0.0;
      for (double v : d2) total += v;
      // total > 0 is guaranteed: fewer centroids than distinct points so far.
      double r = rng.uniform_real() * total;
      int chosen = n - 1;
      for (int p = 0; p < n; ++p) {
        r -= d2[p];
        if (r < 0.0) {
          chosen = p;
          break;
        }
      }
      std::memcpy(res.centroids.row(c), points.row(chosen), sizeof(double) * dim);
      for (int p = 0; p < n; ++p)
        d2[p] = std::min(d2[p], sq_dist(points.row(p), res.centroids.row(c), dim));
    }
  }

  std::vector<int> assign(n, -1), prev_assign;
  std::vector<double> d2;
  for (int iter = 0; iter < max_iters; ++iter) {
    prev_assign = assign;
    kernels::assign_nearest(points, res.centroids, assign, d2);
    kernels::centroid_means(points, assign, k, res.centroids, res.cluster_sizes);
    res.iterations = iter + 1;
    res.objective_trace.push_back(objective_of(points, res.centroids, assign));
    bool reseeded = false;
    for (int c = 0; c < k; ++c) {
      if (res.cluster_sizes[c] > 0) continue;
      // Reseed an empty cluster to the point farthest from its centroid.
      int far = 0;
      for (int p = 1; p < n; ++p)
        if (d2[p] > d2[far]) far = p;
      std::memcpy(res.centroids.row(c), points.row(far), sizeof(double) * dim);
      d2[far] = 0.0;
      reseeded = true;
    }
    if (!reseeded && assign == prev_assign) break;
  }
  // Final consistency pass: assignment against the final centroids, then
  // centroids as exact means of that assignment.
  kernels::assign_nearest(points, res.centroids, assign, d2);
  kernels::centroid_means(points, assign, k, res.centroids, res.cluster_sizes);
  for (int c = 0; c < k; ++c) {
    if (res.cluster_sizes[c] > 0) continue;
    int far = 0;
    for (int p = 1; p < n; ++p)
      if (d2[p] > d2[far]) far = p;
    assign[far] = c;
    kernels::centroid_means(points, assign, k, res.centroids, res.cluster_sizes);
  }
  res.assignment = assign;
  res.objective = objective_of(points, res.centroids, assign);
  return res;
}

SubGoalSet select_landmarks(const SRMatrix& sr, const ClusterResult& clusters,
                            const std::vector<int>& participating) {
  if (clusters.assignment.size() != participating.size())
    throw std::invalid_argument("select_landmarks: participant count mismatch");
  const Mat rows = gather_rows(sr, participating);
  SubGoalSet set;
  std::vector<int> taken;
  for (int c = 0; c < clusters.k; ++c) {
    const double* centroid = clusters.centroids.row(c);
    double cn = 0.0;
    for (int i = 0; i < clusters.centroids.cols; ++i) cn += centroid[i] * centroid[i];
    if (cn == 0.0) throw std::invalid_argument("select_landmarks: zero centroid");
    std::vector<double> cos;
    kernels::cosine_to(rows, centroid, cos);
    int best = -1;
    for (int p = 0; p < rows.rows; ++p) {
      if (best < 0 || cos[p] > cos[best] ||
          (cos[p] == cos[best] && participating[p] < participating[best]))
        best = p;
    }
    const int state = participating[best];
    if (std::find(taken.begin(), taken.end(), state) != taken.end()) continue;
    taken.push_back(state);
    SubGoal g;
    g.cluster_id = c;
    g.state = state;
    g.centroid.assign(centroid, centroid + clusters.centroids.cols);
    g.cluster_size = clusters.cluster_sizes[c];
    set.goals.push_back(std::move(g));
  }
  return set;
}

double nearest_rank_percentile(const std::vector<double>& sorted, double pct) {
  if (sorted.empty()) throw std::invalid_argument("percentile of empty vector");
  if (pct <= 0.0) return sorted.front();
  if (pct >= 100.0) return sorted.back();
  const auto n = static_cast<long long>(sorted.size());
  long long rank = static_cast<long long>(std::ceil(pct / 100.0 * static_cast<double>(n)));
  rank = std::max<long long>(1, std::min(rank, n));
  return sorted[rank - 1];
}

std::vector<int> nonzero_states(const SRMatrix& sr) {
  const auto norms = l1_norms(sr);
  std::vector<int> states;
  for (int s = 0; s < sr.size(); ++s)
    if (norms[s] > 0.0) states.push_back(s);
  return states;
}

std::vector<int> filter_candidates(const SRMatrix& sr, double pct_min, double pct_max) {
  if (!(pct_min >= 0.0 && pct_min < pct_max && pct_max <= 100.0))
    throw std::invalid_argument("filter_candidates: need 0 <= pct_min < pct_max <= 100");
  const auto norms = l1_norms(sr);
  std::vector<double> nonzero;
  for (double v : norms)
    if (v > 0.0) nonzero.push_back(v);
  if (nonzero.size() < 2)
    throw std::invalid_argument("filter_candidates: fewer than 2 nonzero-norm states");
  std::sort(nonzero.begin(), nonzero.end());
  const double lo = nearest_rank_percentile(nonzero, pct_min);
  const double hi = nearest_rank_percentile(nonzero, pct_max);
  std::vector<int> out;
  for (int s = 0; s < sr.size(); ++s)
    if (norms[s] > lo && norms[s] < hi) out.push_back(s);
  return out;
}

Mat gather_rows(const SRMatrix& sr, const std::vector<int>& states) {
  Mat m(static_cast<int>(states.size()), sr.size());
  for (int i = 0; i < m.rows; ++i)
    std::memcpy(m.row(i), sr.psi.row(states[i]), sizeof(double) * sr.size());
  return m;
}

void save_subgoals(const SubGoalSet& set, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_subgoals: cannot open " + path);
  out << "# cluster_id landmark_state cluster_size\n";
  for (const auto& g : set.goals)
    out << g.cluster_id << ' ' << g.state << ' ' << g.cluster_size << '\n';
  if (!out) throw std::runtime_error("save_subgoals: write failed for " + path);
}

}  // namespace sropt
