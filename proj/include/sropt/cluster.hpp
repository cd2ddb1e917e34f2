#pragma once

#include <string>
#include <vector>

#include "sropt/mat.hpp"
#include "sropt/rng.hpp"
#include "sropt/sr.hpp"

namespace sropt {

struct ClusterResult {
  int k = 0;
  Mat centroids;                  // k x dim
  std::vector<int> assignment;    // per input point
  std::vector<int> cluster_sizes;
  double objective = 0.0;         // sum of squared distances at termination
  std::vector<double> objective_trace;  // per Lloyd iteration
  int iterations = 0;
};

// k-means++ seeding (D^2 sampling) followed by Lloyd iterations until the
// assignment stops changing or max_iters is hit. Ties in the assignment go
// to the lowest centroid id; empty clusters are reseeded to the point
// farthest from its current centroid. Deterministic given the rng.
// Throws if the input is empty or k exceeds the number of distinct points.
ClusterResult kmeanspp(const Mat& points, int k, Rng& rng, int max_iters = 100);

struct SubGoal {
  int cluster_id = 0;
  int state = 0;                 // landmark state index
  std::vector<double> centroid;
  int cluster_size = 0;
};

struct SubGoalSet {
  std::vector<SubGoal> goals;
};

// Maps each centroid to the participating state whose SR row has the largest
// cosine similarity (ties to the lowest state index). Duplicate landmarks are
// dropped, the earliest cluster keeps the state.
// `participating` lists the state index of each row of the clustered matrix.
SubGoalSet select_landmarks(const SRMatrix& sr, const ClusterResult& clusters,
                            const std::vector<int>& participating);

// States whose nonzero L1 norm lies strictly between the two nearest-rank
// percentile values of the nonzero-norm distribution. Throws when fewer than
// 2 states have nonzero norm.
std::vector<int> filter_candidates(const SRMatrix& sr, double pct_min, double pct_max);

// Nearest-rank percentile of a sorted ascending vector.
double nearest_rank_percentile(const std::vector<double>& sorted, double pct);

// Number of distinct rows (exact comparison).
int count_distinct_rows(const Mat& points);

// Rows of sr.psi for the given states, as a dense matrix.
Mat gather_rows(const SRMatrix& sr, const std::vector<int>& states);

// States with nonzero L1 norm, ascending.
std::vector<int> nonzero_states(const SRMatrix& sr);

void save_subgoals(const SubGoalSet& goals, const std::string& path);

}  // namespace sropt
