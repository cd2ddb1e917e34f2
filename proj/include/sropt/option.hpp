#pragma once

#include <string>
#include <vector>

#include "sropt/grid.hpp"
#include "sropt/mat.hpp"
#include "sropt/rng.hpp"

namespace sropt {

// Dense intrinsic reward: the change of a fixed scoring row across a
// transition. For sub-goal options the row is the sub-goal's SR row,
// snapshotted at construction time; for the spectral baseline it is a
// Laplacian eigenvector.
struct PseudoReward {
  std::vector<double> row;
};

inline double pseudo_reward(const PseudoReward& pr, int s, int s_next) {
  return pr.row[s_next] - pr.row[s];
}

struct OptionQParams {
  double alpha = 0.1;
  double epsilon = 0.1;
  double gamma = 0.99;
  long long budget = 200000;
  int episode_cap = 0;     // 0: |S|
  double term_tol = 1e-9;  // V(s) <= tol counts as terminal
};

// A temporally extended action: initiation everywhere, greedy policy from q,
// deterministic termination where the option's value function is nonpositive.
struct Option {
  int id = 0;
  int goal = 0;  // landmark state the pseudo-reward climbs toward
  Mat q;         // |S| x 5
  int max_duration = 0;
  double term_tol = 1e-9;
  bool trained = false;

  double value(int s) const {
    const double* row = q.row(s);
    double v = row[0];
    for (int a = 1; a < kNumActions; ++a) v = std::max(v, row[a]);
    return v;
  }
  bool terminates(int s) const { return value(s) <= term_tol; }
  // Lowest-index argmax; the frozen execution policy.
  int greedy_action(int s) const {
    const double* row = q.row(s);
    int best = 0;
    for (int a = 1; a < kNumActions; ++a)
      if (row[a] > row[best]) best = a;
    return best;
  }
};

// Tabular Q-learning on the pseudo-reward, episodes restarting from uniform
// random states and ending where the current value estimate is nonpositive.
// Never sees any task reward.
Option train_option(const GridMap& map, const PseudoReward& pr, int goal_state,
                    const OptionQParams& params, Rng& rng);

struct OptionExecution {
  int terminal = 0;
  int steps = 0;
  bool hit_cap = false;
  std::vector<int> visited;  // states entered, in order
};

// Follows the greedy policy until a terminal state or max_duration.
OptionExecution execute_option(const GridMap& map, const Option& opt, int start);

void save_options(const std::vector<Option>& options, const std::string& path);
std::vector<Option> load_options(const std::string& path);

}  // namespace sropt
