#pragma once

#include <functional>
#include <vector>

#include "sropt/grid.hpp"
#include "sropt/mat.hpp"
#include "sropt/option.hpp"
#include "sropt/rng.hpp"

namespace sropt {

// Q table over the combined choice space: columns 0..4 are the primitive
// actions in Action order, column 5+i is option i.
struct SMDPQTable {
  Mat q;
  double alpha = 0.1;
  double gamma = 0.99;
  double epsilon = 0.1;  // training exploration rate

  int num_options() const { return q.cols - kNumActions; }
  int num_choices() const { return q.cols; }
  double state_value(int s) const {
    const double* row = q.row(s);
    double v = row[0];
    for (int c = 1; c < q.cols; ++c) v = std::max(v, row[c]);
    return v;
  }
};

SMDPQTable make_agent(int n_states, int n_options, double alpha, double gamma, double epsilon);

enum class ExploreKind { Uniform, NU, AE };

// Exploratory draws pick the option class with probability 1/(1+e); greedy
// draws are plain argmax either way. AE rescales e by the cluster size of
// the last option picked relative to the average cluster size.
struct ExplorationScheme {
  ExploreKind kind = ExploreKind::Uniform;
  double e = 15.0;
  std::vector<int> cluster_sizes;  // per option, AE only
  int last_option = -1;
};

// One decision. Exploration with probability epsilon, else argmax over all
// columns with uniform tie-breaking. Updates scheme.last_option whenever an
// option column is returned.
int choose(const SMDPQTable& agent, ExplorationScheme& scheme, int s, double epsilon, Rng& rng);

// q[s][c] += alpha*(R + gamma^tau * max_c' q[s'][c'] - q[s][c]);
// terminal transitions bootstrap with 0.
void smdp_update(SMDPQTable& agent, const Transition& tr);

// Off-policy update of every option column whose greedy policy at tr.state
// picks tr.choice; tr must be a primitive transition.
void intra_option_update(SMDPQTable& agent, const std::vector<Option>& options,
                         const Transition& tr);

struct EpisodeOptions {
  bool learn = true;
  double epsilon = 0.1;
  long long step_cap = 0;  // max primitive steps; 0: task.horizon (0 = unbounded)
  long long decision_cap = 1000000;
};

struct EpisodeResult {
  double disc_return = 0.0;
  double undisc_return = 0.0;
  long long steps = 0;  // primitive steps, option-internal included
  bool reached_goal = false;
};

// Runs one episode from the task's start state. Visitation counts, when
// given, record the start state and every state entered by a primitive step
// (option-internal steps included). Starting on the goal returns the goal
// reward immediately (first-arrival convention).
EpisodeResult run_episode(const GridMap& map, const TaskSpec& task, SMDPQTable& agent,
                          ExplorationScheme& scheme, const std::vector<Option>& options,
                          const EpisodeOptions& opts, Rng& rng,
                          std::vector<long long>* visits = nullptr);

struct TaskCurve {
  std::vector<long long> eval_steps;
  std::vector<double> disc;
  std::vector<double> undisc;
};

// Trains on one task for exactly step_budget primitive steps (episodes back
// to back), pausing at each checkpoint in eval_at — even mid-option — to run
// one frozen-policy evaluation episode (epsilon = eval_epsilon, capped at
// eval_horizon steps). Checkpoints must be ascending and <= step_budget.
TaskCurve train_on_task(const GridMap& map, const TaskSpec& task, SMDPQTable& agent,
                        ExplorationScheme& scheme, const std::vector<Option>& options,
                        long long step_budget, const std::vector<long long>& eval_at,
                        double eval_epsilon, long long eval_horizon, Rng& train_rng,
                        const Rng& eval_base, std::vector<long long>* visits = nullptr);

}  // namespace sropt
