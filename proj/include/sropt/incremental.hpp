#pragma once

#include <vector>

#include "sropt/cluster.hpp"
#include "sropt/grid.hpp"
#include "sropt/option.hpp"
#include "sropt/rng.hpp"
#include "sropt/sr.hpp"

namespace sropt {

struct IncrementalConfig {
  int n_iters = 4;
  int k_final = 10;
  int k_intermediate = 0;  // 0: same as k_final
  double pct_min = 5.0;
  double pct_max = 40.0;
  long long explore_budget = 150000;     // primitive steps per iteration
  double option_sampling_ratio = 500.0;  // actions per option draw
  OptionQParams option_params;
  double sr_alpha = 0.1;
  double sr_alpha_decay_tau = 3000.0;
};

struct UpdateSRStats {
  long long primitive_steps = 0;  // all primitive steps, option-internal included
  long long sr_updates = 0;       // td updates (primitive decisions only)
  long long option_steps = 0;     // primitive steps taken inside options
};

// Finite-horizon SR collection with options assisting exploration. Episodes
// start at `start` and last at most `horizon` primitive steps; each decision
// picks an option with probability 1/(1+ratio), else a uniform primitive.
// Only primitive decisions update the SR; option-internal steps consume the
// horizon and budget untouched. An option truncated by the horizon ends the
// episode.
UpdateSRStats update_sr_with_options(SRMatrix& sr, const GridMap& map,
                                     const std::vector<Option>& options, long long budget,
                                     double ratio, long long horizon, int start, Rng& rng);

struct IterationSnapshot {
  std::vector<double> l1;
  std::vector<int> candidates;
  std::vector<int> subgoal_states;
  int k_used = 0;  // may be below k_intermediate when candidates are scarce
};

struct IncrementalResult {
  SRMatrix sr;
  SubGoalSet goals;
  std::vector<Option> options;
  std::vector<IterationSnapshot> iterations;
  long long total_primitive_steps = 0;  // exploration + all option training
  long long sr_updates = 0;
  long long option_internal_steps = 0;
};

// Alternates option-assisted SR collection with option reconstruction from
// percentile-filtered candidate sub-goals, discarding the old option set each
// iteration, then builds the final option set from all reached states.
IncrementalResult run_incremental(const GridMap& map, const TaskSpec& task,
                                  const IncrementalConfig& cfg, const Rng& rng_base);

}  // namespace sropt
