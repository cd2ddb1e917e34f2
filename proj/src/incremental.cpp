#include "sropt/incremental.hpp"

#include <algorithm>
#include <cstring>
#include <stdexcept>

namespace sropt {

UpdateSRStats update_sr_with_options(SRMatrix& sr, const GridMap& map,
                                     const std::vector<Option>& options, long long budget,
                                     double ratio, long long horizon, int start, Rng& rng) {
  if (horizon <= 0) throw std::invalid_argument("update_sr_with_options: finite horizon required");
  if (ratio <= 0.0) throw std::invalid_argument("update_sr_with_options: ratio must be positive");
  if (budget < 0) throw std::invalid_argument("update_sr_with_options: negative budget");
  const int n = map.num_states();
  ActionDist uniform;
  uniform.fill(1.0 / kNumActions);
  UpdateSRStats stats;
  const int m = static_cast<int>(options.size());
  while (stats.primitive_steps < budget) {
    int s = start >= 0 ? start : static_cast<int>(rng.uniform_int(n));
    long long t = 0;
    while (t < horizon && stats.primitive_steps < budget) {
      const bool pick_option = m > 0 && rng.uniform_real() < 1.0 / (1.0 + ratio);
      if (pick_option) {
        const Option& opt = options[rng.uniform_int(m)];
        if (opt.terminates(s)) continue;
        int dur = 0;
        // Option-internal steps consume the horizon but never update the SR.
        while (dur < opt.max_duration && t < horizon && stats.primitive_steps < budget) {
          const int a = opt.greedy_action(s);
          s = step(map, s, static_cast<Action>(a));
          ++dur;
          ++t;
          ++stats.primitive_steps;
          ++stats.option_steps;
          if (opt.terminates(s)) break;
        }
      } else {
        const int a = sample_action(uniform, rng);
        const int s2 = step(map, s, static_cast<Action>(a));
        td_update(sr, s, s2);
        ++t;
        ++stats.primitive_steps;
        ++stats.sr_updates;
        s = s2;
      }
    }
  }
  return stats;
}

namespace {

PseudoReward snapshot_row(const SRMatrix& sr, int state) {
  PseudoReward pr;
  pr.row.assign(sr.psi.row(state), sr.psi.row(state) + sr.size());
  return pr;
}

}  // namespace

IncrementalResult run_incremental(const GridMap& map, const TaskSpec& task,
                                  const IncrementalConfig& cfg, const Rng& rng_base) {
  validate_task(map, task);
  if (task.horizon <= 0) throw std::invalid_argument("run_incremental: finite-horizon task required");
  if (cfg.n_iters < 1) throw std::invalid_argument("run_incremental: n_iters must be >= 1");
  if (cfg.k_final < 1) throw std::invalid_argument("run_incremental: k_final must be >= 1");
  if (!(cfg.pct_min >= 0.0 && cfg.pct_min < cfg.pct_max && cfg.pct_max <= 100.0))
    throw std::invalid_argument("run_incremental: bad percentile range");

  const int n = map.num_states();
  const int k_inter = cfg.k_intermediate > 0 ? cfg.k_intermediate : cfg.k_final;

  OptionQParams opt_params = cfg.option_params;
  {
    const long long cap = opt_params.episode_cap > 0 ? opt_params.episode_cap : n;
    opt_params.episode_cap = static_cast<int>(std::min(cap, task.horizon));
  }

  IncrementalResult res;
  res.sr = make_sr(n, task.gamma, cfg.sr_alpha, cfg.sr_alpha_decay_tau);
  std::vector<Option> current;

  const auto train_set = [&](const SubGoalSet& goals, const char* stream, uint64_t iter) {
    std::vector<Option> set(goals.goals.size());
#pragma omp parallel for schedule(dynamic)
    for (int j = 0; j < static_cast<int>(goals.goals.size()); ++j) {
      const PseudoReward pr = snapshot_row(res.sr, goals.goals[j].state);
      Rng orng = rng_base.child(stream, iter, static_cast<uint64_t>(j));
      set[j] = train_option(map, pr, goals.goals[j].state, opt_params, orng);
      set[j].id = j;
    }
    res.total_primitive_steps += static_cast<long long>(goals.goals.size()) * opt_params.budget;
    return set;
  };

  for (int it = 0; it < cfg.n_iters; ++it) {
    Rng explore_rng = rng_base.child("incr-explore", it);
    const auto stats = update_sr_with_options(res.sr, map, current, cfg.explore_budget,
                                              cfg.option_sampling_ratio, task.horizon,
                                              task.start, explore_rng);
    res.total_primitive_steps += stats.primitive_steps;
    res.sr_updates += stats.sr_updates;
    res.option_internal_steps += stats.option_steps;

    IterationSnapshot snap;
    snap.l1 = l1_norms(res.sr);
    int reached = 0;
    for (double v : snap.l1)
      if (v > 0.0) ++reached;
    if (reached >= 2) snap.candidates = filter_candidates(res.sr, cfg.pct_min, cfg.pct_max);

    current.clear();  // the old set is discarded before the new one is built
    int k_it = std::min<int>(k_inter, static_cast<int>(snap.candidates.size()));
    if (k_it >= 1) {
      const Mat rows = gather_rows(res.sr, snap.candidates);
      k_it = std::min(k_it, count_distinct_rows(rows));
      if (k_it >= 1) {
        Rng crng = rng_base.child("incr-cluster", it);
        const auto clusters = kmeanspp(rows, k_it, crng);
        const auto goals = select_landmarks(res.sr, clusters, snap.candidates);
        current = train_set(goals, "incr-option", static_cast<uint64_t>(it));
        for (const auto& g : goals.goals) snap.subgoal_states.push_back(g.state);
      }
    }
    snap.k_used = static_cast<int>(current.size());
    res.iterations.push_back(std::move(snap));
  }

  // Standard build from the final SR over all reached states.
  const auto participants = nonzero_states(res.sr);
  const Mat rows = gather_rows(res.sr, participants);
  const int k_f = std::min(cfg.k_final, count_distinct_rows(rows));
  if (k_f < 1) throw std::runtime_error("run_incremental: nothing reached, cannot cluster");
  Rng crng = rng_base.child("final-cluster");
  const auto clusters = kmeanspp(rows, k_f, crng);
  res.goals = select_landmarks(res.sr, clusters, participants);
  res.options = train_set(res.goals, "final-option", 0);
  return res;
}

}  // namespace sropt
