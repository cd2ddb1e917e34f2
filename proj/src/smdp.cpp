#include "sropt/smdp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sropt {

SMDPQTable make_agent(int n_states, int n_options, double alpha, double gamma, double epsilon) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("agent: gamma must lie in (0,1)");
  SMDPQTable agent;
  agent.q = Mat(n_states, kNumActions + n_options);
  agent.alpha = alpha;
  agent.gamma = gamma;
  agent.epsilon = epsilon;
  return agent;
}

namespace {

// Argmax with uniform tie-breaking; draws from rng only when tied.
int argmax_uniform_tie(const double* row, int n, Rng& rng) {
  double best = row[0];
  for (int c = 1; c < n; ++c) best = std::max(best, row[c]);
  int ties = 0;
  for (int c = 0; c < n; ++c)
    if (row[c] == best) ++ties;
  if (ties == 1)
    for (int c = 0;; ++c)
      if (row[c] == best) return c;
  int which = static_cast<int>(rng.uniform_int(ties));
  for (int c = 0;; ++c) {
    if (row[c] == best) {
      if (which == 0) return c;
      --which;
    }
  }
}

}  // namespace

int choose(const SMDPQTable& agent, ExplorationScheme& scheme, int s, double epsilon, Rng& rng) {
  const int m = agent.num_options();
  const int total = agent.num_choices();
  int col;
  if (rng.uniform_real() < epsilon) {
    if (scheme.kind == ExploreKind::Uniform || m == 0) {
      col = static_cast<int>(rng.uniform_int(total));
    } else {
      double e_eff = scheme.e;
      if (scheme.kind == ExploreKind::AE && scheme.last_option >= 0 &&
          !scheme.cluster_sizes.empty()) {
        double avg = 0.0;
        for (int sz : scheme.cluster_sizes) avg += sz;
        avg /= static_cast<double>(scheme.cluster_sizes.size());
        if (avg > 0.0)
          e_eff = scheme.e * static_cast<double>(scheme.cluster_sizes[scheme.last_option]) / avg;
      }
      if (rng.uniform_real() < 1.0 / (1.0 + e_eff))
        col = kNumActions + static_cast<int>(rng.uniform_int(m));
      else
        col = static_cast<int>(rng.uniform_int(kNumActions));
    }
  } else {
    col = argmax_uniform_tie(agent.q.row(s), total, rng);
  }
  if (col >= kNumActions) scheme.last_option = col - kNumActions;
  return col;
}

void smdp_update(SMDPQTable& agent, const Transition& tr) {
  double bootstrap = 0.0;
  if (!tr.done)
    bootstrap = std::pow(agent.gamma, static_cast<double>(tr.steps_elapsed)) *
                agent.state_value(tr.next_state);
  double& q = agent.q.at(tr.state, tr.choice);
  q += agent.alpha * (tr.reward + bootstrap - q);
}

void intra_option_update(SMDPQTable& agent, const std::vector<Option>& options,
                         const Transition& tr) {
  if (tr.choice >= kNumActions)
    throw std::invalid_argument("intra_option_update: primitive transition required");
  for (size_t i = 0; i < options.size(); ++i) {
    const Option& o = options[i];
    if (o.greedy_action(tr.state) != tr.choice) continue;
    const int col = kNumActions + static_cast<int>(i);
    double u = 0.0;
    if (!tr.done)
      u = o.terminates(tr.next_state) ? agent.state_value(tr.next_state)
                                      : agent.q.at(tr.next_state, col);
    double& q = agent.q.at(tr.state, col);
    q += agent.alpha * (tr.reward + agent.gamma * u - q);
  }
}

namespace {

// Fires the eval callback at exact primitive-step counts, mid-option
// included.
struct StepMeter {
  long long count = 0;
  const std::vector<long long>* checkpoints = nullptr;
  size_t next = 0;
  std::function<void(int)> fire;

  void tick() {
    ++count;
    while (checkpoints && next < checkpoints->size() && count >= (*checkpoints)[next]) {
      fire(static_cast<int>(next));
      ++next;
    }
  }
};

EpisodeResult run_one_episode(const GridMap& map, const TaskSpec& task, SMDPQTable& agent,
                              ExplorationScheme& scheme, const std::vector<Option>& options,
                              bool learn, double epsilon, long long step_cap,
                              long long decision_cap, Rng& rng, std::vector<long long>* visits,
                              StepMeter* meter, long long budget_limit) {
  const int n = map.num_states();
  EpisodeResult res;
  int s = task.start >= 0 ? task.start : static_cast<int>(rng.uniform_int(n));
  if (visits) ++(*visits)[s];
  if (s == task.goal) {
    // First-arrival convention: starting on the goal pays out immediately.
    res.disc_return = res.undisc_return = task.goal_reward;
    res.reached_goal = true;
    return res;
  }
  const auto out_of_budget = [&]() {
    return budget_limit >= 0 && meter && meter->count >= budget_limit;
  };
  long long decisions = 0;
  bool done = false;
  double episode_discount = 1.0;  // gamma^steps, kept incrementally
  while (!done) {
    if (step_cap > 0 && res.steps >= step_cap) break;
    if (decisions >= decision_cap) break;
    if (out_of_budget()) break;
    ++decisions;
    const int col = choose(agent, scheme, s, epsilon, rng);
    if (col < kNumActions) {
      const int s2 = step(map, s, static_cast<Action>(col));
      const double r = task.step_reward + (s2 == task.goal ? task.goal_reward : 0.0);
      done = s2 == task.goal;
      const Transition tr{s, col, s2, r, done, 1};
      if (learn) {
        smdp_update(agent, tr);
        intra_option_update(agent, options, tr);
      }
      res.disc_return += episode_discount * r;
      res.undisc_return += r;
      episode_discount *= task.gamma;
      ++res.steps;
      if (visits) ++(*visits)[s2];
      if (meter) meter->tick();
      s = s2;
    } else {
      const Option& opt = options[col - kNumActions];
      const int s0 = s;
      int cur = s;
      double acc = 0.0;            // discounted reward within the option
      double option_discount = 1.0;  // gamma^tau
      long long tau = 0;
      if (!opt.terminates(cur)) {
        while (tau < opt.max_duration) {
          const int a = opt.greedy_action(cur);
          const int s2 = step(map, cur, static_cast<Action>(a));
          const double r = task.step_reward + (s2 == task.goal ? task.goal_reward : 0.0);
          done = s2 == task.goal;
          const Transition ptr{cur, a, s2, r, done, 1};
          if (learn) intra_option_update(agent, options, ptr);
          acc += option_discount * r;
          res.disc_return += episode_discount * r;
          res.undisc_return += r;
          option_discount *= task.gamma;
          episode_discount *= task.gamma;
          ++tau;
          ++res.steps;
          if (visits) ++(*visits)[s2];
          if (meter) meter->tick();
          cur = s2;
          if (done) break;  // environment termination dominates
          if (opt.terminates(cur)) break;
          if (step_cap > 0 && res.steps >= step_cap) break;
          if (out_of_budget()) break;
        }
      }
      // A pick at a state where the option terminates at once moves nothing
      // and records no transition.
      if (tau > 0) {
        const Transition tr{s0, col, cur, acc, done, tau};
        if (learn) smdp_update(agent, tr);
      }
      s = cur;
    }
  }
  res.reached_goal = done;
  return res;
}

}  // namespace

EpisodeResult run_episode(const GridMap& map, const TaskSpec& task, SMDPQTable& agent,
                          ExplorationScheme& scheme, const std::vector<Option>& options,
                          const EpisodeOptions& opts, Rng& rng, std::vector<long long>* visits) {
  validate_task(map, task);
  const long long cap = opts.step_cap > 0 ? opts.step_cap : task.horizon;
  return run_one_episode(map, task, agent, scheme, options, opts.learn, opts.epsilon, cap,
                         opts.decision_cap, rng, visits, nullptr, -1);
}

TaskCurve train_on_task(const GridMap& map, const TaskSpec& task, SMDPQTable& agent,
                        ExplorationScheme& scheme, const std::vector<Option>& options,
                        long long step_budget, const std::vector<long long>& eval_at,
                        double eval_epsilon, long long eval_horizon, Rng& train_rng,
                        const Rng& eval_base, std::vector<long long>* visits) {
  validate_task(map, task);
  if (task.start == task.goal) throw std::invalid_argument("train_on_task: degenerate task");
  for (size_t i = 0; i + 1 < eval_at.size(); ++i)
    if (eval_at[i] >= eval_at[i + 1])
      throw std::invalid_argument("train_on_task: checkpoints must be ascending");
  if (!eval_at.empty() && eval_at.back() > step_budget)
    throw std::invalid_argument("train_on_task: checkpoint beyond budget");

  TaskCurve curve;
  curve.eval_steps = eval_at;
  curve.disc.assign(eval_at.size(), 0.0);
  curve.undisc.assign(eval_at.size(), 0.0);

  StepMeter meter;
  meter.checkpoints = &eval_at;
  meter.fire = [&](int idx) {
    Rng erng = eval_base.child("pt", static_cast<uint64_t>(idx));
    ExplorationScheme esch = scheme;
    const auto res =
        run_one_episode(map, task, agent, esch, options, /*learn=*/false, eval_epsilon,
                        eval_horizon, 10 * eval_horizon + 100, erng, nullptr, nullptr, -1);
    curve.disc[idx] = res.disc_return;
    curve.undisc[idx] = res.undisc_return;
  };

  const long long cap = task.horizon;  // 0 = unbounded episodes
  long long stall_guard = 0;
  while (meter.count < step_budget) {
    const long long before = meter.count;
    run_one_episode(map, task, agent, scheme, options, /*learn=*/true, agent.epsilon, cap,
                    1000000, train_rng, visits, &meter, step_budget);
    if (meter.count == before) {
      if (++stall_guard > 8) break;  // no primitive progress; bail out
    } else {
      stall_guard = 0;
    }
  }
  // Fire any checkpoint not reached (possible only after a stall bail-out).
  while (meter.next < eval_at.size()) {
    meter.fire(static_cast<int>(meter.next));
    ++meter.next;
  }
  return curve;
}

}  // namespace sropt
