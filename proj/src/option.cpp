#include "sropt/option.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <stdexcept>

namespace sropt {

namespace {

// Epsilon-greedy with uniform tie-breaking among exact-equal maxima.
int explore_action(const Mat& q, int s, double eps, Rng& rng) {
  if (rng.uniform_real() < eps) return static_cast<int>(rng.uniform_int(kNumActions));
  const double* row = q.row(s);
  double best = row[0];
  for (int a = 1; a < kNumActions; ++a) best = std::max(best, row[a]);
  int ties = 0;
  int pick = 0;
  for (int a = 0; a < kNumActions; ++a)
    if (row[a] == best) ++ties;
  if (ties == 1) {
    for (int a = 0; a < kNumActions; ++a)
      if (row[a] == best) return a;
  }
  int which = static_cast<int>(rng.uniform_int(ties));
  for (int a = 0; a < kNumActions; ++a) {
    if (row[a] == best) {
      if (which == 0) {
        pick = a;
        break;
      }
      --which;
    }
  }
  return pick;
}

}  // namespace

Option train_option(const GridMap& map, const PseudoReward& pr, int goal_state,
                    const OptionQParams& params, Rng& rng) {
  const int n = map.num_states();
  if (static_cast<int>(pr.row.size()) != n)
    throw std::invalid_argument("train_option: reward row size mismatch");
  if (params.budget <= 0) throw std::invalid_argument("train_option: budget must be positive");

  Option opt;
  opt.goal = goal_state;
  opt.q = Mat(n, kNumActions);
  opt.max_duration = n;
  opt.term_tol = params.term_tol;

  const int cap = params.episode_cap > 0 ? params.episode_cap : n;
  long long remaining = params.budget;
  while (remaining > 0) {
    int s = static_cast<int>(rng.uniform_int(n));
    for (int t = 0; t < cap && remaining > 0; ++t) {
      const int a = explore_action(opt.q, s, params.epsilon, rng);
      const int s2 = step(map, s, static_cast<Action>(a));
      const double r = pseudo_reward(pr, s, s2);
      // Termination is judged on the next state with the current estimate;
      // terminal states bootstrap with 0.
      const bool terminal = opt.value(s2) <= params.term_tol;
      const double target = r + (terminal ? 0.0 : params.gamma * opt.value(s2));
      opt.q.at(s, a) += params.alpha * (target - opt.q.at(s, a));
      --remaining;
      s = s2;
      if (terminal) break;
    }
  }
  opt.trained = true;
  return opt;
}

OptionExecution execute_option(const GridMap& map, const Option& opt, int start) {
  if (!opt.trained) throw std::logic_error("execute_option: option not trained");
  OptionExecution ex;
  ex.terminal = start;
  if (opt.terminates(start)) return ex;
  int s = start;
  while (ex.steps < opt.max_duration) {
    const int a = opt.greedy_action(s);
    s = step(map, s, static_cast<Action>(a));
    ++ex.steps;
    ex.visited.push_back(s);
    if (opt.terminates(s)) {
      ex.terminal = s;
      return ex;
    }
  }
  ex.terminal = s;
  ex.hit_cap = true;
  return ex;
}

namespace {
constexpr uint32_t kOptMagic = 0x4f505431;  // "OPT1"
}

void save_options(const std::vector<Option>& options, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("save_options: cannot open " + path);
  const uint32_t magic = kOptMagic;
  const uint32_t count = static_cast<uint32_t>(options.size());
  out.write(reinterpret_cast<const char*>(&magic), sizeof magic);
  out.write(reinterpret_cast<const char*>(&count), sizeof count);
  for (const auto& o : options) {
    const uint32_t id = static_cast<uint32_t>(o.id);
    const uint32_t goal = static_cast<uint32_t>(o.goal);
    const uint32_t n = static_cast<uint32_t>(o.q.rows);
    const uint32_t dur = static_cast<uint32_t>(o.max_duration);
    out.write(reinterpret_cast<const char*>(&id), sizeof id);
    out.write(reinterpret_cast<const char*>(&goal), sizeof goal);
    out.write(reinterpret_cast<const char*>(&n), sizeof n);
    out.write(reinterpret_cast<const char*>(&dur), sizeof dur);
    out.write(reinterpret_cast<const char*>(&o.term_tol), sizeof o.term_tol);
    out.write(reinterpret_cast<const char*>(o.q.a.data()),
              static_cast<std::streamsize>(o.q.a.size() * sizeof(double)));
  }
  if (!out) throw std::runtime_error("save_options: write failed for " + path);
}

std::vector<Option> load_options(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("load_options: cannot open " + path);
  uint32_t magic = 0, count = 0;
  in.read(reinterpret_cast<char*>(&magic), sizeof magic);
  in.read(reinterpret_cast<char*>(&count), sizeof count);
  if (!in || magic != kOptMagic) throw std::runtime_error("load_options: bad header in " + path);
  std::vector<Option> options(count);
  for (auto& o : options) {
    uint32_t id = 0, goal = 0, n = 0, dur = 0;
    in.read(reinterpret_cast<char*>(&id), sizeof id);
    in.read(reinterpret_cast<char*>(&goal), sizeof goal);
    in.read(reinterpret_cast<char*>(&n), sizeof n);
    in.read(reinterpret_cast<char*>(&dur), sizeof dur);
    in.read(reinterpret_cast<char*>(&o.term_tol), sizeof o.term_tol);
    o.id = static_cast<int>(id);
    o.goal = static_cast<int>(goal);
    o.max_duration = static_cast<int>(dur);
    o.q = Mat(static_cast<int>(n), kNumActions);
    in.read(reinterpret_cast<char*>(o.q.a.data()),
            static_cast<std::streamsize>(o.q.a.size() * sizeof(double)));
    o.trained = true;
  }
  if (!in) throw std::runtime_error("load_options: truncated file " + path);
  return options;
}

}  // namespace sropt
