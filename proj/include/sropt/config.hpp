#pragma once

#include <string>
#include <vector>

namespace sropt {

enum class Method { Q, SR, SRNU, SRAE, Eigen, EigenNU, Incremental };

Method method_from_string(const std::string& s);
std::string method_to_string(Method m);
bool method_uses_options(Method m);

// Flat key = value experiment configuration. Parsing is strict: unknown keys,
// malformed values and out-of-range settings are errors, and every field is
// validated before a run starts.
struct ExperimentConfig {
  std::string map_path;
  Method method = Method::Q;
  int k = 4;
  double e = 15.0;
  std::vector<int> seeds = {1, 2, 3, 4, 5};
  long long step_budget = 50000;  // SMDP training steps per task
  int eval_points = 100;
  std::string task_protocol = "random-500";  // or "fixed-corner"
  int n_tasks = 500;
  double gamma = 0.99;
  double goal_reward = 10.0;
  double step_reward = 0.0;

  long long sr_budget = 0;  // 0: max(2e6, 20000*|S|)
  double sr_alpha = 0.1;
  double sr_alpha_decay_tau = 3000.0;
  int sr_episode_len = 0;  // 0: 10*max(w,h)

  long long option_budget = 0;  // 0: max(200000, 2000*|S|)
  double option_alpha = 0.1;
  double option_epsilon = 0.1;
  double option_gamma = 0.99;

  double agent_alpha = 0.1;
  double train_epsilon = 0.1;
  double eval_epsilon = 0.05;
  long long eval_horizon = 300;

  long long horizon = 100;  // fixed-corner episodes
  int incr_iters = 4;
  int incr_k_intermediate = 0;  // 0: k
  double incr_pct_min = 5.0;
  double incr_pct_max = 40.0;
  long long incr_explore_budget = 150000;
  double incr_ratio = 500.0;

  std::string out_dir;
  int threads = 0;  // 0: library default

  static ExperimentConfig parse(const std::string& text);
  static ExperimentConfig parse_file(const std::string& path);
  void validate() const;
};

}  // namespace sropt
