#include "sropt/config.hpp"

#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace sropt {

Method method_from_string(const std::string& s) {
  if (s == "q") return Method::Q;
  if (s == "sr") return Method::SR;
  if (s == "sr-nu") return Method::SRNU;
  if (s == "sr-ae") return Method::SRAE;
  if (s == "eigen") return Method::Eigen;
  if (s == "eigen-nu") return Method::EigenNU;
  if (s == "incremental") return Method::Incremental;
  throw std::invalid_argument("unknown method '" + s + "'");
}

std::string method_to_string(Method m) {
  switch (m) {
    case Method::Q: return "q";
    case Method::SR: return "sr";
    case Method::SRNU: return "sr-nu";
    case Method::SRAE: return "sr-ae";
    case Method::Eigen: return "eigen";
    case Method::EigenNU: return "eigen-nu";
    case Method::Incremental: return "incremental";
  }
  return "?";
}

bool method_uses_options(Method m) { return m != Method::Q; }

namespace {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

long long to_int(const std::string& key, const std::string& v) {
  size_t pos = 0;
  long long out;
  try {
    out = std::stoll(v, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("config: bad integer for '" + key + "': " + v);
  }
  if (pos != v.size()) throw std::invalid_argument("config: bad integer for '" + key + "': " + v);
  return out;
}

double to_real(const std::string& key, const std::string& v) {
  size_t pos = 0;
  double out;
  try {
    out = std::stod(v, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("config: bad number for '" + key + "': " + v);
  }
  if (pos != v.size()) throw std::invalid_argument("config: bad number for '" + key + "': " + v);
  return out;
}

std::vector<int> to_int_list(const std::string& key, const std::string& v) {
  std::vector<int> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) throw std::invalid_argument("config: empty element in '" + key + "'");
    out.push_back(static_cast<int>(to_int(key, item)));
  }
  if (out.empty()) throw std::invalid_argument("config: empty list for '" + key + "'");
  return out;
}

}  // namespace

ExperimentConfig ExperimentConfig::parse(const std::string& text) {
  ExperimentConfig cfg;
  std::map<std::string, int> seen;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty() || val.empty())
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": empty key or value");
    if (++seen[key] > 1)
      throw std::invalid_argument("config: duplicate key '" + key + "'");

    if (key == "map") cfg.map_path = val;
    else if (key == "method") cfg.method = method_from_string(val);
    else if (key == "k") cfg.k = static_cast<int>(to_int(key, val));
    else if (key == "e") cfg.e = to_real(key, val);
    else if (key == "seeds") cfg.seeds = to_int_list(key, val);
    else if (key == "step_budget") cfg.step_budget = to_int(key, val);
    else if (key == "eval_points") cfg.eval_points = static_cast<int>(to_int(key, val));
    else if (key == "task_protocol") cfg.task_protocol = val;
    else if (key == "n_tasks") cfg.n_tasks = static_cast<int>(to_int(key, val));
    else if (key == "gamma") cfg.gamma = to_real(key, val);
    else if (key == "goal_reward") cfg.goal_reward = to_real(key, val);
    else if (key == "step_reward") cfg.step_reward = to_real(key, val);
    else if (key == "sr_budget") cfg.sr_budget = to_int(key, val);
    else if (key == "sr_alpha") cfg.sr_alpha = to_real(key, val);
    else if (key == "sr_alpha_decay_tau") cfg.sr_alpha_decay_tau = to_real(key, val);
    else if (key == "sr_episode_len") cfg.sr_episode_len = static_cast<int>(to_int(key, val));
    else if (key == "option_budget") cfg.option_budget = to_int(key, val);
    else if (key == "option_alpha") cfg.option_alpha = to_real(key, val);
    else if (key == "option_epsilon") cfg.option_epsilon = to_real(key, val);
    else if (key == "option_gamma") cfg.option_gamma = to_real(key, val);
    else if (key == "agent_alpha") cfg.agent_alpha = to_real(key, val);
    else if (key == "train_epsilon") cfg.train_epsilon = to_real(key, val);
    else if (key == "eval_epsilon") cfg.eval_epsilon = to_real(key, val);
    else if (key == "eval_horizon") cfg.eval_horizon = to_int(key, val);
    else if (key == "horizon") cfg.horizon = to_int(key, val);
    else if (key == "incr_iters") cfg.incr_iters = static_cast<int>(to_int(key, val));
    else if (key == "incr_k_intermediate") cfg.incr_k_intermediate = static_cast<int>(to_int(key, val));
    else if (key == "incr_pct_min") cfg.incr_pct_min = to_real(key, val);
    else if (key == "incr_pct_max") cfg.incr_pct_max = to_real(key, val);
    else if (key == "incr_explore_budget") cfg.incr_explore_budget = to_int(key, val);
    else if (key == "incr_ratio") cfg.incr_ratio = to_real(key, val);
    else if (key == "out_dir") cfg.out_dir = val;
    else if (key == "threads") cfg.threads = static_cast<int>(to_int(key, val));
    else throw std::invalid_argument("config: unknown key '" + key + "'");
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig ExperimentConfig::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  ExperimentConfig cfg = parse(ss.str());
  if (cfg.out_dir.empty()) {
    // Default output directory named after the config file.
    std::string base = path;
    const size_t slash = base.find_last_of('/');
    if (slash != std::string::npos) base = base.substr(slash + 1);
    const size_t dot = base.find_last_of('.');
    if (dot != std::string::npos && dot > 0) base = base.substr(0, dot);
    cfg.out_dir = "results/" + base;
  }
  return cfg;
}

void ExperimentConfig::validate() const {
  if (map_path.empty()) throw std::invalid_argument("config: 'map' is required");
  if (k < 1) throw std::invalid_argument("config: k must be >= 1");
  if (e <= 0.0) throw std::invalid_argument("config: e must be positive");
  if (seeds.empty()) throw std::invalid_argument("config: at least one seed");
  if (step_budget < 1) throw std::invalid_argument("config: step_budget must be positive");
  if (eval_points < 1 || eval_points > step_budget)
    throw std::invalid_argument("config: eval_points must lie in [1, step_budget]");
  if (task_protocol != "random-500" && task_protocol != "fixed-corner")
    throw std::invalid_argument("config: task_protocol must be random-500 or fixed-corner");
  if (n_tasks < 1) throw std::invalid_argument("config: n_tasks must be >= 1");
  if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("config: gamma must lie in (0,1)");
  for (double a : {sr_alpha, option_alpha, agent_alpha})
    if (!(a > 0.0 && a <= 1.0)) throw std::invalid_argument("config: learning rates must lie in (0,1]");
  for (double p : {option_epsilon, train_epsilon, eval_epsilon})
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("config: epsilons must lie in [0,1]");
  if (!(option_gamma > 0.0 && option_gamma < 1.0))
    throw std::invalid_argument("config: option_gamma must lie in (0,1)");
  if (eval_horizon < 1) throw std::invalid_argument("config: eval_horizon must be positive");
  if (sr_budget < 0 || option_budget < 0)
    throw std::invalid_argument("config: negative budget");
  if (horizon < 1) throw std::invalid_argument("config: horizon must be positive");
  if (incr_iters < 1) throw std::invalid_argument("config: incr_iters must be >= 1");
  if (!(incr_pct_min >= 0.0 && incr_pct_min < incr_pct_max && incr_pct_max <= 100.0))
    throw std::invalid_argument("config: bad incremental percentile range");
  if (incr_explore_budget < 1) throw std::invalid_argument("config: incr_explore_budget must be positive");
  if (incr_ratio <= 0.0) throw std::invalid_argument("config: incr_ratio must be positive");
  if (threads < 0) throw std::invalid_argument("config: threads must be >= 0");
}

}  // namespace sropt
