#include "sropt/experiment.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fs = std::filesystem;

namespace sropt {

std::vector<TaskSpec> generate_tasks(const GridMap& map, int n, const TaskSpec& proto, Rng& rng) {
  const int ns = map.num_states();
  if (n < 1) throw std::invalid_argument("generate_tasks: n must be >= 1");
  if (ns < 2) throw std::invalid_argument("generate_tasks: need at least 2 states");
  std::vector<TaskSpec> tasks(n, proto);
  for (auto& t : tasks) {
    t.start = static_cast<int>(rng.uniform_int(ns));
    do {
      t.goal = static_cast<int>(rng.uniform_int(ns));
    } while (t.goal == t.start);
  }
  return tasks;
}

TaskSpec fixed_corner_task(const GridMap& map, const ExperimentConfig& cfg) {
  int start = -1, goal = -1;
  for (int r = map.height - 1; r >= 0 && start < 0; --r)
    for (int c = 0; c < map.width && start < 0; ++c)
      if (!map.is_blocked(r, c)) start = map.state_at[map.cell(r, c)];
  for (int r = 0; r < map.height && goal < 0; ++r)
    for (int c = map.width - 1; c >= 0 && goal < 0; --c)
      if (!map.is_blocked(r, c)) goal = map.state_at[map.cell(r, c)];
  TaskSpec task;
  task.start = start;
  task.goal = goal;
  task.gamma = cfg.gamma;
  task.goal_reward = cfg.goal_reward;
  task.step_reward = cfg.step_reward;
  task.horizon = cfg.horizon;
  return task;
}

void render_heatmap(const std::vector<long long>& counts, const GridMap& map,
                    const std::string& path) {
  if (static_cast<int>(counts.size()) != map.num_states())
    throw std::invalid_argument("render_heatmap: counts length mismatch");
  long long max_count = 0;
  for (long long c : counts) max_count = std::max(max_count, c);
  const double denom = max_count > 0 ? std::log1p(static_cast<double>(max_count)) : 1.0;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("render_heatmap: cannot open " + path);
  out << "P2\n" << map.width << ' ' << map.height << "\n255\n";
  for (int r = 0; r < map.height; ++r) {
    for (int c = 0; c < map.width; ++c) {
      int v = 0;
      const int s = map.state_at[map.cell(r, c)];
      if (s >= 0 && counts[s] > 0)
        v = static_cast<int>(std::lround(255.0 * std::log1p(static_cast<double>(counts[s])) / denom));
      out << v << (c + 1 == map.width ? '\n' : ' ');
    }
  }
  if (!out) throw std::runtime_error("render_heatmap: write failed for " + path);
}

void save_counts(const std::vector<long long>& counts, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_counts: cannot open " + path);
  for (long long c : counts) out << c << '\n';
  if (!out) throw std::runtime_error("save_counts: write failed for " + path);
}

std::vector<long long> load_counts(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_counts: cannot open " + path);
  std::vector<long long> counts;
  long long v;
  while (in >> v) counts.push_back(v);
  if (counts.empty()) throw std::runtime_error("load_counts: no counts in " + path);
  return counts;
}

std::vector<long long> explore_visitation(const GridMap& map, const std::vector<Option>& options,
                                          double e, long long budget, long long episode_len,
                                          Rng& rng) {
  if (options.empty()) throw std::invalid_argument("explore_visitation: no options");
  if (e <= 0.0) throw std::invalid_argument("explore_visitation: e must be positive");
  const int n = map.num_states();
  const int m = static_cast<int>(options.size());
  std::vector<long long> counts(n, 0);
  long long total = 0;
  while (total < budget) {
    int s = static_cast<int>(rng.uniform_int(n));
    ++counts[s];
    long long t = 0;
    while (t < episode_len && total < budget) {
      if (rng.uniform_real() < 1.0 / (1.0 + e)) {
        const Option& opt = options[rng.uniform_int(m)];
        if (opt.terminates(s)) continue;
        int dur = 0;
        while (dur < opt.max_duration && t < episode_len && total < budget) {
          s = step(map, s, static_cast<Action>(opt.greedy_action(s)));
          ++counts[s];
          ++dur;
          ++t;
          ++total;
          if (opt.terminates(s)) break;
        }
      } else {
        s = step(map, s, static_cast<Action>(rng.uniform_int(kNumActions)));
        ++counts[s];
        ++t;
        ++total;
      }
    }
  }
  return counts;
}

long long auto_sr_budget(const ExperimentConfig& cfg, const GridMap& map) {
  if (cfg.sr_budget > 0) return cfg.sr_budget;
  return std::max<long long>(2000000, 20000LL * map.num_states());
}

long long auto_option_budget(const ExperimentConfig& cfg, const GridMap& map) {
  if (cfg.option_budget > 0) return cfg.option_budget;
  return std::max<long long>(200000, 2000LL * map.num_states());
}

namespace {

std::vector<Option> train_subgoal_options(const GridMap& map, const SRMatrix& sr,
                                          const SubGoalSet& goals, const OptionQParams& params,
                                          const Rng& root) {
  std::vector<Option> options(goals.goals.size());
#pragma omp parallel for schedule(dynamic)
  for (int j = 0; j < static_cast<int>(goals.goals.size()); ++j) {
    PseudoReward pr;
    const int g = goals.goals[j].state;
    pr.row.assign(sr.psi.row(g), sr.psi.row(g) + sr.size());
    Rng orng = root.child("option", static_cast<uint64_t>(j));
    options[j] = train_option(map, pr, g, params, orng);
    options[j].id = j;
  }
  return options;
}

}  // namespace

OptionsBundle build_options(const GridMap& map, const ExperimentConfig& cfg, const Rng& root,
                            const LaplacianSpectrum* spectrum) {
  OptionsBundle bundle;
  if (cfg.method == Method::Q) return bundle;

  OptionQParams opt_params;
  opt_params.alpha = cfg.option_alpha;
  opt_params.epsilon = cfg.option_epsilon;
  opt_params.gamma = cfg.option_gamma;
  opt_params.budget = auto_option_budget(cfg, map);

  if (cfg.method == Method::Eigen || cfg.method == Method::EigenNU) {
    if (spectrum == nullptr)
      throw std::invalid_argument("build_options: eigen method needs a spectrum");
    bundle.options = train_eigen_options(map, *spectrum, cfg.k, opt_params, root.child("eigen"));
    return bundle;
  }

  if (cfg.method == Method::Incremental) {
    IncrementalConfig inc;
    inc.n_iters = cfg.incr_iters;
    inc.k_final = cfg.k;
    inc.k_intermediate = cfg.incr_k_intermediate;
    inc.pct_min = cfg.incr_pct_min;
    inc.pct_max = cfg.incr_pct_max;
    inc.explore_budget = cfg.incr_explore_budget;
    inc.option_sampling_ratio = cfg.incr_ratio;
    inc.option_params = opt_params;
    inc.sr_alpha = cfg.sr_alpha;
    inc.sr_alpha_decay_tau = cfg.sr_alpha_decay_tau;
    const TaskSpec task = fixed_corner_task(map, cfg);
    auto res = run_incremental(map, task, inc, root);
    bundle.options = std::move(res.options);
    bundle.goals = std::move(res.goals);
    bundle.sr = std::move(res.sr);
    bundle.has_sr = true;
    bundle.incr_iterations = std::move(res.iterations);
    return bundle;
  }

  // SR family: learn the SR, cluster its rows, map centroids to landmarks.
  SRLearnConfig srcfg;
  srcfg.gamma = cfg.gamma;
  srcfg.alpha = cfg.sr_alpha;
  srcfg.alpha_decay_tau = cfg.sr_alpha_decay_tau;
  srcfg.budget = auto_sr_budget(cfg, map);
  srcfg.episode_len = cfg.sr_episode_len;
  Rng sr_rng = root.child("sr");
  bundle.sr = learn_sr(map, uniform_policy(map.num_states()), srcfg, sr_rng);
  bundle.has_sr = true;

  const auto participants = nonzero_states(bundle.sr);
  const Mat rows = gather_rows(bundle.sr, participants);
  const int k_eff = std::min(cfg.k, count_distinct_rows(rows));
  if (k_eff < 1) throw std::runtime_error("build_options: no states reached by SR learning");
  Rng crng = root.child("cluster");
  const auto clusters = kmeanspp(rows, k_eff, crng);
  bundle.goals = select_landmarks(bundle.sr, clusters, participants);
  bundle.options = train_subgoal_options(map, bundle.sr, bundle.goals, opt_params, root);
  return bundle;
}

ExplorationScheme scheme_for(Method method, double e, const SubGoalSet& goals) {
  ExplorationScheme scheme;
  scheme.e = e;
  switch (method) {
    case Method::SRNU:
    case Method::EigenNU:
      scheme.kind = ExploreKind::NU;
      break;
    case Method::SRAE:
      scheme.kind = ExploreKind::AE;
      for (const auto& g : goals.goals) scheme.cluster_sizes.push_back(g.cluster_size);
      break;
    default:
      scheme.kind = ExploreKind::Uniform;
      break;
  }
  return scheme;
}

double curve_auc(const std::vector<double>& values) {
  if (values.empty()) return 0.0;
  double s = 0.0;
  for (double v : values) s += v;
  return s / static_cast<double>(values.size());
}

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

void write_curve_csv(const std::string& path, const std::vector<long long>& steps,
                     const std::vector<double>& disc, const std::vector<double>& disc_se,
                     const std::vector<double>& undisc, const std::vector<double>& undisc_se) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << "step,mean_return,stderr_over_seeds,mean_return_undisc,stderr_undisc\n";
  for (size_t i = 0; i < steps.size(); ++i)
    out << steps[i] << ',' << fmt(disc[i]) << ',' << fmt(disc_se[i]) << ',' << fmt(undisc[i])
        << ',' << fmt(undisc_se[i]) << '\n';
  if (!out) throw std::runtime_error("write failed for " + path);
}

struct SeedArtifacts {
  std::vector<long long> visits;
  OptionsBundle bundle;
};

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.method == Method::Incremental && cfg.task_protocol != "fixed-corner")
    throw std::invalid_argument("run_experiment: incremental requires the fixed-corner protocol");
  if (cfg.threads > 0) omp_set_num_threads(cfg.threads);
  const GridMap map = load_map(cfg.map_path);

  ExperimentResult result;
  result.out_dir = cfg.out_dir.empty() ? std::string("results/run") : cfg.out_dir;
  fs::create_directories(result.out_dir);

  const int points = cfg.eval_points;
  result.eval_steps.resize(points);
  for (int j = 0; j < points; ++j)
    result.eval_steps[j] = cfg.step_budget * (j + 1) / points;

  // The spectrum is seed-independent; compute it once.
  LaplacianSpectrum spectrum;
  const bool eigen_method = cfg.method == Method::Eigen || cfg.method == Method::EigenNU;
  if (eigen_method) spectrum = laplacian_spectrum(map);

  for (int seed : cfg.seeds) {
    SeedRecord rec;
    rec.seed = seed;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      const Rng root(static_cast<uint64_t>(seed));
      const std::string seed_dir = result.out_dir + "/seed" + std::to_string(seed);
      fs::create_directories(seed_dir);

      OptionsBundle bundle = build_options(map, cfg, root, eigen_method ? &spectrum : nullptr);

      // Tasks are derived from the seed only, so every method sees the same set.
      TaskSpec proto;
      proto.gamma = cfg.gamma;
      proto.goal_reward = cfg.goal_reward;
      proto.step_reward = cfg.step_reward;
      std::vector<TaskSpec> tasks;
      if (cfg.task_protocol == "fixed-corner") {
        tasks.push_back(fixed_corner_task(map, cfg));
      } else {
        Rng trng = root.child("tasks");
        tasks = generate_tasks(map, cfg.n_tasks, proto, trng);
      }

      const ExplorationScheme base_scheme = scheme_for(cfg.method, cfg.e, bundle.goals);
      const int n_tasks = static_cast<int>(tasks.size());
      std::vector<std::vector<double>> disc(n_tasks), undisc(n_tasks);
      std::vector<std::vector<long long>> visits(n_tasks);

#pragma omp parallel for schedule(dynamic)
      for (int t = 0; t < n_tasks; ++t) {
        SMDPQTable agent = make_agent(map.num_states(), static_cast<int>(bundle.options.size()),
                                      cfg.agent_alpha, cfg.gamma, cfg.train_epsilon);
        ExplorationScheme scheme = base_scheme;
        Rng train_rng = root.child("agent", static_cast<uint64_t>(t));
        const Rng eval_base = root.child("eval", static_cast<uint64_t>(t));
        visits[t].assign(map.num_states(), 0);
        const TaskCurve curve =
            train_on_task(map, tasks[t], agent, scheme, bundle.options, cfg.step_budget,
                          result.eval_steps, cfg.eval_epsilon, cfg.eval_horizon, train_rng,
                          eval_base, &visits[t]);
        disc[t] = curve.disc;
        undisc[t] = curve.undisc;
      }

      rec.disc_mean.assign(points, 0.0);
      rec.undisc_mean.assign(points, 0.0);
      for (int t = 0; t < n_tasks; ++t)
        for (int j = 0; j < points; ++j) {
          rec.disc_mean[j] += disc[t][j];
          rec.undisc_mean[j] += undisc[t][j];
        }
      for (int j = 0; j < points; ++j) {
        rec.disc_mean[j] /= n_tasks;
        rec.undisc_mean[j] /= n_tasks;
      }

      std::vector<long long> total_visits(map.num_states(), 0);
      for (const auto& v : visits)
        for (size_t s = 0; s < v.size(); ++s) total_visits[s] += v[s];

      // Per-seed artifacts.
      {
        std::vector<double> zeros(points, 0.0);
        write_curve_csv(seed_dir + "/curve.csv", result.eval_steps, rec.disc_mean, zeros,
                        rec.undisc_mean, zeros);
        std::ofstream tf(seed_dir + "/tasks.txt");
        tf << "# start goal\n";
        for (const auto& t : tasks) tf << t.start << ' ' << t.goal << '\n';
        save_counts(total_visits, seed_dir + "/counts.txt");
        render_heatmap(total_visits, map, seed_dir + "/heatmap.pgm");
        if (bundle.has_sr) save_sr(bundle.sr, seed_dir + "/sr.bin");
        if (!bundle.options.empty()) save_options(bundle.options, seed_dir + "/options.bin");
        if (!bundle.goals.goals.empty()) save_subgoals(bundle.goals, seed_dir + "/subgoals.txt");
        if (!bundle.incr_iterations.empty()) {
          const std::string iter_dir = seed_dir + "/iters";
          fs::create_directories(iter_dir);
          for (size_t i = 0; i < bundle.incr_iterations.size(); ++i) {
            const auto& snap = bundle.incr_iterations[i];
            const std::string base = iter_dir + "/iter" + std::to_string(i + 1);
            std::ofstream l1(base + "_l1.csv");
            l1 << "state,l1_norm\n";
            for (size_t s = 0; s < snap.l1.size(); ++s)
              l1 << s << ',' << fmt(snap.l1[s]) << '\n';
            std::ofstream cand(base + "_candidates.txt");
            for (int s : snap.candidates) cand << s << '\n';
            std::ofstream sg(base + "_subgoals.txt");
            for (int s : snap.subgoal_states) sg << s << '\n';
          }
        }
      }
      rec.ok = true;
    } catch (const std::exception& ex) {
      rec.ok = false;
      rec.error = ex.what();
      ++result.n_failed;
    }
    rec.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    result.seeds.push_back(std::move(rec));
  }

  // Merged curve over successful seeds: mean and standard error per point.
  std::vector<double> disc_mean(points, 0.0), disc_se(points, 0.0);
  std::vector<double> undisc_mean(points, 0.0), undisc_se(points, 0.0);
  int ok_seeds = 0;
  for (const auto& rec : result.seeds)
    if (rec.ok) ++ok_seeds;
  if (ok_seeds > 0) {
    for (const auto& rec : result.seeds) {
      if (!rec.ok) continue;
      for (int j = 0; j < points; ++j) {
        disc_mean[j] += rec.disc_mean[j];
        undisc_mean[j] += rec.undisc_mean[j];
      }
    }
    for (int j = 0; j < points; ++j) {
      disc_mean[j] /= ok_seeds;
      undisc_mean[j] /= ok_seeds;
    }
    if (ok_seeds > 1) {
      for (const auto& rec : result.seeds) {
        if (!rec.ok) continue;
        for (int j = 0; j < points; ++j) {
          disc_se[j] += (rec.disc_mean[j] - disc_mean[j]) * (rec.disc_mean[j] - disc_mean[j]);
          undisc_se[j] +=
              (rec.undisc_mean[j] - undisc_mean[j]) * (rec.undisc_mean[j] - undisc_mean[j]);
        }
      }
      for (int j = 0; j < points; ++j) {
        disc_se[j] = std::sqrt(disc_se[j] / (ok_seeds - 1)) / std::sqrt(ok_seeds);
        undisc_se[j] = std::sqrt(undisc_se[j] / (ok_seeds - 1)) / std::sqrt(ok_seeds);
      }
    }
    write_curve_csv(result.out_dir + "/curve.csv", result.eval_steps, disc_mean, disc_se,
                    undisc_mean, undisc_se);
  }

  {
    std::ofstream runs(result.out_dir + "/runs.csv");
    runs << "seed,method,ok,error\n";
    for (const auto& rec : result.seeds)
      runs << rec.seed << ',' << method_to_string(cfg.method) << ',' << (rec.ok ? 1 : 0) << ','
           << rec.error << '\n';
    // Wall times are diagnostics, not part of the reproducible outputs.
    std::ofstream timing(result.out_dir + "/timing.txt");
    for (const auto& rec : result.seeds)
      timing << "seed " << rec.seed << ": " << rec.wall_seconds << " s\n";
  }
  return result;
}

std::vector<CompareRow> compare_records(const std::string& dir) {
  std::vector<CompareRow> rows;
  if (!fs::is_directory(dir)) throw std::runtime_error("compare: not a directory: " + dir);
  std::vector<std::string> subdirs;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_directory() && fs::exists(entry.path() / "curve.csv"))
      subdirs.push_back(entry.path().string());
  std::sort(subdirs.begin(), subdirs.end());
  for (const auto& sub : subdirs) {
    std::ifstream in(sub + "/curve.csv");
    std::string line;
    std::getline(in, line);  // header
    CompareRow row;
    row.name = fs::path(sub).filename().string();
    std::vector<double> disc, undisc;
    while (std::getline(in, line)) {
      std::stringstream ls(line);
      std::string cell;
      std::vector<std::string> cells;
      while (std::getline(ls, cell, ',')) cells.push_back(cell);
      if (cells.size() < 5) continue;
      disc.push_back(std::stod(cells[1]));
      undisc.push_back(std::stod(cells[3]));
    }
    row.auc_disc = curve_auc(disc);
    row.auc_undisc = curve_auc(undisc);
    row.points = disc.size();
    rows.push_back(std::move(row));
  }
  std::sort(rows.begin(), rows.end(),
            [](const CompareRow& a, const CompareRow& b) { return a.auc_disc > b.auc_disc; });
  return rows;
}

}  // namespace sropt
