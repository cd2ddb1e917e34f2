#pragma once

#include <string>
#include <vector>

#include "sropt/cluster.hpp"
#include "sropt/config.hpp"
#include "sropt/eigen_options.hpp"
#include "sropt/grid.hpp"
#include "sropt/incremental.hpp"
#include "sropt/option.hpp"
#include "sropt/rng.hpp"
#include "sropt/smdp.hpp"
#include "sropt/sr.hpp"

namespace sropt {

// n (start, goal) pairs uniform over distinct unblocked states, start != goal.
// proto supplies rewards, gamma and horizon.
std::vector<TaskSpec> generate_tasks(const GridMap& map, int n, const TaskSpec& proto, Rng& rng);

// Start at the bottom-leftmost unblocked cell, goal at the top-rightmost.
TaskSpec fixed_corner_task(const GridMap& map, const ExperimentConfig& cfg);

// Greyscale P2 portable graymap: per-cell intensity log(1+count) normalised
// to [0,255]; walls are 0.
void render_heatmap(const std::vector<long long>& counts, const GridMap& map,
                    const std::string& path);

void save_counts(const std::vector<long long>& counts, const std::string& path);
std::vector<long long> load_counts(const std::string& path);

// Pure exploration with trained options: every decision is exploratory, the
// option class picked with probability 1/(1+e). Episodes restart uniformly
// every episode_len primitive steps. Returns visitation counts.
std::vector<long long> explore_visitation(const GridMap& map, const std::vector<Option>& options,
                                          double e, long long budget, long long episode_len,
                                          Rng& rng);

// Per-method option construction for one seed.
struct OptionsBundle {
  std::vector<Option> options;
  SubGoalSet goals;  // empty for the eigen methods
  SRMatrix sr;
  bool has_sr = false;
  std::vector<IterationSnapshot> incr_iterations;
};

long long auto_sr_budget(const ExperimentConfig& cfg, const GridMap& map);
long long auto_option_budget(const ExperimentConfig& cfg, const GridMap& map);

OptionsBundle build_options(const GridMap& map, const ExperimentConfig& cfg, const Rng& root,
                            const LaplacianSpectrum* spectrum);

ExplorationScheme scheme_for(Method method, double e, const SubGoalSet& goals);

struct SeedRecord {
  int seed = 0;
  bool ok = false;
  std::string error;
  double wall_seconds = 0.0;
  std::vector<double> disc_mean;    // per eval point, mean over tasks
  std::vector<double> undisc_mean;
};

struct ExperimentResult {
  std::vector<long long> eval_steps;
  std::vector<SeedRecord> seeds;
  int n_failed = 0;
  std::string out_dir;
};

// Full protocol for one config: per seed, build options, train one agent per
// task with periodic frozen-policy evaluations, write curve/subgoal/heatmap
// artifacts under cfg.out_dir. A failed seed is recorded and skipped.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

// Mean of the evaluation points; the summary statistic used by `compare`.
double curve_auc(const std::vector<double>& values);

struct CompareRow {
  std::string name;
  double auc_disc = 0.0;
  double auc_undisc = 0.0;
  size_t points = 0;
};

// Scans dir/*/curve.csv and summarises each as one row, sorted by AUC.
std::vector<CompareRow> compare_records(const std::string& dir);

}  // namespace sropt
