#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "sropt/experiment.hpp"

namespace {

int cmd_run(const std::string& config_path) {
  sropt::ExperimentConfig cfg;
  try {
    cfg = sropt::ExperimentConfig::parse_file(config_path);
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  }
  try {
    const auto result = sropt::run_experiment(cfg);
    for (const auto& rec : result.seeds) {
      if (rec.ok)
        std::printf("seed %d: ok (%.1f s)\n", rec.seed, rec.wall_seconds);
      else
        std::printf("seed %d: FAILED: %s\n", rec.seed, rec.error.c_str());
    }
    std::printf("outputs: %s\n", result.out_dir.c_str());
    if (result.n_failed == static_cast<int>(result.seeds.size())) return 2;
    return result.n_failed > 0 ? 3 : 0;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 2;
  }
}

int cmd_tasks(const std::string& map_path, int n, uint64_t seed) {
  try {
    const auto map = sropt::load_map(map_path);
    sropt::Rng root(seed);
    sropt::Rng trng = root.child("tasks");
    const auto tasks = sropt::generate_tasks(map, n, sropt::TaskSpec{}, trng);
    std::printf("# start goal\n");
    for (const auto& t : tasks) std::printf("%d %d\n", t.start, t.goal);
    return 0;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 2;
  }
}

int cmd_render(const std::string& counts_path, const std::string& map_path,
               std::string out_path) {
  try {
    const auto map = sropt::load_map(map_path);
    const auto counts = sropt::load_counts(counts_path);
    if (out_path.empty()) out_path = counts_path + ".pgm";
    sropt::render_heatmap(counts, map, out_path);
    std::printf("wrote %s\n", out_path.c_str());
    return 0;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 2;
  }
}

int cmd_compare(const std::string& dir) {
  try {
    const auto rows = sropt::compare_records(dir);
    if (rows.empty()) {
      std::cerr << "error: no curve.csv found under " << dir << "\n";
      return 2;
    }
    std::printf("%-24s %12s %12s %8s\n", "run", "auc", "auc_undisc", "points");
    for (const auto& row : rows)
      std::printf("%-24s %12.4f %12.4f %8zu\n", row.name.c_str(), row.auc_disc,
                  row.auc_undisc, row.points);
    return 0;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 2;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sub-goal option discovery and SMDP evaluation on grid worlds"};
  app.require_subcommand(1);

  std::string config_path;
  auto* run = app.add_subcommand("run", "run an experiment from a config file");
  run->add_option("config", config_path, "config file")->required();

  std::string map_path;
  int n_tasks = 500;
  uint64_t seed = 1;
  auto* tasks = app.add_subcommand("tasks", "print a random task set");
  tasks->add_option("map", map_path, "map file")->required();
  tasks->add_option("n", n_tasks, "number of tasks")->required();
  tasks->add_option("seed", seed, "seed")->required();

  std::string counts_path, render_map, out_path;
  auto* render = app.add_subcommand("render", "render a visitation-count file as a PGM heatmap");
  render->add_option("counts", counts_path, "counts file (one integer per state)")->required();
  render->add_option("map", render_map, "map file")->required();
  render->add_option("-o,--out", out_path, "output path (default: counts file + .pgm)");

  std::string record_dir;
  auto* compare = app.add_subcommand("compare", "summarise curve.csv files under a directory");
  compare->add_option("dir", record_dir, "directory of runs")->required();

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) return cmd_run(config_path);
  if (tasks->parsed()) return cmd_tasks(map_path, n_tasks, seed);
  if (render->parsed()) return cmd_render(counts_path, render_map, out_path);
  if (compare->parsed()) return cmd_compare(record_dir);
  return 1;
}
