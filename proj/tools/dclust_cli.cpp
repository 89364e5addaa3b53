// Command-line driver: experiments, Monte-Carlo statistics and scaling runs.
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "dclust/errors.hpp"
#include "dclust/experiment.hpp"

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitCheck = 3;

void emit(const nlohmann::json& doc, const std::string& path) {
  const std::string text = doc.dump(2) + "\n";
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw dclust::ParameterError("cannot write '" + path + "'");
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Approximation schemes for clustering in doubling metrics"};
  dclust::RunConfig cfg;
  std::string objective = "kmedian", format = "points-csv", output;
  bool stats = false, scaling = false, check = false;
  double oracle_cap = cfg.oracle.max_subsets;

  app.add_option("--objective", objective, "fl | kmedian | kmeans | pc | outliers | kcenter")
      ->check(CLI::IsMember({"fl", "kmedian", "kmeans", "pc", "outliers", "kcenter"}));
  app.add_option("--epsilon", cfg.epsilon, "accuracy parameter in (0, 1/3)");
  app.add_option("--k", cfg.k, "number of centers");
  app.add_option("--z", cfg.z, "outlier budget (demand units)");
  app.add_option("--seed", cfg.seed, "master seed");
  app.add_option("--trials", cfg.trials, "number of trials");
  app.add_option("--input", cfg.input, "instance file; omitted: synthetic instances");
  app.add_option("--format", format, "points-csv | distmatrix-csv | instance-json")
      ->check(CLI::IsMember({"points-csv", "distmatrix-csv", "instance-json"}));
  app.add_option("--output", output, "result JSON path (default stdout)");
  app.add_flag("--stats", stats, "Monte-Carlo cut and badly-cut frequencies");
  app.add_flag("--scaling", scaling, "wall-time scaling over --sizes");
  app.add_option("--oracle-cap", oracle_cap, "max center subsets the exact oracle enumerates");
  app.add_flag("--no-oracle", [&](std::int64_t) { cfg.use_oracle = false; }, "skip the exact oracle");
  app.add_flag("--check", check, "exit with code 3 when the run misses its acceptance threshold");
  app.add_flag("--timing", cfg.timing, "record wall times (output is no longer deterministic)");
  app.add_option("--threads", cfg.threads, "worker threads, 0 = all cores");
  app.add_option("--doubling-dim", cfg.doubling_dimension, "declared doubling dimension of file inputs");

  auto* gen = app.add_option_group("generator", "synthetic instances");
  gen->add_option("--generator", cfg.generator.kind, "uniform | grid | two-scale")
      ->check(CLI::IsMember({"uniform", "grid", "two-scale"}));
  gen->add_option("--n", cfg.generator.n, "points");
  gen->add_option("--dim", cfg.generator.dim, "coordinate dimension");
  gen->add_option("--clusters", cfg.generator.clusters, "two-scale clusters");
  gen->add_option("--spread", cfg.generator.spread, "two-scale cluster radius");
  gen->add_option("--facilities", cfg.generator.facilities, "candidate facilities (first points), 0 = all");
  gen->add_option("--opening-cost", cfg.generator.opening_cost, "facility location opening cost");
  gen->add_option("--penalty-scale", cfg.generator.penalty_scale, "prize-collecting penalties in [0, scale)");

  auto* dp = app.add_option_group("dp", "decomposition and DP limits");
  dp->add_option("--rho", cfg.scheme.rho, "portal parameter, 0 = default");
  dp->add_option("--max-inside", cfg.scheme.dp.max_inside_configs, "inside configurations kept per part, 0 = all");
  dp->add_option("--max-outside", cfg.scheme.dp.max_outside_keys, "outside keys per part, 0 = all");
  dp->add_option("--max-combinations", cfg.scheme.dp.max_combinations, "child combinations per part, 0 = all");
  dp->add_option("--grid-refinement", cfg.scheme.dp.grid_refinement, "finer distance grid");
  app.add_option("--sizes", cfg.scaling_sizes, "scaling sizes");

  CLI11_PARSE(app, argc, argv);

  try {
    cfg.objective = dclust::objective_from_string(objective);
    cfg.format = dclust::input_format_from_string(format);
    cfg.oracle.max_subsets = oracle_cap;
    nlohmann::json doc;
    if (stats)
      doc = dclust::run_stats(cfg);
    else if (scaling)
      doc = dclust::run_scaling(cfg);
    else
      doc = dclust::run_experiment(cfg);
    emit(doc, output);
    if (check) {
      bool passed = false;
      if (doc.contains("check_passed"))
        passed = doc["check_passed"].get<bool>();
      else if (doc["aggregate"].contains("check_passed"))
        passed = doc["aggregate"]["check_passed"].get<bool>();
      if (!passed) {
        std::cerr << "check failed\n";
        return kExitCheck;
      }
    }
  } catch (const dclust::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const dclust::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const dclust::ParameterError& e) {
    std::cerr << "invalid parameter: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
