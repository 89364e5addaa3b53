#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "dclust/io.hpp"
#include "dclust/oracle.hpp"
#include "dclust/scheme.hpp"

namespace dclust {

inline constexpr const char* kResultSchema = "dclust.result/1";

struct GeneratorConfig {
  std::string kind = "uniform";  // uniform | grid | two-scale
  int n = 12;
  int dim = 2;
  int clusters = 3;
  double spread = 0.02;
  int facilities = 0;            // candidate facilities: the first this many points, 0 = all
  double opening_cost = 1.0;     // facility location
  double penalty_scale = 0.0;    // prize-collecting: penalties uniform in [0, scale); 0 = infinite
};

struct RunConfig {
  Objective objective = Objective::kKMedian;
  double epsilon = 0.3;
  int k = 2;
  std::int64_t z = 0;
  std::uint64_t seed = 1;
  int trials = 1;
  std::string input;             // empty: generate per trial
  InputFormat format = InputFormat::kPointsCsv;
  int doubling_dimension = 2;
  GeneratorConfig generator;
  OracleCaps oracle;
  bool use_oracle = true;
  SchemeOptions scheme;          // epsilon and seed are filled per trial
  int threads = 0;               // 0 = hardware concurrency
  bool timing = false;           // wall times make the output nondeterministic
  std::vector<int> scaling_sizes{2000, 4000, 8000};
  int stats_samples = 40;        // (v, r) pairs for the cut-probability table
};

// Throws ParameterError on an invalid configuration.
void validate_config(const RunConfig& config);

// Instance of trial t: the input file, or a generated one from the "generator" substream.
ClusteringInstance trial_instance(const RunConfig& config, int trial);

nlohmann::json run_experiment(const RunConfig& config);
nlohmann::json run_stats(const RunConfig& config);
nlohmann::json run_scaling(const RunConfig& config);

nlohmann::json config_to_json(const RunConfig& config);

double median(std::vector<double> v);

// Runs fn(i) for i in [0, count) on a pool of threads; results land at index i.
template <class T, class F>
std::vector<T> parallel_map(int count, int threads, F&& fn) {
  std::vector<T> out(count);
  if (threads <= 0) threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  threads = std::min(threads, std::max(count, 1));
  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errors(count);
  auto work = [&] {
    for (int i = next++; i < count; i = next++) {
      try {
        out[i] = fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

}  // namespace dclust
