#pragma once

#include <cstdint>
#include <vector>

#include "dclust/dp.hpp"
#include "dclust/instance.hpp"
#include "dclust/preprocess.hpp"
#include "dclust/split_tree.hpp"

namespace dclust {

struct SchemeOptions {
  double epsilon = 0.3;
  std::uint64_t seed = 0;
  double rho = 0.0;            // 0 selects default_rho
  DpOptions dp;                // dp.epsilon is overwritten by epsilon
  bool reduce_aspect = true;   // facility location and k-median only
  int kmeans_rounds = 0;       // 0 = ceil(log2 n)
  int swap_budget = 200;
};

struct SchemeResult {
  Solution solution;           // evaluated on the input instance
  Solution guide;              // the constant-factor solution L on the input instance
  double declared_cost = 0.0;  // DP upper bound (summed over sub-instances)
  int centers = 0;
  std::int64_t outliers = 0;
  int relocated = 0;
  int forced_centers = 0;
  int removed_clients = 0;
  int badly_cut_centers = 0;
  int subinstances = 1;
  int contracted_points = 0;
  double max_aspect_ratio = 0.0;
  DecompositionStats decomposition;
  DpStats dp;
  std::vector<double> round_costs;  // k-means bootstrap
};

// The constant-factor guide used for inst.objective.
Solution guide_solution(const ClusteringInstance& inst, std::uint64_t seed, int swap_budget = 200);

// Guide, decomposition, modified instance, portal DP and lift.
SchemeResult run_scheme(const ClusteringInstance& inst, const SchemeOptions& options);

// One pass of the pipeline with a given guide and no aspect-ratio reduction.
SchemeResult run_scheme_with_guide(const ClusteringInstance& inst, const Solution& guide,
                                   const SchemeOptions& options, std::uint64_t round = 0);

}  // namespace dclust
