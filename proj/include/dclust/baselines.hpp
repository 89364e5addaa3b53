#pragma once

#include <cstdint>
#include <vector>

#include "dclust/instance.hpp"

namespace dclust {

// Online facility location over a uniformly random client order: client c
// opens its nearest candidate f with probability min(1, chi(c) * (delta - dist(c, f)) / w_f),
// delta being its distance to the nearest open facility. Clients are then
// reassigned to the nearest open facility.
Solution meyerson_fl(const ClusteringInstance& inst, std::uint64_t seed);

// Farthest-first traversal. The first center is facility 0; each further
// center is the facility nearest to the currently farthest client. k is
// clamped to the number of facilities.
Solution greedy_kcenter(const ClusteringInstance& inst, int k);

// Greedy-add start followed by best single swaps under the sum of
// chi * dist^p, for at most swap_budget passes. The returned solution is
// evaluated under inst.objective (penalties or outliers applied afterwards).
Solution local_search_kmedian(const ClusteringInstance& inst, int k, int swap_budget = 200);

struct BootstrapTrace {
  std::vector<double> round_costs;  // k-means cost after each round, on the original instance
};

// Repeats the k-means scheme `rounds` times (0 means ceil(log2 n)), feeding
// each round's output back as the guide. Starts from local search.
Solution bootstrap_kmeans(const ClusteringInstance& inst, int k, double epsilon, int rounds = 0,
                          std::uint64_t seed = 0, BootstrapTrace* trace = nullptr);

}  // namespace dclust
