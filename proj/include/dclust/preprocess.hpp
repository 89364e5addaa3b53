#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include <json.hpp>

#include "dclust/dp.hpp"
#include "dclust/instance.hpp"
#include "dclust/split_tree.hpp"

namespace dclust {

// One connected component of the truncated metric, with short edges contracted.
struct SubInstance {
  ClusteringInstance instance;       // over its own renumbered subspace
  std::vector<PointId> points;       // sub point -> original point (the group representative)
  std::vector<int> facility_map;     // sub facility -> original facility
  std::vector<std::vector<int>> client_groups;  // sub client -> original clients merged into it
};

struct AspectReduction {
  std::vector<SubInstance> parts;
  std::vector<int> facility_part;    // original facility -> part, -1 if its component has no client
  std::vector<int> facility_sub;     // original facility -> facility of its part (after contraction)
  double gamma = 0.0;
  double epsilon = 0.0;
  double truncation = 0.0;           // 2 gamma
  double contraction = 0.0;          // epsilon gamma / n^3
  int contracted_points = 0;         // points merged into another representative
  double max_aspect_ratio = 0.0;     // over parts with two or more distinct points
};

// Splits inst into the components of the spanner restricted to edges of
// weight <= stretch * 2 gamma and contracts spanner edges shorter than
// epsilon * gamma / n^3 (representative: smallest point id, demands summed,
// the cheapest facility of a group kept). Distances inside a part are the
// original distances between representatives.
AspectReduction reduce_aspect_ratio(const ClusteringInstance& inst, double epsilon, double gamma);

// Union of the per-part facility sets, mapped back and evaluated on inst.
Solution lift_reduction(const ClusteringInstance& inst, const AspectReduction& red,
                        const std::vector<std::vector<int>>& part_facilities);

// Per-part tables: min_centers[i][j] = fewest centers reaching cost <= grid.value(j) in part i,
// or kUnreachable.
inline constexpr int kUnreachable = 1 << 29;

struct CombinedAllocation {
  int index = 0;                     // smallest grid index whose value bounds the summed cost
  double cost = 0.0;                 // grid.value(index)
  double summed = 0.0;               // sum of the chosen per-part grid values
  std::vector<int> part_index;       // chosen cost index per part
  std::vector<int> part_centers;     // centers spent per part
};

// Suffix dynamic program over parts. Throws InfeasibleError if no index is
// reachable with at most k centers in total.
CombinedAllocation combine_subinstance_solutions(const std::vector<std::vector<int>>& min_centers,
                                                 const CostGrid& grid, int k);

struct ModifiedInstance {
  ClusteringInstance base;
  ClusteringInstance modified;           // I_D: relocated positions, removed clients at zero demand
  std::vector<int> relocations;          // per client: guide facility it was moved to, or -1
  std::vector<int> forced_centers;       // k-center: facilities opened unconditionally
  std::vector<int> removed_clients;      // k-center: clients dropped from I_D
  std::vector<int> badly_cut_centers;    // k-center: guide facilities found badly cut
  std::vector<int> cover_sizes;          // k-center: covering size per badly cut center
  bool cover_fallback = false;           // some ball client had no facility within gamma / 2
  double gamma = 0.0;
  const Decomposition* decomposition = nullptr;
  Solution guide;

  int relocated_count() const;
};

// Guide distance of client c: its assigned facility in L, else the nearest one.
double guide_distance(const ClusteringInstance& inst, const Solution& guide, int client, int* facility = nullptr);

// Moves every badly cut client to its guide facility.
ModifiedInstance build_modified_instance(const ClusteringInstance& inst, const Solution& guide,
                                         const Decomposition& decomp, const BadlyCutParams& params);

// k-center surgery: for each badly cut guide center f, covers the clients of
// ball(f, gamma) greedily by gamma/2-balls around facilities within 1.5 gamma,
// forces those facilities open, and removes the ball's clients.
ModifiedInstance build_kcenter_instance(const ClusteringInstance& inst, const Solution& guide,
                                        const Decomposition& decomp, const BadlyCutParams& params, double gamma);

// Evaluates sol (plus forced centers) on the base instance. Outlier mode
// keeps the larger of the instance budget and the outliers sol dropped.
Solution lift_solution(const ModifiedInstance& mod, const Solution& sol);

// Aggregated demand per point.
std::vector<std::int64_t> demand_at(const ClusteringInstance& inst);

nlohmann::json to_json(const ModifiedInstance& mod);

}  // namespace dclust
