#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <vector>

#include <json.hpp>

#include "dclust/instance.hpp"
#include "dclust/split_tree.hpp"

namespace dclust {

struct ModifiedInstance;

// Geometric cost grid: index 0 is cost 0, index j >= 1 is lo * ratio^{j-1},
// up to the first value >= hi.
class CostGrid {
 public:
  CostGrid() = default;
  CostGrid(double lo, double hi, double ratio);

  int size() const { return static_cast<int>(values_.size()); }
  int max_index() const { return size() - 1; }
  double value(int j) const { return values_[j]; }
  double lo() const { return lo_; }
  double hi() const { return hi_; }
  double ratio() const { return ratio_; }
  // Smallest j with value(j) >= x, or size() when x exceeds the top value.
  int index_up(double x) const;
  // Largest j with value(j) <= x.
  int index_down(double x) const;
  // index_up(value(a) + value(b)).
  int add(int a, int b) const;

 private:
  double lo_ = 0.0, hi_ = 0.0, ratio_ = 2.0;
  std::vector<double> values_{0.0};
};

// Outlier counts 0 and ceil((1 + delta)^t), deduplicated, up to cap.
class OutlierGrid {
 public:
  OutlierGrid() = default;
  OutlierGrid(double delta, std::int64_t cap);

  int size() const { return static_cast<int>(values_.size()); }
  std::int64_t value(int j) const { return values_[j]; }
  std::int64_t cap() const { return cap_; }
  int index_up(std::int64_t x) const;  // size() when x > cap
  int add(int a, int b) const { return index_up(values_[a] + values_[b]); }

 private:
  std::int64_t cap_ = 0;
  std::vector<std::int64_t> values_{0};
};

enum class DpMode { kFacilityLocation, kMedian, kPrizeCollecting, kOutliers, kCenter };

struct DpOptions {
  double epsilon = 0.3;
  // Divides the quantization step epsilon * D; 1 is the standard grid.
  double grid_refinement = 1.0;
  // Collapse parts whose outside distances all exceed D / epsilon.
  bool far_regime = true;
  // 0 = unlimited. Beyond a cap the DP drops options, which keeps every
  // declared cost an upper bound but may lose quality.
  std::size_t max_inside_configs = 0;
  std::size_t max_outside_keys = 0;
  std::size_t max_combinations = 0;
  bool dump_tables = false;
};

struct DpStats {
  int nodes = 0;
  std::size_t combinations = 0;
  std::size_t memo_cells = 0;       // (node, outside key) pairs evaluated
  std::size_t table_entries = 0;    // stored values over all cells
  std::size_t max_inside_configs = 0;
  std::size_t max_outside_keys = 0;
  std::size_t max_cells_per_node = 0;
  int quantized_values = 0;         // grid values per portal coordinate, FAR and zero included
  int max_portals = 0;
  bool capped_inside = false, capped_keys = false, capped_combinations = false;
  int far_contractions = 0;
  int grid_retries = 0;
  int cost_grid_size = 0;
};

// A value of the k-modes: cost index, outlier index, centers used.
struct DpEntry {
  std::int32_t cost = 0;
  std::int32_t outliers = 0;
  std::int32_t centers = 0;
  std::int32_t prov = -1;
};

struct DpResult {
  Solution solution;             // evaluated on the modified instance
  std::vector<int> facilities;
  double declared_cost = 0.0;    // the DP's upper bound on the solution's cost
  int cost_index = -1;           // k modes
  int centers = 0;
  std::int64_t dropped = 0;      // demand units the DP left out (outliers mode)
  DpStats stats;
  nlohmann::json tables;         // only with DpOptions::dump_tables
};

// Bottom-up-by-need portal DP over the compressed tree of a decomposition:
// a cell is (node, quantized outside distances at the node's portals) and
// maps each reachable quantized inside-distance vector to its best value.
class PortalDp {
 public:
  struct Setup {
    DpMode mode = DpMode::kFacilityLocation;
    DpOptions options;
    CostGrid cost_grid;            // k modes
    OutlierGrid outlier_grid;      // outliers mode
    int k_cap = 0;                 // centers above this are pruned
    std::vector<char> forced;      // per facility: must be open and counts no center (k-center)
    double ambient_level = 1e300;  // k-center: nodes whose bottom exceeds it ignore outside facilities
  };

  PortalDp(const ClusteringInstance& inst, const Decomposition& decomp, Setup setup);
  ~PortalDp();
  PortalDp(const PortalDp&) = delete;
  PortalDp& operator=(const PortalDp&) = delete;

  // Facility location: optimal root value and its facility set.
  double solve_fl(std::vector<int>* facilities);
  // k modes: Pareto front at the root (cost, outliers, centers).
  const std::vector<DpEntry>& root_front();
  // Smallest cost index with at most `centers` centers and an allowed outlier count.
  int best_index(int centers);
  // Fewest centers per cost index (kUnreachable-like 1 << 29 when none), cumulative.
  std::vector<int> root_table();
  // Facilities of root entry `which`; *dropped receives the outlier units it leaves out.
  std::vector<int> reconstruct(int which, std::int64_t* dropped);
  // Root entry with cost index <= j and fewest centers (then lowest cost).
  int entry_for_index(int j) const;

  const DpStats& stats() const;
  nlohmann::json dump() const;
  // Max over all stored cells of a monotonicity defect (0 when every table is
  // non-increasing in the cost and outlier indices).
  int monotonicity_violations() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

struct Budget {
  std::vector<int> cut_levels;   // per client, kNoCut when served at its own point or not served
  double total = 0.0;            // sum of chi * epsilon * 2^{cut} * unit
};

Budget compute_budget(const ClusteringInstance& inst, const Solution& sol, const Decomposition& decomp,
                      double epsilon);

DpResult solve_fl_dp(const ModifiedInstance& mod, const Decomposition& decomp, const DpOptions& options);
DpResult solve_k_dp(const ModifiedInstance& mod, const Decomposition& decomp, const DpOptions& options, int k,
                    double l_cost);
DpResult solve_pc_dp(const ModifiedInstance& mod, const Decomposition& decomp, const DpOptions& options, int k,
                     double l_cost);
DpResult solve_outliers_dp(const ModifiedInstance& mod, const Decomposition& decomp, const DpOptions& options,
                           int k, std::int64_t z, double l_cost);
DpResult solve_kcenter_dp(const ModifiedInstance& mod, const Decomposition& decomp, const DpOptions& options,
                          int k, double gamma);

// Cost grid used by the k modes for a guide of cost l_cost over n points.
CostGrid make_cost_grid(double l_cost, double epsilon, int n, double floor_cost);
CostGrid make_kcenter_grid(double gamma, double epsilon, int n);

}  // namespace dclust
