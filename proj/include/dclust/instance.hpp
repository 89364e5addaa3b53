#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dclust/metric.hpp"

namespace dclust {

enum class Objective { kFacilityLocation, kKMedian, kKMeans, kPrizeCollecting, kOutliers, kKCenter };

std::string to_string(Objective o);          // "fl", "kmedian", ...
Objective objective_from_string(const std::string& s);
// Exponent used in the cost: 2 for k-means, 1 otherwise (k-center uses plain distances).
int default_exponent(Objective o);

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct Client {
  PointId point = 0;
  std::int64_t demand = 1;  // 0 marks a removed client
  double penalty = kInf;    // per unit of demand (prize-collecting)
};

struct Facility {
  PointId point = 0;
  double opening_cost = 0.0;
};

struct ClusteringInstance {
  std::shared_ptr<const MetricSpace> metric;
  Objective objective = Objective::kKMedian;
  std::vector<Client> clients;
  std::vector<Facility> facilities;
  int p = 1;
  int k = 0;
  std::int64_t z = 0;  // outlier budget in demand units

  const MetricSpace& space() const { return *metric; }
  std::int64_t total_demand() const;
  // Throws ValidationError on an inconsistent instance.
  void validate() const;

  // Every point is a client (demand 1) and a facility (given opening cost).
  static ClusteringInstance all_points(std::shared_ptr<const MetricSpace> metric, Objective objective, int k = 0,
                                       double opening_cost = 1.0);
};

inline constexpr int kNotServed = -1;

struct Solution {
  std::vector<int> facilities;          // indices into instance.facilities, sorted
  std::vector<int> assignment;          // per client: facility index or kNotServed
  std::vector<std::int64_t> dropped;    // per client: demand units left unserved (outliers / penalty)
  std::vector<double> client_cost;      // per client: connection (+ penalty) contribution
  double opening = 0.0;
  double connection = 0.0;
  double penalty = 0.0;
  double cost = 0.0;                    // objective value; max distance for k-center
  std::int64_t outliers = 0;            // dropped demand units (outliers mode)

  std::vector<int> outlier_clients() const;
  bool feasible() const { return cost < kInf; }
};

// Optimal completion of a facility set: nearest-facility assignment, penalties
// where cheaper, and the `outlier_budget` most expensive demand units dropped
// (outliers mode; a negative budget means instance.z).
Solution evaluate(const ClusteringInstance& inst, std::span<const int> facilities, std::int64_t outlier_budget = -1);

// dist^p with p in {1, 2}.
inline double power_cost(double d, int p) { return p == 2 ? d * d : d; }

// Facility index whose point is p, or -1.
std::vector<int> facility_at_point(const ClusteringInstance& inst);

}  // namespace dclust
