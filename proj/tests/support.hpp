#pragma once

// Shared instance builders and brute-force cost functions for the test suites.
// The cost functions here never call dclust::evaluate, so the oracles checked
// against them are verified by an independent route.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <vector>

#include "dclust/instance.hpp"
#include "dclust/io.hpp"
#include "dclust/metric.hpp"
#include "dclust/rng.hpp"

namespace testing {

using namespace dclust;

inline std::shared_ptr<const MetricSpace> random_plane(int n, std::uint64_t seed) {
  return std::make_shared<const MetricSpace>(uniform_points(n, 2, seed));
}

// Integer-lattice points from a seeded RNG, so distances have exact ties.
inline std::shared_ptr<const MetricSpace> lattice_plane(int n, int side, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> xy;
  for (int i = 0; i < n; ++i) {
    xy.push_back(static_cast<double>(uniform_index(rng, side)));
    xy.push_back(static_cast<double>(uniform_index(rng, side)));
  }
  return std::make_shared<const MetricSpace>(MetricSpace::euclidean(std::move(xy), 2, 2));
}

// n clients at every point, the first nf points are facilities.
inline ClusteringInstance make_instance(std::shared_ptr<const MetricSpace> m, Objective obj, int nf, int k = 0,
                                        std::int64_t z = 0, double opening = 1.0) {
  ClusteringInstance inst;
  inst.metric = m;
  inst.objective = obj;
  inst.p = default_exponent(obj);
  inst.k = k;
  inst.z = z;
  for (int i = 0; i < m->size(); ++i) inst.clients.push_back({i, 1, kInf});
  for (int i = 0; i < nf; ++i) inst.facilities.push_back({i, opening});
  return inst;
}

inline double nearest_open(const ClusteringInstance& inst, PointId c, const std::vector<int>& open) {
  double best = std::numeric_limits<double>::infinity();
  for (int f : open) best = std::min(best, inst.space().dist(c, inst.facilities[f].point));
  return best;
}

// Objective value of a facility set computed from first principles.
inline double brute_cost(const ClusteringInstance& inst, const std::vector<int>& open, std::int64_t z = -1) {
  const double inf = std::numeric_limits<double>::infinity();
  if (open.empty()) return inf;
  if (z < 0) z = inst.z;
  std::vector<std::pair<double, std::int64_t>> units;  // (cost per unit, demand)
  double total = 0.0, worst = 0.0;
  for (const auto& c : inst.clients) {
    if (c.demand == 0) continue;
    double d = nearest_open(inst, c.point, open);
    double u = inst.p == 2 ? d * d : d;
    switch (inst.objective) {
      case Objective::kKCenter: worst = std::max(worst, d); break;
      case Objective::kPrizeCollecting: total += static_cast<double>(c.demand) * std::min(u, c.penalty); break;
      case Objective::kOutliers: units.push_back({u, c.demand}); break;
      default: total += static_cast<double>(c.demand) * u;
    }
  }
  if (inst.objective == Objective::kKCenter) return worst;
  if (inst.objective == Objective::kOutliers) {
    std::sort(units.begin(), units.end(), [](auto a, auto b) { return a.first > b.first; });
    std::int64_t left = z;
    for (auto [u, dem] : units) {
      std::int64_t drop = std::min(left, dem);
      left -= drop;
      total += u * static_cast<double>(dem - drop);
    }
  }
  if (inst.objective == Objective::kFacilityLocation)
    for (int f : open) total += inst.facilities[f].opening_cost;
  return total;
}

// Recursive include/exclude enumeration over facility subsets of size at
// most max_size (all sizes 1..nf when max_size < 0).
inline double brute_optimum(const ClusteringInstance& inst, int max_size, std::vector<int>* argmin = nullptr) {
  const int nf = static_cast<int>(inst.facilities.size());
  double best = std::numeric_limits<double>::infinity();
  std::vector<int> cur;
  std::function<void(int)> rec = [&](int f) {
    if (f == nf) {
      if (cur.empty()) return;
      double c = brute_cost(inst, cur);
      if (c < best) {
        best = c;
        if (argmin) *argmin = cur;
      }
      return;
    }
    rec(f + 1);
    if (max_size < 0 || static_cast<int>(cur.size()) < max_size) {
      cur.push_back(f);
      rec(f + 1);
      cur.pop_back();
    }
  };
  rec(0);
  return best;
}

inline bool close_rel(double a, double b, double tol = 1e-9) {
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace testing
