#include "dclust/instance.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dclust/errors.hpp"

namespace dclust {

std::string to_string(Objective o) {
  switch (o) {
    case Objective::kFacilityLocation: return "fl";
    case Objective::kKMedian: return "kmedian";
    case Objective::kKMeans: return "kmeans";
    case Objective::kPrizeCollecting: return "pc";
    case Objective::kOutliers: return "outliers";
    case Objective::kKCenter: return "kcenter";
  }
  return "?";
}

Objective objective_from_string(const std::string& s) {
  for (auto o : {Objective::kFacilityLocation, Objective::kKMedian, Objective::kKMeans, Objective::kPrizeCollecting,
                 Objective::kOutliers, Objective::kKCenter})
    if (to_string(o) == s) return o;
  throw ParameterError("unknown objective '" + s + "'");
}

int default_exponent(Objective o) { return o == Objective::kKMeans ? 2 : 1; }

std::int64_t ClusteringInstance::total_demand() const {
  std::int64_t s = 0;
  for (const auto& c : clients) s += c.demand;
  return s;
}

void ClusteringInstance::validate() const {
  if (!metric) throw ValidationError("instance has no metric");
  const int n = metric->size();
  for (const auto& c : clients) {
    if (c.point < 0 || c.point >= n) throw ValidationError("client point out of range");
    if (c.demand < 0) throw ValidationError("negative demand");
    if (!(c.penalty >= 0)) throw ValidationError("penalty must be nonnegative");
  }
  if (facilities.empty()) throw ValidationError("instance has no candidate facility");
  std::vector<PointId> pts;
  for (const auto& f : facilities) {
    if (f.point < 0 || f.point >= n) throw ValidationError("facility point out of range");
    if (!(f.opening_cost >= 0) || !std::isfinite(f.opening_cost))
      throw ValidationError("opening cost must be finite and nonnegative");
    pts.push_back(f.point);
  }
  std::sort(pts.begin(), pts.end());
  if (std::adjacent_find(pts.begin(), pts.end()) != pts.end()) throw ValidationError("two facilities share a point");
  if (p != 1 && p != 2) throw ValidationError("exponent p must be 1 or 2");
  if (objective != Objective::kFacilityLocation && k < 1) throw ValidationError("k must be at least 1");
  if (z < 0) throw ValidationError("outlier budget must be nonnegative");
}

ClusteringInstance ClusteringInstance::all_points(std::shared_ptr<const MetricSpace> metric, Objective objective,
                                                  int k, double opening_cost) {
  ClusteringInstance inst;
  inst.objective = objective;
  inst.p = default_exponent(objective);
  inst.k = k;
  const int n = metric->size();
  for (PointId u = 0; u < n; ++u) {
    inst.clients.push_back({u, 1, kInf});
    inst.facilities.push_back({u, objective == Objective::kFacilityLocation ? opening_cost : 0.0});
  }
  inst.metric = std::move(metric);
  return inst;
}

std::vector<int> Solution::outlier_clients() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < dropped.size(); ++i)
    if (dropped[i] > 0) out.push_back(static_cast<int>(i));
  return out;
}

std::vector<int> facility_at_point(const ClusteringInstance& inst) {
  std::vector<int> at(inst.metric->size(), -1);
  for (std::size_t f = 0; f < inst.facilities.size(); ++f) at[inst.facilities[f].point] = static_cast<int>(f);
  return at;
}

Solution evaluate(const ClusteringInstance& inst, std::span<const int> facilities, std::int64_t outlier_budget) {
  const auto& sp = *inst.metric;
  Solution s;
  s.facilities.assign(facilities.begin(), facilities.end());
  std::sort(s.facilities.begin(), s.facilities.end());
  s.facilities.erase(std::unique(s.facilities.begin(), s.facilities.end()), s.facilities.end());
  const std::size_t m = inst.clients.size();
  s.assignment.assign(m, kNotServed);
  s.dropped.assign(m, 0);
  s.client_cost.assign(m, 0.0);

  std::vector<double> dist(m, kInf);
  NearestIndex index(sp, static_cast<int>(s.facilities.size()));
  for (int f : s.facilities) index.insert(inst.facilities[f].point, f);
  for (std::size_t c = 0; c < m; ++c) {
    if (inst.clients[c].demand == 0 || index.empty()) continue;
    auto [f, d] = index.nearest(inst.clients[c].point);
    dist[c] = d;
    s.assignment[c] = f;
  }

  const Objective obj = inst.objective;
  if (obj == Objective::kKCenter) {
    double worst = 0.0;
    for (std::size_t c = 0; c < m; ++c) {
      if (inst.clients[c].demand == 0) continue;
      s.client_cost[c] = dist[c];
      worst = std::max(worst, dist[c]);
    }
    s.connection = worst;
    s.cost = worst;
    return s;
  }

  if (obj == Objective::kFacilityLocation)
    for (int f : s.facilities) s.opening += inst.facilities[f].opening_cost;

  std::vector<double> unit(m, 0.0);
  for (std::size_t c = 0; c < m; ++c) unit[c] = inst.clients[c].demand ? power_cost(dist[c], inst.p) : 0.0;

  if (obj == Objective::kPrizeCollecting) {
    for (std::size_t c = 0; c < m; ++c) {
      const auto& cl = inst.clients[c];
      if (cl.demand == 0) continue;
      if (cl.penalty < unit[c]) {
        s.dropped[c] = cl.demand;
        s.assignment[c] = kNotServed;
        s.client_cost[c] = cl.penalty * static_cast<double>(cl.demand);
        s.penalty += s.client_cost[c];
      }
    }
  }

  if (obj == Objective::kOutliers) {
    std::int64_t budget = outlier_budget < 0 ? inst.z : outlier_budget;
    std::vector<int> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return unit[a] > unit[b]; });
    for (int c : order) {
      if (budget == 0) break;
      std::int64_t take = std::min(budget, inst.clients[c].demand);
      if (take == 0) continue;
      s.dropped[c] = take;
      budget -= take;
      s.outliers += take;
    }
  }

  for (std::size_t c = 0; c < m; ++c) {
    const auto& cl = inst.clients[c];
    if (cl.demand == 0 || (obj == Objective::kPrizeCollecting && s.dropped[c] > 0)) continue;
    std::int64_t served = cl.demand - s.dropped[c];
    if (served == 0) {
      s.assignment[c] = kNotServed;
      continue;
    }
    double v = unit[c] * static_cast<double>(served);
    s.client_cost[c] = v;
    s.connection += v;
  }
  s.cost = s.opening + s.connection + s.penalty;
  if (std::isnan(s.cost)) s.cost = kInf;
  return s;
}

}  // namespace dclust
