#include "dclust/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "dclust/errors.hpp"

namespace dclust {

namespace {

struct UnionFind {
  std::vector<int> up;
  explicit UnionFind(int n) : up(n) { std::iota(up.begin(), up.end(), 0); }
  int find(int x) {
    while (up[x] != x) {
      up[x] = up[up[x]];
      x = up[x];
    }
    return x;
  }
  // The smaller id becomes the root.
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a < b)
      up[b] = a;
    else
      up[a] = b;
  }
};

}  // namespace

AspectReduction reduce_aspect_ratio(const ClusteringInstance& inst, double epsilon, double gamma) {
  if (!(gamma > 0)) throw ParameterError("gamma must be positive");
  if (!(epsilon > 0 && epsilon < 1)) throw ParameterError("epsilon must lie in (0, 1)");
  const MetricSpace& sp = inst.space();
  const int n = sp.size();
  AspectReduction red;
  red.gamma = gamma;
  red.epsilon = epsilon;
  red.truncation = 2.0 * gamma;
  red.contraction = epsilon * gamma / (static_cast<double>(n) * n * n);

  Spanner spanner = build_spanner(sp, 4.0);
  UnionFind comp(n), group(n);
  for (const auto& e : spanner.edges) {
    if (e.w <= spanner.stretch * red.truncation) comp.unite(e.u, e.v);
    if (e.w < red.contraction) group.unite(e.u, e.v);
  }
  for (int u = 0; u < n; ++u)
    if (group.find(u) != u) ++red.contracted_points;

  // Components that hold a live client, numbered by their smallest point.
  std::vector<int> part_of_comp(n, -1);
  std::vector<int> comp_order;
  for (const auto& c : inst.clients) {
    if (c.demand == 0) continue;
    int r = comp.find(c.point);
    if (part_of_comp[r] < 0) {
      part_of_comp[r] = 0;
      comp_order.push_back(r);
    }
  }
  std::sort(comp_order.begin(), comp_order.end());
  for (std::size_t i = 0; i < comp_order.size(); ++i) part_of_comp[comp_order[i]] = static_cast<int>(i);

  const int nparts = static_cast<int>(comp_order.size());
  std::vector<std::vector<PointId>> reps(nparts);
  std::vector<char> used(n, 0);
  auto touch = [&](PointId u) {
    int part = part_of_comp[comp.find(u)];
    if (part < 0) return;
    int g = group.find(u);
    if (!used[g]) {
      used[g] = 1;
      reps[part].push_back(g);
    }
  };
  for (const auto& c : inst.clients)
    if (c.demand > 0) touch(c.point);
  for (const auto& f : inst.facilities) touch(f.point);

  red.parts.resize(nparts);
  red.facility_part.assign(inst.facilities.size(), -1);
  red.facility_sub.assign(inst.facilities.size(), -1);
  std::vector<int> local(n, -1);
  for (int i = 0; i < nparts; ++i) {
    auto& pts = reps[i];
    std::sort(pts.begin(), pts.end());
    for (std::size_t a = 0; a < pts.size(); ++a) local[pts[a]] = static_cast<int>(a);
    SubInstance& sub = red.parts[i];
    sub.points = pts;
    sub.instance.metric = std::make_shared<MetricSpace>(sp.subspace(pts));
    sub.instance.objective = inst.objective;
    sub.instance.p = inst.p;
    sub.instance.k = inst.k;
    sub.instance.z = inst.z;
  }

  // Clients merged per (group, penalty).
  std::vector<std::map<std::pair<PointId, double>, int>> merged(nparts);
  for (std::size_t c = 0; c < inst.clients.size(); ++c) {
    const Client& cl = inst.clients[c];
    if (cl.demand == 0) continue;
    int part = part_of_comp[comp.find(cl.point)];
    SubInstance& sub = red.parts[part];
    int g = group.find(cl.point);
    auto [it, fresh] = merged[part].emplace(std::make_pair(g, cl.penalty), static_cast<int>(sub.instance.clients.size()));
    if (fresh) {
      sub.instance.clients.push_back({local[g], 0, cl.penalty});
      sub.client_groups.emplace_back();
    }
    sub.instance.clients[it->second].demand += cl.demand;
    sub.client_groups[it->second].push_back(static_cast<int>(c));
  }

  // One facility per group, the cheapest (smallest index on ties).
  std::vector<int> best_of_group(n, -1);
  for (std::size_t f = 0; f < inst.facilities.size(); ++f) {
    PointId u = inst.facilities[f].point;
    if (part_of_comp[comp.find(u)] < 0) continue;
    int g = group.find(u);
    int& b = best_of_group[g];
    if (b < 0 || inst.facilities[f].opening_cost < inst.facilities[b].opening_cost) b = static_cast<int>(f);
  }
  std::vector<int> sub_of_group(n, -1);
  for (int i = 0; i < nparts; ++i) {
    SubInstance& sub = red.parts[i];
    for (PointId g : sub.points) {
      int b = best_of_group[g];
      if (b < 0) continue;
      sub_of_group[g] = static_cast<int>(sub.instance.facilities.size());
      sub.instance.facilities.push_back({local[g], inst.facilities[b].opening_cost});
      sub.facility_map.push_back(b);
    }
    if (sub.instance.facilities.empty()) throw InfeasibleError("a component of the truncated metric has no facility");
  }
  for (std::size_t f = 0; f < inst.facilities.size(); ++f) {
    PointId u = inst.facilities[f].point;
    int part = part_of_comp[comp.find(u)];
    if (part < 0) continue;
    red.facility_part[f] = part;
    red.facility_sub[f] = sub_of_group[group.find(u)];
  }

  for (const auto& sub : red.parts) {
    const double lo = min_positive_distance(*sub.instance.metric);
    if (lo > 0) red.max_aspect_ratio = std::max(red.max_aspect_ratio, diameter_bound(*sub.instance.metric) / lo);
  }
  return red;
}

Solution lift_reduction(const ClusteringInstance& inst, const AspectReduction& red,
                        const std::vector<std::vector<int>>& part_facilities) {
  if (part_facilities.size() != red.parts.size()) throw ParameterError("one facility set per part is required");
  std::vector<int> facs;
  for (std::size_t i = 0; i < red.parts.size(); ++i)
    for (int f : part_facilities[i]) facs.push_back(red.parts[i].facility_map.at(f));
  std::sort(facs.begin(), facs.end());
  facs.erase(std::unique(facs.begin(), facs.end()), facs.end());
  return evaluate(inst, facs);
}

CombinedAllocation combine_subinstance_solutions(const std::vector<std::vector<int>>& min_centers,
                                                 const CostGrid& grid, int k) {
  const int t = static_cast<int>(min_centers.size());
  const int J = grid.size();
  if (k < 0) throw ParameterError("k must be nonnegative");
  for (const auto& row : min_centers)
    if (static_cast<int>(row.size()) != J) throw ParameterError("table width must match the cost grid");
  // cheapest[i][c]: smallest cost index part i reaches with at most c centers, -1 if none.
  std::vector<std::vector<int>> cheapest(t, std::vector<int>(k + 1, -1));
  for (int i = 0; i < t; ++i)
    for (int c = 0; c <= k; ++c)
      for (int j = 0; j < J; ++j)
        if (min_centers[i][j] <= c) {
          cheapest[i][c] = j;
          break;
        }
  // S[i][c]: least summed grid value of parts i.. with at most c centers.
  std::vector<std::vector<double>> S(t + 1, std::vector<double>(k + 1, 0.0));
  std::vector<std::vector<int>> arg(t, std::vector<int>(k + 1, -1));
  for (int i = t - 1; i >= 0; --i)
    for (int c = 0; c <= k; ++c) {
      double best = kInf;
      for (int a = 0; a <= c; ++a) {
        int j = cheapest[i][a];
        if (j < 0) continue;
        double v = grid.value(j) + S[i + 1][c - a];
        if (v < best) {
          best = v;
          arg[i][c] = a;
        }
      }
      S[i][c] = best;
    }
  const int jstar = std::isfinite(S[0][k]) ? grid.index_up(S[0][k]) : J;
  if (jstar >= J) throw InfeasibleError("no cost index is reachable with k centers");
  CombinedAllocation out;
  out.index = jstar;
  out.cost = grid.value(jstar);
  out.summed = S[0][k];
  for (int i = 0, c = k; i < t; ++i) {
    int a = arg[i][c];
    int j = cheapest[i][a];
    out.part_index.push_back(j);
    out.part_centers.push_back(min_centers[i][j]);
    c -= min_centers[i][j];
  }
  return out;
}

int ModifiedInstance::relocated_count() const {
  return static_cast<int>(std::count_if(relocations.begin(), relocations.end(), [](int f) { return f >= 0; }));
}

double guide_distance(const ClusteringInstance& inst, const Solution& guide, int client, int* facility) {
  const Client& cl = inst.clients[client];
  int f = client < static_cast<int>(guide.assignment.size()) ? guide.assignment[client] : kNotServed;
  double d = kInf;
  if (f != kNotServed) {
    d = inst.space().dist(cl.point, inst.facilities[f].point);
  } else {
    for (int g : guide.facilities) {
      double x = inst.space().dist(cl.point, inst.facilities[g].point);
      if (x < d) {
        d = x;
        f = g;
      }
    }
  }
  if (facility) *facility = f;
  return d;
}

ModifiedInstance build_modified_instance(const ClusteringInstance& inst, const Solution& guide,
                                         const Decomposition& decomp, const BadlyCutParams& params) {
  if (&decomp.space() != inst.metric.get()) throw ParameterError("decomposition was built over a different space");
  if (guide.facilities.empty()) throw ParameterError("guide solution has no facility");
  ModifiedInstance mod;
  mod.base = inst;
  mod.modified = inst;
  mod.decomposition = &decomp;
  mod.guide = guide;
  mod.relocations.assign(inst.clients.size(), -1);
  for (std::size_t c = 0; c < inst.clients.size(); ++c) {
    const Client& cl = inst.clients[c];
    if (cl.demand == 0) continue;
    int f = -1;
    double l_c = guide_distance(inst, guide, static_cast<int>(c), &f);
    if (f < 0 || inst.facilities[f].point == cl.point) continue;
    if (is_badly_cut_client(decomp, cl.point, l_c, params)) {
      mod.relocations[c] = f;
      mod.modified.clients[c].point = inst.facilities[f].point;
    }
  }
  return mod;
}

ModifiedInstance build_kcenter_instance(const ClusteringInstance& inst, const Solution& guide,
                                        const Decomposition& decomp, const BadlyCutParams& params, double gamma) {
  if (&decomp.space() != inst.metric.get()) throw ParameterError("decomposition was built over a different space");
  const MetricSpace& sp = inst.space();
  ModifiedInstance mod;
  mod.base = inst;
  mod.modified = inst;
  mod.decomposition = &decomp;
  mod.guide = guide;
  mod.gamma = gamma;
  mod.relocations.assign(inst.clients.size(), -1);
  if (!(gamma > 0)) return mod;
  std::vector<char> removed(inst.clients.size(), 0);
  std::vector<char> forced(inst.facilities.size(), 0);
  for (int f : guide.facilities) {
    PointId fp = inst.facilities[f].point;
    if (!is_badly_cut_kcenter(decomp, fp, gamma, params)) continue;
    mod.badly_cut_centers.push_back(f);
    std::vector<int> ball;
    for (std::size_t c = 0; c < inst.clients.size(); ++c)
      if (inst.clients[c].demand > 0 && sp.dist(inst.clients[c].point, fp) <= gamma) ball.push_back(static_cast<int>(c));
    std::vector<int> cand;
    for (std::size_t g = 0; g < inst.facilities.size(); ++g)
      if (sp.dist(inst.facilities[g].point, fp) <= 1.5 * gamma) cand.push_back(static_cast<int>(g));
    std::vector<char> covered(ball.size(), 0);
    std::size_t left = ball.size();
    int used = 0;
    while (left > 0) {
      int pick = -1;
      std::size_t gain = 0;
      for (int g : cand) {
        std::size_t cnt = 0;
        for (std::size_t b = 0; b < ball.size(); ++b)
          if (!covered[b] && sp.dist(inst.clients[ball[b]].point, inst.facilities[g].point) <= gamma / 2) ++cnt;
        if (cnt > gain) {
          gain = cnt;
          pick = g;
        }
      }
      if (pick < 0) {
        // Nothing within gamma / 2: the first uncovered client goes to its nearest facility.
        mod.cover_fallback = true;
        std::size_t b = std::find(covered.begin(), covered.end(), 0) - covered.begin();
        double best = kInf;
        for (std::size_t g = 0; g < inst.facilities.size(); ++g) {
          double d = sp.dist(inst.clients[ball[b]].point, inst.facilities[g].point);
          if (d < best) {
            best = d;
            pick = static_cast<int>(g);
          }
        }
        covered[b] = 1;
        --left;
      }
      for (std::size_t b = 0; b < ball.size(); ++b)
        if (!covered[b] && sp.dist(inst.clients[ball[b]].point, inst.facilities[pick].point) <= gamma / 2) {
          covered[b] = 1;
          --left;
        }
      if (!forced[pick]) {
        forced[pick] = 1;
        mod.forced_centers.push_back(pick);
      }
      ++used;
    }
    mod.cover_sizes.push_back(used);
    for (int c : ball) removed[c] = 1;
  }
  std::sort(mod.forced_centers.begin(), mod.forced_centers.end());
  for (std::size_t c = 0; c < inst.clients.size(); ++c)
    if (removed[c]) {
      mod.removed_clients.push_back(static_cast<int>(c));
      mod.modified.clients[c].demand = 0;
    }
  return mod;
}

Solution lift_solution(const ModifiedInstance& mod, const Solution& sol) {
  std::vector<int> facs = sol.facilities;
  facs.insert(facs.end(), mod.forced_centers.begin(), mod.forced_centers.end());
  std::sort(facs.begin(), facs.end());
  facs.erase(std::unique(facs.begin(), facs.end()), facs.end());
  std::int64_t budget = -1;
  if (mod.base.objective == Objective::kOutliers) budget = std::max(mod.base.z, sol.outliers);
  return evaluate(mod.base, facs, budget);
}

std::vector<std::int64_t> demand_at(const ClusteringInstance& inst) {
  std::vector<std::int64_t> d(inst.space().size(), 0);
  for (const auto& c : inst.clients) d[c.point] += c.demand;
  return d;
}

nlohmann::json to_json(const ModifiedInstance& mod) {
  nlohmann::json j;
  j["objective"] = to_string(mod.base.objective);
  j["relocations"] = mod.relocations;
  j["relocated"] = mod.relocated_count();
  j["forced_centers"] = mod.forced_centers;
  j["removed_clients"] = mod.removed_clients;
  j["badly_cut_centers"] = mod.badly_cut_centers;
  j["cover_sizes"] = mod.cover_sizes;
  j["cover_fallback"] = mod.cover_fallback;
  j["gamma"] = mod.gamma;
  nlohmann::json cls = nlohmann::json::array();
  for (const auto& c : mod.modified.clients) cls.push_back({{"point", c.point}, {"demand", c.demand}});
  j["clients"] = cls;
  j["total_demand"] = mod.modified.total_demand();
  return j;
}

}  // namespace dclust
