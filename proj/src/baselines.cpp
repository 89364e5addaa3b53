#include "dclust/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dclust/errors.hpp"
#include "dclust/rng.hpp"

namespace dclust {

Solution meyerson_fl(const ClusteringInstance& inst, std::uint64_t seed) {
  const MetricSpace& sp = inst.space();
  const int m = static_cast<int>(inst.clients.size());
  const int nf = static_cast<int>(inst.facilities.size());
  Rng rng(seed);
  std::vector<int> order(m);
  std::iota(order.begin(), order.end(), 0);
  shuffle(order, rng);

  NearestIndex all(sp, nf), opened(sp, nf);
  for (int f = 0; f < nf; ++f) all.insert(inst.facilities[f].point, f);
  std::vector<int> open;
  std::vector<char> is_open(nf, 0);
  for (int c : order) {
    const Client& cl = inst.clients[c];
    if (cl.demand == 0) continue;
    auto [star, d_star] = all.nearest(cl.point);
    double delta = opened.nearest(cl.point).second;
    if (is_open[star] || !(delta > d_star)) continue;
    double w = inst.facilities[star].opening_cost;
    double gain = static_cast<double>(cl.demand) * (delta - d_star);
    double prob = w > 0 ? std::min(1.0, gain / w) : 1.0;
    if (uniform01(rng) < prob) {
      is_open[star] = 1;
      open.push_back(star);
      opened.insert(inst.facilities[star].point, star);
    }
  }
  if (open.empty()) open.push_back(0);  // only when every client has zero demand
  return evaluate(inst, open);
}

Solution greedy_kcenter(const ClusteringInstance& inst, int k) {
  if (k < 1) throw ParameterError("k must be at least 1");
  const MetricSpace& sp = inst.space();
  const int m = static_cast<int>(inst.clients.size());
  const int nf = static_cast<int>(inst.facilities.size());
  k = std::min(k, nf);
  std::vector<int> centers{0};
  std::vector<char> chosen(nf, 0);
  chosen[0] = 1;
  std::vector<double> dist(m);
  for (int c = 0; c < m; ++c) dist[c] = sp.dist(inst.clients[c].point, inst.facilities[0].point);
  while (static_cast<int>(centers.size()) < k) {
    int far = -1;
    double far_d = 0.0;
    for (int c = 0; c < m; ++c)
      if (inst.clients[c].demand > 0 && dist[c] > far_d) {
        far_d = dist[c];
        far = c;
      }
    if (far < 0) break;
    int pick = -1;
    double best = kInf;
    for (int f = 0; f < nf; ++f) {
      double d = sp.dist(inst.clients[far].point, inst.facilities[f].point);
      if (d < best) {
        best = d;
        pick = f;
      }
    }
    if (chosen[pick]) break;
    chosen[pick] = 1;
    centers.push_back(pick);
    for (int c = 0; c < m; ++c)
      dist[c] = std::min(dist[c], sp.dist(inst.clients[c].point, inst.facilities[pick].point));
  }
  ClusteringInstance kc = inst;
  kc.objective = Objective::kKCenter;
  return evaluate(kc, centers);
}

Solution local_search_kmedian(const ClusteringInstance& inst, int k, int swap_budget) {
  if (k < 1) throw ParameterError("k must be at least 1");
  const MetricSpace& sp = inst.space();
  const int m = static_cast<int>(inst.clients.size());
  const int nf = static_cast<int>(inst.facilities.size());
  k = std::min(k, nf);
  const int p = inst.p;

  // chi(c) * dist(c, f)^p, tabulated when the table is small enough.
  auto raw = [&](int f, int c) {
    return static_cast<double>(inst.clients[c].demand) *
           power_cost(sp.dist(inst.clients[c].point, inst.facilities[f].point), p);
  };
  const bool tabulate = static_cast<double>(nf) * m <= 2e7;
  std::vector<double> table;
  if (tabulate) {
    table.resize(static_cast<std::size_t>(nf) * m);
    for (int f = 0; f < nf; ++f)
      for (int c = 0; c < m; ++c) table[static_cast<std::size_t>(f) * m + c] = raw(f, c);
  }
  auto cost = [&](int f, int c) { return tabulate ? table[static_cast<std::size_t>(f) * m + c] : raw(f, c); };

  std::vector<int> S;
  std::vector<char> in(nf, 0);
  std::vector<double> d1(m, kInf), d2(m, kInf);
  std::vector<int> a1(m, -1);
  auto refresh = [&] {
    std::fill(d1.begin(), d1.end(), kInf);
    std::fill(d2.begin(), d2.end(), kInf);
    for (int c = 0; c < m; ++c)
      for (int f : S) {
        double v = cost(f, c);
        if (v < d1[c]) {
          d2[c] = d1[c];
          d1[c] = v;
          a1[c] = f;
        } else if (v < d2[c]) {
          d2[c] = v;
        }
      }
  };
  auto total = [&] {
    double t = 0.0;
    for (int c = 0; c < m; ++c) t += inst.clients[c].demand ? d1[c] : 0.0;
    return t;
  };

  for (int step = 0; step < k; ++step) {
    int pick = -1;
    double best = kInf;
    for (int f = 0; f < nf; ++f) {
      if (in[f]) continue;
      double t = 0.0;
      for (int c = 0; c < m; ++c) t += std::min(d1[c], cost(f, c));
      if (t < best) {
        best = t;
        pick = f;
      }
    }
    S.push_back(pick);
    in[pick] = 1;
    refresh();
  }

  double current = total();
  for (int pass = 0; pass < swap_budget; ++pass) {
    double best = current;
    int best_out = -1, best_in = -1;
    for (int out = 0; out < static_cast<int>(S.size()); ++out) {
      int fo = S[out];
      for (int fi = 0; fi < nf; ++fi) {
        if (in[fi]) continue;
        double t = 0.0;
        for (int c = 0; c < m && t < best; ++c) {
          double keep = a1[c] == fo ? d2[c] : d1[c];
          t += std::min(keep, cost(fi, c));
        }
        if (t < best) {
          best = t;
          best_out = out;
          best_in = fi;
        }
      }
    }
    if (best_out < 0 || !(best < current * (1.0 - 1e-9))) break;
    in[S[best_out]] = 0;
    S[best_out] = best_in;
    in[best_in] = 1;
    refresh();
    current = total();
  }
  return evaluate(inst, S);
}

}  // namespace dclust
