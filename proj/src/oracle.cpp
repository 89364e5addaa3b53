#include "dclust/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "dclust/errors.hpp"
#include "dclust/rng.hpp"

namespace dclust {

namespace {

ClusteringInstance with_objective(const ClusteringInstance& inst, Objective obj, int p) {
  ClusteringInstance out = inst;
  out.objective = obj;
  out.p = p;
  return out;
}

// Visits every size-m subset of {0..n-1} in lexicographic order.
template <class F>
void for_each_combination(int n, int m, F&& visit) {
  std::vector<int> idx(m);
  std::iota(idx.begin(), idx.end(), 0);
  while (true) {
    visit(std::span<const int>(idx));
    int i = m - 1;
    while (i >= 0 && idx[i] == n - m + i) --i;
    if (i < 0) return;
    ++idx[i];
    for (int j = i + 1; j < m; ++j) idx[j] = idx[j - 1] + 1;
  }
}

Solution best_of_size(const ClusteringInstance& inst, int k, std::int64_t budget, const OracleCaps& caps) {
  const int nf = static_cast<int>(inst.facilities.size());
  if (k < 1) throw ParameterError("k must be at least 1");
  const int m = std::min(k, nf);
  if (binomial(nf, m) > caps.max_subsets) throw CapacityError("too many center subsets for the exact oracle");
  Solution best;
  best.cost = kInf;
  bool have = false;
  for_each_combination(nf, m, [&](std::span<const int> set) {
    Solution s = evaluate(inst, set, budget);
    if (!have || s.cost < best.cost) {
      best = std::move(s);
      have = true;
    }
  });
  return best;
}

double nearest(const ClusteringInstance& inst, PointId from, const std::vector<int>& facs, int* arg = nullptr) {
  double best = kInf;
  int who = -1;
  for (int f : facs) {
    double d = inst.space().dist(from, inst.facilities[f].point);
    if (d < best) {
      best = d;
      who = f;
    }
  }
  if (arg) *arg = who;
  return best;
}

}  // namespace

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return std::round(r);
}

bool oracle_eligible(const ClusteringInstance& inst, const OracleCaps& caps) {
  const int nf = static_cast<int>(inst.facilities.size());
  if (inst.objective == Objective::kFacilityLocation) return nf <= caps.max_fl_facilities;
  if (inst.k < 1) return false;
  return binomial(nf, std::min(inst.k, nf)) <= caps.max_subsets;
}

Solution exact_fl(const ClusteringInstance& inst, const OracleCaps& caps) {
  const int nf = static_cast<int>(inst.facilities.size());
  if (nf > caps.max_fl_facilities || nf >= 31) throw CapacityError("too many facilities for the exact oracle");
  ClusteringInstance fl = with_objective(inst, Objective::kFacilityLocation, inst.p);
  Solution best;
  best.cost = kInf;
  bool have = false;
  std::vector<int> set;
  for (std::uint32_t mask = 1; mask < (1u << nf); ++mask) {
    set.clear();
    for (int f = 0; f < nf; ++f)
      if (mask & (1u << f)) set.push_back(f);
    Solution s = evaluate(fl, set);
    if (!have || s.cost < best.cost) {
      best = std::move(s);
      have = true;
    }
  }
  return best;
}

Solution exact_kmedian(const ClusteringInstance& inst, int k, const OracleCaps& caps) {
  return best_of_size(with_objective(inst, Objective::kKMedian, inst.p), k, 0, caps);
}

Solution exact_kmeans(const ClusteringInstance& inst, int k, const OracleCaps& caps) {
  return best_of_size(with_objective(inst, Objective::kKMeans, 2), k, 0, caps);
}

Solution exact_kcenter(const ClusteringInstance& inst, int k, const OracleCaps& caps) {
  return best_of_size(with_objective(inst, Objective::kKCenter, 1), k, 0, caps);
}

Solution exact_pc(const ClusteringInstance& inst, int k, const OracleCaps& caps) {
  return best_of_size(with_objective(inst, Objective::kPrizeCollecting, inst.p), k, 0, caps);
}

Solution exact_outliers(const ClusteringInstance& inst, int k, std::int64_t z, const OracleCaps& caps) {
  if (z < 0) throw ParameterError("outlier budget must be nonnegative");
  return best_of_size(with_objective(inst, Objective::kOutliers, inst.p), k, z, caps);
}

Solution exact_solve(const ClusteringInstance& inst, const OracleCaps& caps) {
  switch (inst.objective) {
    case Objective::kFacilityLocation: return exact_fl(inst, caps);
    case Objective::kKMedian: return exact_kmedian(inst, inst.k, caps);
    case Objective::kKMeans: return exact_kmeans(inst, inst.k, caps);
    case Objective::kPrizeCollecting: return exact_pc(inst, inst.k, caps);
    case Objective::kOutliers: return exact_outliers(inst, inst.k, inst.z, caps);
    case Objective::kKCenter: return exact_kcenter(inst, inst.k, caps);
  }
  throw ParameterError("unknown objective");
}

StructuredReport validate_structured_solution(const ClusteringInstance& inst, const Decomposition& decomp,
                                              const Solution& guide, const BadlyCutParams& params,
                                              std::uint64_t seed, const OracleCaps& caps) {
  if (inst.objective == Objective::kFacilityLocation || inst.objective == Objective::kKCenter)
    throw ParameterError("structured solutions are defined for the k-clustering objectives");
  if (&decomp.space() != inst.metric.get()) throw ParameterError("decomposition was built over a different space");
  const MetricSpace& sp = inst.space();
  StructuredReport rep;
  Solution opt = exact_solve(inst, caps);
  rep.opt = opt.facilities;
  rep.cost_opt = opt.cost;
  rep.cost_l = evaluate(inst, guide.facilities).cost;
  const std::vector<int>& L = guide.facilities;
  if (L.empty()) throw ParameterError("guide solution has no facility");

  // psi(l) = OPT facilities whose nearest L facility is l.
  std::vector<std::vector<int>> psi(L.size());
  for (int f : rep.opt) {
    int arg = -1;
    nearest(inst, inst.facilities[f].point, L, &arg);
    auto pos = std::find(L.begin(), L.end(), arg) - L.begin();
    psi[pos].push_back(f);
  }
  // f_l: the member of psi(l) closest to l (first index on ties).
  std::vector<int> f_of(L.size(), -1);
  std::vector<int> H;
  int opt_ge2 = 0;
  for (std::size_t i = 0; i < L.size(); ++i) {
    if (psi[i].empty()) continue;
    int arg = -1;
    nearest(inst, inst.facilities[L[i]].point, psi[i], &arg);
    f_of[i] = arg;
    if (psi[i].size() >= 2) {
      opt_ge2 += static_cast<int>(psi[i].size());
      for (int f : psi[i])
        if (f != arg) H.push_back(f);
    }
  }
  std::sort(H.begin(), H.end());

  // Step 1.
  const int budget = static_cast<int>(std::floor(params.epsilon * opt_ge2 / 2.0));
  rep.step1_budget = budget;
  auto cost_without = [&](const std::vector<int>& removed) {
    std::vector<int> keep;
    for (int f : rep.opt)
      if (!std::binary_search(removed.begin(), removed.end(), f)) keep.push_back(f);
    return evaluate(inst, keep).cost;
  };
  for (int f : H) rep.step1_removal_sum += cost_without({f}) - rep.cost_opt;
  double denom = rep.cost_opt + rep.cost_l;
  rep.step1_constant = denom > 0 ? rep.step1_removal_sum / denom : 0.0;

  std::vector<int> removed;
  const int hsize = static_cast<int>(H.size());
  if (budget > 0 && hsize > 0) {
    const int b = std::min(budget, hsize);
    if (inst.objective == Objective::kOutliers) {
      Rng rng(seed);
      std::vector<int> pool = H;
      shuffle(pool, rng);
      removed.assign(pool.begin(), pool.begin() + b);
    } else if (binomial(hsize, b) <= 1e4) {
      double best = kInf;
      for_each_combination(hsize, b, [&](std::span<const int> idx) {
        std::vector<int> cand;
        for (int j : idx) cand.push_back(H[j]);
        double c = cost_without(cand);
        if (c < best) {
          best = c;
          removed = cand;
        }
      });
    } else {
      rep.step1_exact = false;
      std::vector<std::pair<double, int>> single;
      for (int f : H) single.emplace_back(cost_without({f}), f);
      std::sort(single.begin(), single.end());
      for (int j = 0; j < b; ++j) removed.push_back(single[j].second);
    }
    std::sort(removed.begin(), removed.end());
  }
  for (int f : rep.opt)
    if (!std::binary_search(removed.begin(), removed.end(), f)) rep.opt_prime.push_back(f);
  for (std::size_t c = 0; c < inst.clients.size(); ++c) {
    int a = opt.assignment[c];
    if (a != kNotServed && std::binary_search(removed.begin(), removed.end(), a))
      rep.extra_outliers += inst.clients[c].demand - opt.dropped[c];
  }
  rep.cost_opt_prime = evaluate(inst, rep.opt_prime).cost;

  // Badly cut facilities of L with respect to OPT'.
  std::vector<char> bad(L.size(), 0);
  for (std::size_t i = 0; i < L.size(); ++i) {
    double opt_f = nearest(inst, inst.facilities[L[i]].point, rep.opt_prime);
    if (is_badly_cut_facility(decomp, inst.facilities[L[i]].point, opt_f, params)) {
      bad[i] = 1;
      rep.badly_cut.push_back(L[i]);
      if (psi[i].empty()) rep.badly_cut_l0.push_back(L[i]);
    }
  }

  // Steps 2 and 3.
  std::set<int> star(rep.opt_prime.begin(), rep.opt_prime.end());
  for (std::size_t i = 0; i < L.size(); ++i) {
    if (!bad[i]) continue;
    if (!psi[i].empty()) star.erase(f_of[i]);
    star.insert(L[i]);
  }
  rep.s_star.assign(star.begin(), star.end());
  rep.admissible = static_cast<int>(rep.s_star.size()) <= inst.k;
  Solution s_eval = evaluate(inst, rep.s_star);
  rep.cost_s_star = s_eval.cost;

  // Cut-level bound at each client's position in the modified instance.
  rep.bound_applicable = params.epsilon <= 0.2;
  const double tau = params.tau();
  for (std::size_t c = 0; c < inst.clients.size(); ++c) {
    const Client& cl = inst.clients[c];
    if (cl.demand == 0 || s_eval.dropped[c] >= cl.demand) continue;
    int lf = -1;
    double l_c = nearest(inst, cl.point, L, &lf);
    PointId loc = is_badly_cut_client(decomp, cl.point, l_c, params) ? inst.facilities[lf].point : cl.point;
    double opt_c = nearest(inst, cl.point, rep.opt_prime);
    int sf = -1;
    nearest(inst, loc, rep.s_star, &sf);
    PointId target = inst.facilities[sf].point;
    double scale = 4.0 * opt_c + 3.0 * l_c / params.epsilon;
    if (target == loc || sp.dist(target, loc) == 0.0 || !(scale > 0)) continue;
    ++rep.clients_checked;
    int cut = decomp.cut_level(loc, target);
    double bound = std::log2(scale / decomp.unit()) + tau;
    if (cut > bound + 1e-9) rep.violations.push_back({static_cast<int>(c), cut, bound});
  }
  return rep;
}

}  // namespace dclust
