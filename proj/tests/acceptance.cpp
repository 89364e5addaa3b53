// Acceptance runner: one PASS/FAIL line per criterion. Exit status 1 if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "checks.hpp"
#include "dclust/baselines.hpp"
#include "dclust/errors.hpp"
#include "dclust/experiment.hpp"
#include "dclust/oracle.hpp"
#include "dclust/preprocess.hpp"
#include "support.hpp"

using namespace dclust;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v, int prec = 4) {
  std::ostringstream os;
  os.precision(prec);
  os << v;
  return os.str();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double std_error(double f, int trials) { return std::sqrt(std::max(f * (1 - f), 1e-12) / trials); }

// ---- 1. decomposition structure -------------------------------------------------

Outcome decomposition_structure() {
  const auto t0 = std::chrono::steady_clock::now();
  const double rhos[] = {0.5, 0.25, 0.125, default_rho(BadlyCutParams{0.3, 1, 2}, false)};
  int bad_builds = 0, concise_builds = 0, max_portals = 0;
  testing::DecompositionReport worst;
  for (int t = 0; t < 200; ++t) {
    const int n = 20 + (t * 37) % 481;
    auto m = testing::random_plane(n, derive_seed(1, "c1-points", t));
    const double rho = rhos[t % 4];
    auto dec = Decomposition::build(m, rho, derive_seed(1, "c1-decomp", t));
    auto r = testing::check_decomposition(dec);
    max_portals = std::max(max_portals, r.max_portals);
    if (r.concise) ++concise_builds;
    if (!r.ok()) {
      ++bad_builds;
      worst = r;
    }
  }
  const double secs = seconds_since(t0);
  Outcome o;
  o.pass = bad_builds == 0 && secs < 10.0;
  o.detail = "builds=200 failing=" + std::to_string(bad_builds) + " (concise violations in " +
             std::to_string(concise_builds) + ") max_portals=" + std::to_string(max_portals) +
             (bad_builds ? " last: " + worst.summary() : "") + " time=" + fmt(secs, 3) + "s";
  return o;
}

// ---- 2 and 3. Monte-Carlo cut statistics ----------------------------------------

RunConfig stats_config(Objective obj, double eps) {
  RunConfig c;
  c.objective = obj;
  c.epsilon = eps;
  c.k = 3;
  c.trials = 1000;
  c.seed = 7;
  c.generator.n = 50;
  c.stats_samples = 40;
  return c;
}

Outcome scaling_probability() {
  const auto t0 = std::chrono::steady_clock::now();
  auto doc = run_stats(stats_config(Objective::kKMedian, 0.3));
  const double secs = seconds_since(t0);
  const double excess = doc["scaling_max_excess"].get<double>();
  int nonzero = 0;
  for (const auto& row : doc["scaling"]) nonzero += row["frequency"].get<double>() > 0;
  Outcome o;
  o.pass = excess <= 0 && secs < 60.0;
  o.detail = "triples=" + std::to_string(doc["scaling"].size()) + " with_cuts=" + std::to_string(nonzero) +
             " max(freq - bound - 3se)=" + fmt(excess) + " time=" + fmt(secs, 3) + "s";
  return o;
}

Outcome badly_cut_probability() {
  Outcome o;
  o.pass = true;
  for (double eps : {0.1, 0.3})
    for (Objective obj : {Objective::kKMedian, Objective::kKMeans}) {
      auto doc = run_stats(stats_config(obj, eps));
      const double excess = doc["badly_cut_max_excess"].get<double>();
      double top = 0.0;
      for (const auto& row : doc["badly_cut"]) top = std::max(top, row["frequency"].get<double>());
      o.pass = o.pass && excess <= 0;
      o.detail += "eps=" + fmt(eps) + ",p=" + std::to_string(default_exponent(obj)) + ": kappa=" +
                  fmt(doc["kappa"].get<double>()) + " max_freq=" + fmt(top) + " excess=" + fmt(excess) + "; ";
    }
  return o;
}

// ---- 4. portal path detour -------------------------------------------------------

Outcome portal_detour() {
  long pairs = 0, bad = 0, hops = 0;
  double slack = 1e300;
  for (int t = 0; t < 20; ++t) {
    const int n = 30 + (t * 7) % 71;
    auto m = testing::random_plane(n, derive_seed(4, "c4-points", t));
    const double rho = std::ldexp(1.0, -2 - t % 3);
    auto dec = Decomposition::build(m, rho, derive_seed(4, "c4-decomp", t));
    auto r = testing::check_portal_paths(dec);
    pairs += r.pairs;
    bad += r.too_long + r.direct_mismatch;
    hops += r.invalid_hops;
    slack = std::min(slack, r.worst_slack);
  }
  Outcome o;
  o.pass = bad == 0 && hops == 0;
  o.detail = "pairs=" + std::to_string(pairs) + " over_bound=" + std::to_string(bad) +
             " invalid_hops=" + std::to_string(hops) + " min_slack=" + fmt(slack);
  return o;
}

// ---- 5. net packing --------------------------------------------------------------

Outcome net_packing() {
  long nets = 0, bad = 0;
  double tightest = 0.0;
  auto check = [&](const MetricSpace& sp, const std::vector<PointId>& ground, const std::vector<PointId>& net,
                   double delta) {
    const double diam = distance_extremes(sp, ground).max;
    const double bound = net_size_bound(sp.doubling_dimension(), diam, delta);
    ++nets;
    if (static_cast<double>(net.size()) > bound) ++bad;
    tightest = std::max(tightest, static_cast<double>(net.size()) / bound);
  };
  for (int t = 0; t < 30; ++t) {
    auto m = testing::random_plane(60 + 10 * t, derive_seed(5, "c5-points", t));
    NetHierarchy h(*m);
    for (int i = 1; i <= h.top(); ++i) check(*m, h.level(i - 1), h.level(i), std::ldexp(h.unit(), i - 2));
    std::vector<PointId> all(m->size());
    for (int u = 0; u < m->size(); ++u) all[u] = u;
    for (double delta : {0.02, 0.05, 0.1, 0.3}) check(*m, all, build_net(*m, all, delta).centers, delta);
    auto dec = Decomposition::build(m, 0.25, derive_seed(5, "c5-decomp", t), nullptr);
    for (const Part& p : dec.parts())
      if (p.members.size() > 1) {
        // Seeded portal nets are still (rho * 2^{i+1})-nets of the part.
        check(*m, p.members, p.portals, dec.rho() * dec.scale(p.level + 1));
      }
  }
  Outcome o;
  o.pass = bad == 0;
  o.detail = "nets=" + std::to_string(nets) + " over_bound=" + std::to_string(bad) +
             " max(size/bound)=" + fmt(tightest);
  return o;
}

// ---- 6 to 11. end-to-end runs against the exact oracle ---------------------------

struct TrialSummary {
  int trials = 0, exact = 0, success = 0, errors = 0;
  int below_opt = 0, infeasible = 0;
  int center_violations = 0;  // more than k centers (k-center: more than ceil((1+5 eps) k))
  double median_ratio = std::nan("");
  double rate() const { return exact ? static_cast<double>(success) / exact : 0.0; }
  double se() const { return std_error(rate(), std::max(exact, 1)); }
  std::string text() const {
    return "trials=" + std::to_string(trials) + " exact=" + std::to_string(exact) +
           " success=" + fmt(rate()) + " se=" + fmt(se()) + " median_ratio=" + fmt(median_ratio, 5) +
           (errors ? " errors=" + std::to_string(errors) : "");
  }
};

TrialSummary summarize(const nlohmann::json& doc, int center_cap, std::function<void(const nlohmann::json&)> extra = {}) {
  TrialSummary s;
  std::vector<double> ratios;
  for (const auto& tr : doc["trials"]) {
    ++s.trials;
    if (tr.contains("error")) {
      ++s.errors;
      continue;
    }
    if (extra) extra(tr);
    if (tr["algorithm_cost"].is_null()) ++s.infeasible;
    if (tr["centers"].get<int>() > center_cap) ++s.center_violations;
    if (tr["exact_cost"].is_null()) continue;
    ++s.exact;
    if (tr["success"].get<bool>()) ++s.success;
    if (!tr["ratio"].is_null()) {
      const double r = tr["ratio"].get<double>();
      ratios.push_back(r);
      if (r < 1.0 - 1e-9) ++s.below_opt;
    }
  }
  s.median_ratio = median(ratios);
  return s;
}

RunConfig e2e_config(Objective obj, int n, int k, std::uint64_t seed) {
  RunConfig c;
  c.objective = obj;
  c.epsilon = 0.3;
  c.k = k;
  c.trials = 100;
  c.seed = seed;
  c.generator.n = n;
  return c;
}

bool rate_ok(const TrialSummary& s, double required) { return s.exact > 0 && s.rate() >= required - 3 * s.se(); }

Outcome fl_end_to_end() {
  const auto t0 = std::chrono::steady_clock::now();
  RunConfig c = e2e_config(Objective::kFacilityLocation, 12, 0, 61);
  c.generator.facilities = 8;
  c.generator.opening_cost = 0.3;
  auto s = summarize(run_experiment(c), 1 << 30);
  const double secs = seconds_since(t0);
  Outcome o;
  o.pass = rate_ok(s, 1 - 2 * c.epsilon) && s.errors == 0 && s.infeasible == 0 && s.below_opt == 0 && secs < 300;
  o.detail = s.text() + " required=" + fmt(1 - 2 * c.epsilon) + " below_opt=" + std::to_string(s.below_opt) +
             " time=" + fmt(secs, 3) + "s";
  return o;
}

Outcome kmedian_end_to_end() {
  Outcome o;
  o.pass = true;
  for (int k : {1, 2, 3}) {
    RunConfig c = e2e_config(Objective::kKMedian, 12, k, 70 + k);
    c.trials = k == 3 ? 34 : 33;
    c.generator.facilities = 8;
    auto s = summarize(run_experiment(c), k);
    o.pass = o.pass && rate_ok(s, 1 - 3 * c.epsilon) && s.errors == 0 && s.center_violations == 0 && s.below_opt == 0;
    o.detail += "k=" + std::to_string(k) + ": " + s.text() + "; ";
  }
  return o;
}

Outcome kmeans_end_to_end() {
  RunConfig c = e2e_config(Objective::kKMeans, 10, 2, 80);
  int rounds = 0;
  auto trace = [&](const nlohmann::json& result, double* worst) {
    int bad = 0;
    for (const auto& tr : result["trials"]) {
      if (!tr.contains("round_costs")) continue;
      const auto& rc = tr["round_costs"];
      rounds = std::max<int>(rounds, static_cast<int>(rc.size()));
      for (std::size_t i = 1; i < rc.size(); ++i) {
        const double a = rc[i - 1].get<double>(), b = rc[i].get<double>();
        if (a > 0) *worst = std::max(*worst, b / a);
        if (b > (1 + c.epsilon) * a) ++bad;
      }
    }
    return bad;
  };
  const nlohmann::json result = run_experiment(c);
  auto s = summarize(result, 2, [](const nlohmann::json&) {});
  double worst = 1, worst_fine = 1;
  const int trace_violations = trace(result, &worst);
  // Diagnostic only: the same seeds on a 4x finer distance grid.
  RunConfig fine = c;
  fine.scheme.dp.grid_refinement = 4;
  const int fine_violations = trace(run_experiment(fine), &worst_fine);
  Outcome o;
  o.pass = rate_ok(s, 1 - 3 * c.epsilon) && s.errors == 0 && trace_violations == 0 && s.center_violations == 0;
  char buf[160];
  std::snprintf(buf, sizeof buf, " max_rounds=%d trace_violations=%d worst_step=%.3f (grid/4: violations=%d worst_step=%.3f)",
                rounds, trace_violations, worst, fine_violations, worst_fine);
  o.detail = s.text() + buf;
  return o;
}

Outcome prize_collecting() {
  // Infinite penalties: the prize-collecting DP must reproduce the k-median DP.
  int mismatches = 0;
  for (int t = 0; t < 50; ++t) {
    auto m = testing::random_plane(10, derive_seed(9, "c9-points", t));
    auto km = testing::make_instance(m, Objective::kKMedian, 10, 2);
    auto pc = testing::make_instance(m, Objective::kPrizeCollecting, 10, 2);
    auto dec = Decomposition::build(m, default_rho(BadlyCutParams{0.3, 1, 2}, false), derive_seed(9, "c9-decomp", t));
    Solution g = local_search_kmedian(km, 2);
    DpOptions opt;
    opt.epsilon = 0.3;
    auto mk = build_modified_instance(km, g, dec, BadlyCutParams{0.3, 1, 2});
    auto mp = build_modified_instance(pc, evaluate(pc, g.facilities), dec, BadlyCutParams{0.3, 1, 2});
    auto a = solve_k_dp(mk, dec, opt, 2, g.cost);
    auto b = solve_pc_dp(mp, dec, opt, 2, g.cost);
    if (a.facilities != b.facilities || a.declared_cost != b.declared_cost || a.solution.cost != b.solution.cost)
      ++mismatches;
  }
  RunConfig c = e2e_config(Objective::kPrizeCollecting, 10, 2, 90);
  c.generator.penalty_scale = 0.4;
  int dropped = 0;
  auto s = summarize(run_experiment(c), 2, [&](const nlohmann::json& tr) { dropped += tr["outliers"].get<int>(); });
  Outcome o;
  o.pass = mismatches == 0 && rate_ok(s, 1 - 3 * c.epsilon) && s.errors == 0 && s.center_violations == 0;
  o.detail = "infinite-penalty mismatches=" + std::to_string(mismatches) + "/50; random penalties: " + s.text();
  return o;
}

Outcome outliers_bicriteria() {
  RunConfig c = e2e_config(Objective::kOutliers, 10, 2, 100);
  c.z = 2;
  std::int64_t worst_out = 0;
  auto s = summarize(run_experiment(c), 2,
                     [&](const nlohmann::json& tr) { worst_out = std::max(worst_out, tr["outliers"].get<std::int64_t>()); });
  Outcome o;
  o.pass = rate_ok(s, 1 - 3 * c.epsilon) && s.errors == 0 && s.center_violations == 0;
  o.detail = s.text() + " max_outliers=" + std::to_string(worst_out) + " allowed=" +
             std::to_string(static_cast<int>(std::ceil((1 + 5 * c.epsilon) * c.z - 1e-9))) +
             " center_violations=" + std::to_string(s.center_violations);
  return o;
}

Outcome kcenter_bicriteria() {
  RunConfig c = e2e_config(Objective::kKCenter, 10, 2, 110);
  const int cap = static_cast<int>(std::ceil((1 + 5 * c.epsilon) * c.k - 1e-9));
  int greedy_bad = 0, greedy_checked = 0;
  double greedy_worst = 0.0;
  auto s = summarize(run_experiment(c), cap, [&](const nlohmann::json& tr) {
    if (tr["exact_cost"].is_null()) return;
    const double opt = tr["exact_cost"].get<double>(), g = tr["baseline_cost"].get<double>();
    ++greedy_checked;
    greedy_worst = std::max(greedy_worst, g / opt);
    if (g > 2 * opt) ++greedy_bad;
  });
  Outcome o;
  o.pass = rate_ok(s, 1 - 3 * c.epsilon) && s.errors == 0 && s.center_violations == 0 && greedy_bad == 0 &&
           greedy_checked > 0;
  o.detail = s.text() + " center_cap=" + std::to_string(cap) + " greedy_max_ratio=" + fmt(greedy_worst) +
             " greedy_over_2=" + std::to_string(greedy_bad);
  return o;
}

// ---- 12. aspect-ratio preprocessing -----------------------------------------------

// Well separated blobs plus near-duplicate points, so both the split and the contraction fire.
ClusteringInstance reducible_instance(int t, Objective obj, int k) {
  Rng rng(derive_seed(12, "c12-points", t));
  const int n = 10;
  std::vector<double> xy;
  for (int i = 0; i < n; ++i) {
    const int blob = i % 3;
    xy.push_back(5.0 * blob + 0.05 * uniform01(rng));
    xy.push_back(0.05 * uniform01(rng) + (blob == 1 ? 3.0 : 0.0));
  }
  for (int i = 7; i < n; ++i) {  // jitter copies of points 0..2
    xy[2 * i] = xy[2 * (i - 7)] + 1e-10 * (1 + uniform01(rng));
    xy[2 * i + 1] = xy[2 * (i - 7) + 1];
  }
  auto m = std::make_shared<const MetricSpace>(MetricSpace::euclidean(std::move(xy), 2, 2));
  return testing::make_instance(m, obj, n, k, 0, 0.05);
}

Outcome aspect_reduction() {
  const double eps = 0.3;
  int instances = 0, aspect_bad = 0, opt_bad = 0, lift_bad = 0, split = 0, contracted = 0;
  double worst_aspect = 0.0, worst_opt = 0.0, worst_lift = 0.0;
  for (int t = 0; t < 40; ++t) {
    const Objective obj = t % 2 ? Objective::kFacilityLocation : Objective::kKMedian;
    const int k = 3 + t % 3;
    ClusteringInstance inst = reducible_instance(t, obj, k);
    const double n = inst.space().size();
    const Solution guide = guide_solution(inst, derive_seed(12, "c12-guide", t));
    AspectReduction red = reduce_aspect_ratio(inst, eps, guide.cost);
    ++instances;
    split += red.parts.size() > 1;
    contracted += red.contracted_points > 0;
    const double limit = 16.0 * std::pow(n, 5) / eps;
    worst_aspect = std::max(worst_aspect, red.max_aspect_ratio / limit);
    if (red.max_aspect_ratio > limit) ++aspect_bad;

    const double opt = exact_solve(inst).cost;
    double combined = kInf;
    std::vector<std::vector<int>> sets;
    if (obj == Objective::kFacilityLocation) {
      combined = 0.0;
      for (const auto& p : red.parts) {
        Solution s = exact_fl(p.instance);
        combined += s.cost;
        sets.push_back(s.facilities);
      }
    } else {
      // Exact per-part optima for every center count, combined by enumeration.
      const int parts = static_cast<int>(red.parts.size());
      std::vector<std::vector<Solution>> table(parts);
      for (int i = 0; i < parts; ++i)
        for (int kk = 1; kk <= k; ++kk) table[i].push_back(exact_kmedian(red.parts[i].instance, kk));
      std::vector<int> alloc(parts, 1), best_alloc;
      std::function<void(int, int, double)> rec = [&](int i, int used, double sum) {
        if (i == parts) {
          if (sum < combined) {
            combined = sum;
            best_alloc = alloc;
          }
          return;
        }
        for (int kk = 1; used + kk + (parts - i - 1) <= k; ++kk) {
          alloc[i] = kk;
          rec(i + 1, used + kk, sum + table[i][kk - 1].cost);
        }
      };
      rec(0, 0, 0.0);
      for (int i = 0; i < parts && !best_alloc.empty(); ++i) sets.push_back(table[i][best_alloc[i] - 1].facilities);
    }
    if (!std::isfinite(combined)) {
      ++opt_bad;
      continue;
    }
    const double ratio = opt > 0 ? combined / opt : 1.0;
    const double rel = std::max(ratio, 1.0 / ratio) - 1.0;
    worst_opt = std::max(worst_opt, rel / (eps / n));
    if (rel > eps / n) ++opt_bad;
    const Solution lifted = lift_reduction(inst, red, sets);
    const double err = std::abs(lifted.cost - combined);
    worst_lift = std::max(worst_lift, opt > 0 ? err / (eps * opt / n) : 0.0);
    if (err > eps * opt / n) ++lift_bad;
  }
  Outcome o;
  o.pass = aspect_bad == 0 && opt_bad == 0 && lift_bad == 0;
  o.detail = "instances=" + std::to_string(instances) + " split=" + std::to_string(split) +
             " contracted=" + std::to_string(contracted) + " aspect_over=" + std::to_string(aspect_bad) +
             " (max/limit " + fmt(worst_aspect) + ") opt_over=" + std::to_string(opt_bad) + " (max rel/(eps/n) " +
             fmt(worst_opt) + ") lift_over=" + std::to_string(lift_bad) + " (max err/(eps OPT/n) " + fmt(worst_lift) + ")";
  return o;
}

// ---- 13. structured solution ------------------------------------------------------

Outcome structured_solution() {
  const double eps = 0.2;
  int admissible = 0, applicable = 0, violations = 0, checked = 0, badly = 0;
  const int seeds = 500;
  for (int t = 0; t < seeds; ++t) {
    auto m = testing::random_plane(10, derive_seed(13, "c13-points", t));
    const Objective obj = t % 5 == 3 ? Objective::kOutliers : (t % 5 == 4 ? Objective::kPrizeCollecting : Objective::kKMedian);
    auto inst = testing::make_instance(m, obj, 10, 2, obj == Objective::kOutliers ? 1 : 0);
    if (obj == Objective::kPrizeCollecting)
      for (auto& c : inst.clients) c.penalty = 0.3;
    auto dec = Decomposition::build(m, 0.25, derive_seed(13, "c13-decomp", t));
    Solution guide = local_search_kmedian(inst, 2);
    auto rep = validate_structured_solution(inst, dec, guide, BadlyCutParams{eps, 1, 2}, derive_seed(13, "c13-step1", t));
    admissible += rep.admissible;
    badly += static_cast<int>(rep.badly_cut.size());
    if (rep.bound_applicable) {
      ++applicable;
      checked += rep.clients_checked;
      violations += static_cast<int>(rep.violations.size());
    }
  }
  const double rate = static_cast<double>(admissible) / seeds;
  const double se = std_error(rate, seeds);
  Outcome o;
  o.pass = rate >= 1 - eps / 2 - 3 * se && violations == 0 && applicable == seeds;
  o.detail = "seeds=" + std::to_string(seeds) + " admissible=" + fmt(rate) + " required=" + fmt(1 - eps / 2) +
             " badly_cut_facilities=" + std::to_string(badly) + " clients_checked=" + std::to_string(checked) +
             " cut_violations=" + std::to_string(violations);
  return o;
}

// ---- 14. scaling ------------------------------------------------------------------

Outcome near_linear_scaling() {
  RunConfig c;
  c.objective = Objective::kFacilityLocation;
  c.trials = 3;
  c.seed = 14;
  c.generator.opening_cost = 0.05;
  c.scheme.rho = 0.25;
  c.scheme.dp.max_inside_configs = 8;
  c.scheme.dp.max_outside_keys = 8;
  c.scheme.dp.max_combinations = 256;
  c.scaling_sizes = {2000, 4000, 8000};
  auto doc = run_scaling(c);
  Outcome o;
  o.pass = doc["check_passed"].get<bool>();
  for (const auto& row : doc["sizes"])
    o.detail += "n=" + std::to_string(row["n"].get<int>()) + ":" + fmt(row["median_s"].get<double>(), 3) + "s ";
  o.detail += "ratios=";
  for (const auto& r : doc["ratios"]) o.detail += fmt(r.get<double>(), 3) + " ";
  o.detail += "limit=3";
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    Outcome (*run)();
  };
  const Criterion criteria[] = {
      {"decomposition structure", decomposition_structure},
      {"scaling probability", scaling_probability},
      {"badly-cut probability", badly_cut_probability},
      {"portal path detour", portal_detour},
      {"net packing", net_packing},
      {"facility location end to end", fl_end_to_end},
      {"k-median end to end", kmedian_end_to_end},
      {"k-means end to end", kmeans_end_to_end},
      {"prize-collecting", prize_collecting},
      {"outliers bicriteria", outliers_bicriteria},
      {"k-center bicriteria", kcenter_bicriteria},
      {"aspect-ratio preprocessing", aspect_reduction},
      {"structured solution", structured_solution},
      {"near-linear scaling", near_linear_scaling},
  };
  int failed = 0, idx = 0;
  for (const auto& c : criteria) {
    ++idx;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    failed += !o.pass;
    std::printf("%s %2d %s: %s\n", o.pass ? "PASS" : "FAIL", idx, c.name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%d criteria passed\n", idx - failed, idx);
  return failed ? 1 : 0;
}
