#include "dclust/experiment.hpp"

#include <chrono>
#include <cmath>

#include "dclust/errors.hpp"
#include "dclust/rng.hpp"

namespace dclust {

namespace {

nlohmann::json finite_or_null(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

double tolerance(const RunConfig& c) { return 1.0 + 5.0 * c.epsilon; }

// Success rate the acceptance criteria require, before the standard-error slack.
double required_rate(const RunConfig& c) {
  return c.objective == Objective::kFacilityLocation ? 1.0 - 2.0 * c.epsilon : 1.0 - 3.0 * c.epsilon;
}

nlohmann::json decomposition_stats_json(const DecompositionStats& s) {
  return {{"height", s.height}, {"parts", s.parts}, {"tree_nodes", s.tree_nodes},
          {"max_children", s.max_children}, {"max_portals", s.max_portals}};
}

nlohmann::json dp_stats_json(const DpStats& s) {
  return {{"nodes", s.nodes},
          {"combinations", s.combinations},
          {"memo_cells", s.memo_cells},
          {"table_entries", s.table_entries},
          {"max_inside_configs", s.max_inside_configs},
          {"max_outside_keys", s.max_outside_keys},
          {"max_portals", s.max_portals},
          {"far_contractions", s.far_contractions},
          {"grid_retries", s.grid_retries},
          {"capped", s.capped_inside || s.capped_keys || s.capped_combinations}};
}

ClusteringInstance roles_for(std::shared_ptr<const MetricSpace> metric, const RunConfig& c, Rng& rng) {
  const int n = metric->size();
  ClusteringInstance inst;
  inst.objective = c.objective;
  inst.p = default_exponent(c.objective);
  inst.k = c.k;
  inst.z = c.z;
  const int nf = c.generator.facilities > 0 ? std::min(c.generator.facilities, n) : n;
  for (PointId u = 0; u < n; ++u) {
    double pen = kInf;
    if (c.objective == Objective::kPrizeCollecting && c.generator.penalty_scale > 0)
      pen = c.generator.penalty_scale * uniform01(rng);
    inst.clients.push_back({u, 1, pen});
  }
  for (PointId u = 0; u < nf; ++u)
    inst.facilities.push_back({u, c.objective == Objective::kFacilityLocation ? c.generator.opening_cost : 0.0});
  inst.metric = std::move(metric);
  return inst;
}

}  // namespace

double median(std::vector<double> v) {
  if (v.empty()) return std::nan("");
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

void validate_config(const RunConfig& c) {
  if (!(c.epsilon > 0 && c.epsilon < 1.0 / 3.0)) throw ParameterError("epsilon must lie in (0, 1/3)");
  if (c.trials < 1) throw ParameterError("trials must be at least 1");
  if (c.objective != Objective::kFacilityLocation && c.k < 1) throw ParameterError("k must be at least 1");
  if (c.z < 0) throw ParameterError("z must be nonnegative");
  if (c.input.empty() && c.generator.n < 1) throw ParameterError("generator needs n >= 1");
}

ClusteringInstance trial_instance(const RunConfig& c, int trial) {
  if (!c.input.empty()) {
    IngestOptions io;
    io.format = c.format;
    io.objective = c.objective;
    io.doubling_dimension = c.doubling_dimension;
    io.opening_cost = c.generator.opening_cost;
    io.k = c.k;
    io.z = c.z;
    ClusteringInstance inst = ingest(c.input, io);
    if (c.format == InputFormat::kInstanceJson) {
      inst.k = c.k > 0 ? c.k : inst.k;
      if (c.z > 0) inst.z = c.z;
    }
    return inst;
  }
  const auto gseed = derive_seed(c.seed, "generator", static_cast<std::uint64_t>(trial));
  const GeneratorConfig& g = c.generator;
  std::shared_ptr<const MetricSpace> metric;
  if (g.kind == "uniform")
    metric = std::make_shared<MetricSpace>(uniform_points(g.n, g.dim, gseed));
  else if (g.kind == "grid")
    metric = std::make_shared<MetricSpace>(grid_points(std::max(1, static_cast<int>(std::lround(std::pow(g.n, 1.0 / g.dim)))), g.dim));
  else if (g.kind == "two-scale")
    metric = std::make_shared<MetricSpace>(two_scale_points(g.n, g.dim, g.clusters, g.spread, gseed));
  else
    throw ParameterError("unknown generator '" + g.kind + "'");
  Rng rng(derive_seed(gseed, "penalty"));
  ClusteringInstance inst = roles_for(metric, c, rng);
  inst.validate();
  return inst;
}

nlohmann::json config_to_json(const RunConfig& c) {
  nlohmann::json j;
  j["objective"] = to_string(c.objective);
  j["epsilon"] = c.epsilon;
  j["k"] = c.k;
  j["z"] = c.z;
  j["seed"] = c.seed;
  j["trials"] = c.trials;
  j["input"] = c.input;
  j["generator"] = {{"kind", c.generator.kind}, {"n", c.generator.n}, {"dim", c.generator.dim},
                    {"clusters", c.generator.clusters}, {"spread", c.generator.spread},
                    {"facilities", c.generator.facilities}, {"opening_cost", c.generator.opening_cost},
                    {"penalty_scale", c.generator.penalty_scale}};
  j["oracle_cap"] = c.oracle.max_subsets;
  j["rho"] = c.scheme.rho;
  j["dp_caps"] = {{"inside", c.scheme.dp.max_inside_configs}, {"outside", c.scheme.dp.max_outside_keys},
                  {"combinations", c.scheme.dp.max_combinations}};
  return j;
}

nlohmann::json run_experiment(const RunConfig& c) {
  validate_config(c);
  struct Record {
    nlohmann::json json;
    double ratio = std::nan("");
    bool success = false;
    bool exact = false;
  };
  auto records = parallel_map<Record>(c.trials, c.threads, [&](int t) {
    Record rec;
    nlohmann::json& r = rec.json;
    const std::uint64_t seed = derive_seed(c.seed, "trial", static_cast<std::uint64_t>(t));
    r["trial"] = t;
    r["seed"] = seed;
    ClusteringInstance inst = trial_instance(c, t);
    SchemeOptions opt = c.scheme;
    opt.epsilon = c.epsilon;
    opt.seed = seed;
    auto start = std::chrono::steady_clock::now();
    SchemeResult res;
    try {
      res = run_scheme(inst, opt);
    } catch (const InfeasibleError& e) {
      r["error"] = e.what();
      return rec;
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    r["baseline_cost"] = finite_or_null(res.guide.cost);
    r["algorithm_cost"] = finite_or_null(res.solution.cost);
    r["declared_cost"] = finite_or_null(res.declared_cost);
    r["centers"] = res.centers;
    r["outliers"] = res.outliers;
    r["relocated"] = res.relocated;
    r["forced_centers"] = res.forced_centers;
    r["subinstances"] = res.subinstances;
    r["decomposition"] = decomposition_stats_json(res.decomposition);
    r["dp"] = dp_stats_json(res.dp);
    if (!res.round_costs.empty()) r["round_costs"] = res.round_costs;
    if (c.timing) r["wall_time_s"] = secs;
    r["exact_cost"] = nullptr;
    r["ratio"] = nullptr;
    if (c.use_oracle && oracle_eligible(inst, c.oracle)) {
      Solution ex = exact_solve(inst, c.oracle);
      rec.exact = true;
      r["exact_cost"] = ex.cost;
      double ratio = ex.cost > 0 ? res.solution.cost / ex.cost : (res.solution.cost == 0 ? 1.0 : kInf);
      rec.ratio = ratio;
      r["ratio"] = finite_or_null(ratio);
      bool ok = ratio <= tolerance(c);
      if (c.objective == Objective::kOutliers)
        ok = ok && res.outliers <= static_cast<std::int64_t>(std::ceil(tolerance(c) * c.z - 1e-9));
      if (c.objective == Objective::kKCenter)
        ok = ok && res.centers <= static_cast<int>(std::ceil(tolerance(c) * c.k - 1e-9));
      else if (c.objective != Objective::kFacilityLocation)
        ok = ok && res.centers <= c.k;
      rec.success = ok;
      r["success"] = ok;
    }
    return rec;
  });

  nlohmann::json out;
  out["schema"] = kResultSchema;
  out["config"] = config_to_json(c);
  nlohmann::json trials = nlohmann::json::array();
  std::vector<double> ratios;
  int exact = 0, good = 0;
  for (auto& rec : records) {
    trials.push_back(rec.json);
    if (rec.exact) {
      ++exact;
      if (std::isfinite(rec.ratio)) ratios.push_back(rec.ratio);
      if (rec.success) ++good;
    }
  }
  out["trials"] = trials;
  nlohmann::json agg;
  agg["tolerance"] = tolerance(c);
  if (exact == 0) {
    agg["oracle"] = c.use_oracle ? "skipped: instance beyond the oracle caps" : "disabled";
  } else {
    agg["oracle"] = "exact";
    const double rate = static_cast<double>(good) / exact;
    const double se = std::sqrt(std::max(rate * (1 - rate), 1e-12) / exact);
    agg["median_ratio"] = finite_or_null(median(ratios));
    agg["success_frequency"] = rate;
    agg["std_error"] = se;
    agg["required_success"] = required_rate(c);
    agg["check_passed"] = rate >= required_rate(c) - 3 * se;
  }
  out["aggregate"] = agg;
  return out;
}

nlohmann::json run_stats(const RunConfig& c) {
  validate_config(c);
  ClusteringInstance inst = trial_instance(c, 0);
  const MetricSpace& sp = inst.space();
  const int n = sp.size();
  const int d = sp.doubling_dimension();
  BadlyCutParams params{c.epsilon, inst.p, d};
  const double rho = c.scheme.rho > 0 ? c.scheme.rho : 0.25;
  auto hierarchy = std::make_shared<const NetHierarchy>(sp);
  const double unit = hierarchy->unit();

  const Solution guide = guide_solution(inst, derive_seed(c.seed, "baseline"));
  std::vector<double> lc(inst.clients.size());
  for (std::size_t i = 0; i < inst.clients.size(); ++i) lc[i] = guide_distance(inst, guide, static_cast<int>(i));

  // Ball samples: r = 0 first, then unit * 2^u with u uniform in [0, log2(diam / unit)].
  Rng rng(derive_seed(c.seed, "stats"));
  const double top = std::log2(std::max(2.0, distance_extremes(sp).max / unit));
  std::vector<std::pair<PointId, double>> balls{{0, 0.0}};
  for (int s = 1; s < c.stats_samples; ++s)
    balls.emplace_back(static_cast<PointId>(uniform_index(rng, n)), unit * std::exp2(top * uniform01(rng)));

  struct Sample {
    std::vector<char> bad;
    std::vector<int> cut;
    int height = 0;
  };
  auto samples = parallel_map<Sample>(c.trials, c.threads, [&](int t) {
    Sample s;
    auto sp_ptr = inst.metric;
    Decomposition dec = Decomposition::build(sp_ptr, rho, derive_seed(c.seed, "decomposition", t), hierarchy);
    s.height = dec.height();
    for (std::size_t i = 0; i < inst.clients.size(); ++i)
      s.bad.push_back(is_badly_cut_client(dec, inst.clients[i].point, lc[i], params));
    for (auto [v, r] : balls) s.cut.push_back(dec.ball_cut_level(v, r));
    return s;
  });

  const double T = c.trials;
  nlohmann::json out;
  out["schema"] = kResultSchema;
  out["config"] = config_to_json(c);
  out["kappa"] = params.kappa();
  out["tau"] = params.tau();
  nlohmann::json per = nlohmann::json::array();
  double worst = -kInf;
  for (std::size_t i = 0; i < inst.clients.size(); ++i) {
    int hits = 0;
    for (const auto& s : samples) hits += s.bad[i];
    double f = hits / T;
    double se = std::sqrt(std::max(f * (1 - f), 1e-12) / T);
    worst = std::max(worst, f - (params.kappa() + 3 * se));
    per.push_back({{"client", i}, {"frequency", f}, {"std_error", se}});
  }
  out["badly_cut"] = per;
  out["badly_cut_max_excess"] = worst;
  int height = 0;
  for (const auto& s : samples) height = std::max(height, s.height);
  nlohmann::json table = nlohmann::json::array();
  double worst_scale = -kInf;
  for (std::size_t b = 0; b < balls.size(); ++b) {
    auto [v, r] = balls[b];
    for (int i = 0; i <= height; ++i) {
      int hits = 0;
      for (const auto& s : samples) hits += s.cut[b] != kNoCut && s.cut[b] >= i;
      double f = hits / T;
      double se = std::sqrt(std::max(f * (1 - f), 1e-12) / T);
      double bound = std::exp2(2.0 * d + 2.0) * r / (unit * std::exp2(i));
      worst_scale = std::max(worst_scale, f - (bound + 3 * se));
      table.push_back({{"v", v}, {"r", r}, {"level", i}, {"frequency", f}, {"bound", bound}, {"std_error", se}});
    }
  }
  out["scaling"] = table;
  out["scaling_max_excess"] = worst_scale;
  out["check_passed"] = worst <= 0 && worst_scale <= 0;
  return out;
}

nlohmann::json run_scaling(const RunConfig& c) {
  validate_config(c);
  nlohmann::json out;
  out["schema"] = kResultSchema;
  out["config"] = config_to_json(c);
  std::vector<double> med;
  nlohmann::json rows = nlohmann::json::array();
  for (int n : c.scaling_sizes) {
    std::vector<double> times;
    for (int t = 0; t < c.trials; ++t) {
      const std::uint64_t seed = derive_seed(c.seed, "scaling", static_cast<std::uint64_t>(n) * 1000 + t);
      auto metric = std::make_shared<const MetricSpace>(uniform_points(n, 2, seed));
      RunConfig cc = c;
      Rng rng(seed);
      ClusteringInstance inst = roles_for(metric, cc, rng);
      SchemeOptions opt = c.scheme;
      opt.epsilon = c.epsilon;
      opt.seed = seed;
      auto start = std::chrono::steady_clock::now();
      SchemeResult res = run_scheme(inst, opt);
      times.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
    }
    med.push_back(median(times));
    rows.push_back({{"n", n}, {"times_s", times}, {"median_s", med.back()}});
  }
  nlohmann::json ratios = nlohmann::json::array();
  bool ok = true;
  for (std::size_t i = 1; i < med.size(); ++i) {
    double r = med[i] / med[i - 1];
    ratios.push_back(r);
    ok = ok && r <= 3.0;
  }
  out["sizes"] = rows;
  out["ratios"] = ratios;
  out["check_passed"] = ok;
  return out;
}

}  // namespace dclust
