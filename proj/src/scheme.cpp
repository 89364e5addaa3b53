#include "dclust/scheme.hpp"

#include <algorithm>
#include <cmath>

#include "dclust/baselines.hpp"
#include "dclust/errors.hpp"
#include "dclust/rng.hpp"

namespace dclust {

namespace {

BadlyCutParams params_for(const ClusteringInstance& inst, double epsilon) {
  BadlyCutParams params;
  params.epsilon = epsilon;
  params.p = inst.objective == Objective::kKCenter ? 1 : inst.p;
  params.d = inst.space().doubling_dimension();
  return params;
}

double rho_for(const ClusteringInstance& inst, const SchemeOptions& opt) {
  if (opt.rho > 0) return opt.rho;
  return default_rho(params_for(inst, opt.epsilon), inst.objective == Objective::kKCenter);
}

void check_options(const ClusteringInstance& inst, const SchemeOptions& opt) {
  if (!(opt.epsilon > 0 && opt.epsilon < 1)) throw ParameterError("epsilon must lie in (0, 1)");
  if (inst.objective != Objective::kFacilityLocation && inst.k < 1) throw ParameterError("k must be at least 1");
}

ClusteringInstance as_kmeans(const ClusteringInstance& inst, int k) {
  ClusteringInstance out = inst;
  out.objective = Objective::kKMeans;
  out.p = 2;
  out.k = k;
  return out;
}

SchemeResult bootstrap(const ClusteringInstance& inst, const SchemeOptions& opt) {
  ClusteringInstance km = as_kmeans(inst, inst.k);
  Solution guide = guide_solution(km, derive_seed(opt.seed, "baseline"), opt.swap_budget);
  const int n = inst.space().size();
  int rounds = opt.kmeans_rounds > 0 ? opt.kmeans_rounds
                                     : std::max(1, static_cast<int>(std::ceil(std::log2(std::max(n, 2)))));
  SchemeResult best;
  bool have = false;
  std::vector<double> trace;
  Solution current = guide;
  for (int r = 0; r < rounds; ++r) {
    SchemeResult res = run_scheme_with_guide(km, current, opt, static_cast<std::uint64_t>(r));
    trace.push_back(res.solution.cost);
    current = res.solution;
    if (!have || res.solution.cost < best.solution.cost) {
      best = std::move(res);
      have = true;
    }
    if (current.cost == 0.0) break;
  }
  best.guide = guide;
  best.round_costs = std::move(trace);
  return best;
}

SchemeResult reduced_fl(const ClusteringInstance& inst, const Solution& guide, const AspectReduction& red,
                        const SchemeOptions& opt) {
  SchemeResult out;
  std::vector<std::vector<int>> facs(red.parts.size());
  for (std::size_t i = 0; i < red.parts.size(); ++i) {
    const ClusteringInstance& sub = red.parts[i].instance;
    Solution g = meyerson_fl(sub, derive_seed(opt.seed, "baseline", i + 1));
    SchemeResult r = run_scheme_with_guide(sub, g, opt, i + 1);
    facs[i] = r.solution.facilities;
    out.declared_cost += r.declared_cost;
    out.relocated += r.relocated;
    out.dp.memo_cells += r.dp.memo_cells;
    out.dp.table_entries += r.dp.table_entries;
    out.dp.nodes += r.dp.nodes;
    out.decomposition.parts += r.decomposition.parts;
    out.decomposition.tree_nodes += r.decomposition.tree_nodes;
    out.decomposition.height = std::max(out.decomposition.height, r.decomposition.height);
  }
  out.solution = lift_reduction(inst, red, facs);
  out.guide = guide;
  return out;
}

struct PartRun {
  std::shared_ptr<const MetricSpace> space;
  std::unique_ptr<Decomposition> decomp;
  ModifiedInstance mod;
  std::unique_ptr<PortalDp> dp;
};

SchemeResult reduced_kmedian(const ClusteringInstance& inst, const Solution& guide, const AspectReduction& red,
                             const SchemeOptions& opt) {
  const int n = inst.space().size();
  DpOptions dpo = opt.dp;
  dpo.epsilon = opt.epsilon;
  std::vector<PartRun> runs(red.parts.size());
  for (std::size_t i = 0; i < red.parts.size(); ++i) {
    const ClusteringInstance& sub = red.parts[i].instance;
    Solution g = local_search_kmedian(sub, inst.k, opt.swap_budget);
    runs[i].decomp = std::make_unique<Decomposition>(
        Decomposition::build(sub.metric, rho_for(sub, opt), derive_seed(opt.seed, "decomposition", i + 1)));
    runs[i].mod = build_modified_instance(sub, g, *runs[i].decomp, params_for(sub, opt.epsilon));
  }
  const double floor_cost = power_cost(min_positive_distance(inst.space()), inst.p);
  for (int retry = 0; retry < 8; ++retry) {
    CostGrid base = make_cost_grid(guide.cost, opt.epsilon, n, floor_cost);
    CostGrid grid(base.lo(), base.hi() * std::ldexp(1.0, retry), base.ratio());
    std::vector<std::vector<int>> tables;
    for (auto& run : runs) {
      PortalDp::Setup setup;
      setup.mode = DpMode::kMedian;
      setup.options = dpo;
      setup.cost_grid = grid;
      setup.k_cap = inst.k;
      run.dp = std::make_unique<PortalDp>(run.mod.modified, *run.decomp, setup);
      tables.push_back(run.dp->root_table());
    }
    CombinedAllocation alloc;
    try {
      alloc = combine_subinstance_solutions(tables, grid, inst.k);
    } catch (const InfeasibleError&) {
      continue;
    }
    SchemeResult out;
    std::vector<std::vector<int>> facs(runs.size());
    for (std::size_t i = 0; i < runs.size(); ++i) {
      int which = runs[i].dp->entry_for_index(alloc.part_index[i]);
      facs[i] = runs[i].dp->reconstruct(which, nullptr);
      const DpStats& st = runs[i].dp->stats();
      out.dp.memo_cells += st.memo_cells;
      out.dp.table_entries += st.table_entries;
      out.dp.nodes += st.nodes;
      out.relocated += runs[i].mod.relocated_count();
      auto ds = runs[i].decomp->stats();
      out.decomposition.parts += ds.parts;
      out.decomposition.tree_nodes += ds.tree_nodes;
      out.decomposition.height = std::max(out.decomposition.height, ds.height);
    }
    out.dp.grid_retries = retry;
    out.dp.cost_grid_size = grid.size();
    out.declared_cost = alloc.summed;
    out.solution = lift_reduction(inst, red, facs);
    out.guide = guide;
    return out;
  }
  throw InfeasibleError("no cost index reachable over the sub-instances");
}

}  // namespace

Solution guide_solution(const ClusteringInstance& inst, std::uint64_t seed, int swap_budget) {
  switch (inst.objective) {
    case Objective::kFacilityLocation: return meyerson_fl(inst, seed);
    case Objective::kKCenter: return greedy_kcenter(inst, inst.k);
    case Objective::kKMeans: {
      // The k-median local optimum, scored as k-means.
      ClusteringInstance med = inst;
      med.objective = Objective::kKMedian;
      med.p = 1;
      Solution s = local_search_kmedian(med, inst.k, swap_budget);
      return evaluate(inst, s.facilities);
    }
    default: return local_search_kmedian(inst, inst.k, swap_budget);
  }
}

SchemeResult run_scheme_with_guide(const ClusteringInstance& inst, const Solution& guide,
                                   const SchemeOptions& opt, std::uint64_t round) {
  check_options(inst, opt);
  const BadlyCutParams params = params_for(inst, opt.epsilon);
  Decomposition decomp =
      Decomposition::build(inst.metric, rho_for(inst, opt), derive_seed(opt.seed, "decomposition", round));
  DpOptions dpo = opt.dp;
  dpo.epsilon = opt.epsilon;

  ModifiedInstance mod;
  if (inst.objective == Objective::kKCenter)
    mod = build_kcenter_instance(inst, guide, decomp, params, guide.cost);
  else
    mod = build_modified_instance(inst, guide, decomp, params);

  DpResult dp;
  switch (inst.objective) {
    case Objective::kFacilityLocation: dp = solve_fl_dp(mod, decomp, dpo); break;
    case Objective::kKMedian:
    case Objective::kKMeans: dp = solve_k_dp(mod, decomp, dpo, inst.k, guide.cost); break;
    case Objective::kPrizeCollecting: dp = solve_pc_dp(mod, decomp, dpo, inst.k, guide.cost); break;
    case Objective::kOutliers: dp = solve_outliers_dp(mod, decomp, dpo, inst.k, inst.z, guide.cost); break;
    case Objective::kKCenter: dp = solve_kcenter_dp(mod, decomp, dpo, inst.k, guide.cost); break;
  }

  SchemeResult out;
  out.solution = lift_solution(mod, dp.solution);
  out.guide = guide;
  out.declared_cost = dp.declared_cost;
  out.centers = static_cast<int>(out.solution.facilities.size());
  out.outliers = out.solution.outliers;
  out.relocated = mod.relocated_count();
  out.forced_centers = static_cast<int>(mod.forced_centers.size());
  out.removed_clients = static_cast<int>(mod.removed_clients.size());
  out.badly_cut_centers = static_cast<int>(mod.badly_cut_centers.size());
  out.decomposition = decomp.stats();
  out.dp = dp.stats;
  return out;
}

SchemeResult run_scheme(const ClusteringInstance& inst, const SchemeOptions& opt) {
  check_options(inst, opt);
  inst.validate();
  if (inst.objective == Objective::kKMeans) return bootstrap(inst, opt);
  Solution guide = guide_solution(inst, derive_seed(opt.seed, "baseline"), opt.swap_budget);
  const bool reducible = inst.objective == Objective::kFacilityLocation || inst.objective == Objective::kKMedian;
  if (opt.reduce_aspect && reducible && guide.cost > 0 && inst.p == 1) {
    AspectReduction red = reduce_aspect_ratio(inst, opt.epsilon, guide.cost);
    if (red.parts.size() > 1 || red.contracted_points > 0) {
      SchemeResult out = inst.objective == Objective::kFacilityLocation ? reduced_fl(inst, guide, red, opt)
                                                                        : reduced_kmedian(inst, guide, red, opt);
      out.subinstances = static_cast<int>(red.parts.size());
      out.contracted_points = red.contracted_points;
      out.max_aspect_ratio = red.max_aspect_ratio;
      out.centers = static_cast<int>(out.solution.facilities.size());
      out.outliers = out.solution.outliers;
      return out;
    }
  }
  return run_scheme_with_guide(inst, guide, opt, 0);
}

Solution bootstrap_kmeans(const ClusteringInstance& inst, int k, double epsilon, int rounds, std::uint64_t seed,
                          BootstrapTrace* trace) {
  ClusteringInstance km = as_kmeans(inst, k);
  SchemeOptions opt;
  opt.epsilon = epsilon;
  opt.seed = seed;
  opt.kmeans_rounds = rounds;
  SchemeResult r = bootstrap(km, opt);
  if (trace) trace->round_costs = r.round_costs;
  return r.solution;
}

}  // namespace dclust
