#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dclust/instance.hpp"
#include "dclust/split_tree.hpp"

namespace dclust {

struct OracleCaps {
  int max_fl_facilities = 20;
  double max_subsets = 1e6;
};

double binomial(int n, int k);

// Whether the exact solver for inst.objective fits under the caps.
bool oracle_eligible(const ClusteringInstance& inst, const OracleCaps& caps = {});

// Exhaustive solvers. Each throws CapacityError beyond its cap.
Solution exact_fl(const ClusteringInstance& inst, const OracleCaps& caps = {});
Solution exact_kmedian(const ClusteringInstance& inst, int k, const OracleCaps& caps = {});  // uses inst.p
Solution exact_kmeans(const ClusteringInstance& inst, int k, const OracleCaps& caps = {});
Solution exact_kcenter(const ClusteringInstance& inst, int k, const OracleCaps& caps = {});
Solution exact_pc(const ClusteringInstance& inst, int k, const OracleCaps& caps = {});
Solution exact_outliers(const ClusteringInstance& inst, int k, std::int64_t z, const OracleCaps& caps = {});
// Dispatch on inst.objective with inst.k and inst.z.
Solution exact_solve(const ClusteringInstance& inst, const OracleCaps& caps = {});

struct CutViolation {
  int client = 0;
  int cut_level = 0;
  double bound = 0.0;
};

struct StructuredReport {
  std::vector<int> opt;        // facility indices of the exact optimum
  std::vector<int> opt_prime;  // after Step 1
  std::vector<int> s_star;     // after Steps 2 and 3
  std::vector<int> badly_cut;  // badly cut facilities of L (w.r.t. the Step-1 solution)
  std::vector<int> badly_cut_l0;
  int step1_budget = 0;
  bool step1_exact = true;     // false when the greedy fallback chose the removed set
  double step1_removal_sum = 0.0;  // sum of single-removal cost increases over H
  double step1_constant = 0.0;     // removal sum / (cost(OPT) + cost(L))
  std::int64_t extra_outliers = 0; // demand OPT served from centers removed in Step 1
  bool admissible = false;         // |S*| <= k
  double cost_opt = 0.0, cost_opt_prime = 0.0, cost_l = 0.0, cost_s_star = 0.0;
  bool bound_applicable = false;   // epsilon <= 1/5, where the cut-level bound holds
  int clients_checked = 0;
  std::vector<CutViolation> violations;
};

// Builds the analysis-only structured solution from the exact optimum and the
// guide L over a fixed decomposition, and checks the cut-level bound
// log2(4 OPT_c + 3 L_c / eps) + tau for every client at its modified location.
// Prize-collecting and outlier instances use their own cost functions; the
// outlier variant removes a uniformly random Step-1 subset drawn from `seed`.
StructuredReport validate_structured_solution(const ClusteringInstance& inst, const Decomposition& decomp,
                                              const Solution& guide, const BadlyCutParams& params,
                                              std::uint64_t seed = 0, const OracleCaps& caps = {});

}  // namespace dclust
