#include <doctest.h>

#include "dclust/errors.hpp"
#include "dclust/oracle.hpp"
#include "support.hpp"

using namespace dclust;
using testing::brute_cost;
using testing::brute_optimum;
using testing::close_rel;
using testing::make_instance;

namespace {

ClusteringInstance random_penalties(ClusteringInstance inst, std::uint64_t seed, double scale) {
  Rng rng(seed);
  for (auto& c : inst.clients) c.penalty = scale * uniform01(rng);
  return inst;
}

}  // namespace

TEST_CASE("evaluate matches first principles") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto m = testing::random_plane(9, seed);
    for (Objective obj : {Objective::kFacilityLocation, Objective::kKMedian, Objective::kKMeans,
                          Objective::kPrizeCollecting, Objective::kOutliers, Objective::kKCenter}) {
      auto inst = make_instance(m, obj, 6, 2, 2, 0.3);
      if (obj == Objective::kPrizeCollecting) inst = random_penalties(inst, seed, 0.5);
      std::vector<int> open{1, 4};
      Solution s = evaluate(inst, open);
      CHECK(close_rel(s.cost, brute_cost(inst, open)));
      CHECK(s.facilities == open);
      for (std::size_t c = 0; c < inst.clients.size(); ++c)
        if (s.assignment[c] != kNotServed) CHECK((s.assignment[c] == 1 || s.assignment[c] == 4));
    }
  }
}

TEST_CASE("exact solvers agree with recursive enumeration") {
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    auto m = testing::random_plane(10, 100 + seed);
    const int k = 1 + static_cast<int>(seed % 3);
    {
      auto inst = make_instance(m, Objective::kFacilityLocation, 7, 0, 0, 0.2 + 0.05 * seed);
      Solution s = exact_fl(inst);
      CHECK(close_rel(s.cost, brute_optimum(inst, -1)));
    }
    for (Objective obj : {Objective::kKMedian, Objective::kKMeans, Objective::kKCenter, Objective::kOutliers,
                          Objective::kPrizeCollecting}) {
      auto inst = make_instance(m, obj, 8, k, 2);
      if (obj == Objective::kPrizeCollecting) inst = random_penalties(inst, seed, 0.4);
      Solution s = exact_solve(inst);
      INFO(to_string(obj) << " seed " << seed);
      CHECK(close_rel(s.cost, brute_optimum(inst, k)));
      CHECK(static_cast<int>(s.facilities.size()) <= k);
      CHECK(close_rel(s.cost, brute_cost(inst, s.facilities)));
    }
  }
}

TEST_CASE("demands weight the objective") {
  auto m = testing::random_plane(8, 42);
  auto inst = make_instance(m, Objective::kKMedian, 8, 2);
  inst.clients[3].demand = 5;
  inst.clients[6].demand = 0;
  CHECK(close_rel(exact_kmedian(inst, 2).cost, brute_optimum(inst, 2)));
  auto out = make_instance(m, Objective::kOutliers, 8, 1, 3);
  out.clients[0].demand = 2;
  Solution s = exact_outliers(out, 1, 3);
  CHECK(s.outliers == 3);
  CHECK(close_rel(s.cost, brute_optimum(out, 1)));
}

TEST_CASE("oracle caps") {
  auto m = testing::random_plane(30, 1);
  auto fl = make_instance(m, Objective::kFacilityLocation, 25);
  CHECK_FALSE(oracle_eligible(fl));
  CHECK_THROWS_AS(exact_fl(fl), CapacityError);
  auto km = make_instance(m, Objective::kKMedian, 30, 3);
  OracleCaps caps;
  caps.max_subsets = 100;
  CHECK_FALSE(oracle_eligible(km, caps));
  CHECK_THROWS_AS(exact_kmedian(km, 3, caps), CapacityError);
  CHECK(binomial(30, 3) == 4060.0);
  CHECK(binomial(5, 7) == 0.0);
}

TEST_CASE("structured solution report") {
  int admissible = 0, trials = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto m = testing::random_plane(10, 300 + seed);
    auto inst = make_instance(m, Objective::kKMedian, 10, 2);
    auto dec = Decomposition::build(m, 0.25, seed);
    Solution guide = evaluate(inst, std::vector<int>{0, 1});
    BadlyCutParams par{0.2, 1, 2};
    auto rep = validate_structured_solution(inst, dec, guide, par, seed);
    ++trials;
    admissible += rep.admissible;
    CHECK(rep.bound_applicable);
    CHECK(close_rel(rep.cost_opt, exact_kmedian(inst, 2).cost));
    CHECK(rep.clients_checked > 0);
    for (int f : rep.badly_cut) CHECK(std::find(rep.s_star.begin(), rep.s_star.end(), f) != rep.s_star.end());
  }
  CHECK(admissible > 0);
}
