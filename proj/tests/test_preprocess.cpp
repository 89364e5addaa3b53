#include <doctest.h>

#include <cmath>
#include <functional>

#include "dclust/baselines.hpp"
#include "dclust/errors.hpp"
#include "dclust/oracle.hpp"
#include "dclust/preprocess.hpp"
#include "support.hpp"

using namespace dclust;
using testing::make_instance;

namespace {

// Two tight blobs far apart, with a pair of nearly coincident points.
std::shared_ptr<const MetricSpace> two_blobs(std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> xy;
  for (int i = 0; i < 10; ++i) {
    double cx = i < 5 ? 0.0 : 10.0;
    xy.push_back(cx + 0.01 * uniform01(rng));
    xy.push_back(0.01 * uniform01(rng));
  }
  xy[2] = xy[0] + 1e-9;
  xy[3] = xy[1];
  return std::make_shared<const MetricSpace>(MetricSpace::euclidean(std::move(xy), 2, 2));
}

}  // namespace

TEST_CASE("combine matches enumeration over allocations") {
  CostGrid grid(1.0, 64.0, 2.0);  // 0, 1, 2, ..., 64: sums are exact
  const int J = grid.size();
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    Rng rng(seed);
    const int parts = 1 + static_cast<int>(seed % 3);
    std::vector<std::vector<int>> tab(parts, std::vector<int>(J));
    for (auto& row : tab) {
      int c = 1 + static_cast<int>(uniform_index(rng, 4));
      for (int j = 0; j < J; ++j) {
        if (j > 0 && uniform01(rng) < 0.4 && c > 0) --c;
        row[j] = j == 0 && uniform01(rng) < 0.5 ? kUnreachable : c;
      }
      for (int j = 1; j < J; ++j) row[j] = std::min(row[j], row[j - 1]);
    }
    const int k = 2 + static_cast<int>(seed % 4);
    int best = -1;
    std::function<void(int, double, int)> rec = [&](int i, double sum, int centers) {
      if (centers > k) return;
      if (i == parts) {
        int j = grid.index_up(sum);
        if (j < J && (best < 0 || j < best)) best = j;
        return;
      }
      for (int a = 0; a < J; ++a)
        if (tab[i][a] < kUnreachable) rec(i + 1, sum + grid.value(a), centers + tab[i][a]);
    };
    rec(0, 0.0, 0);
    if (best < 0) {
      CHECK_THROWS_AS(combine_subinstance_solutions(tab, grid, k), InfeasibleError);
      continue;
    }
    auto out = combine_subinstance_solutions(tab, grid, k);
    INFO("seed " << seed << " k " << k);
    CHECK(out.index == best);
    int used = 0;
    for (int c : out.part_centers) used += c;
    CHECK(used <= k);
    CHECK(out.summed <= out.cost);
  }
}

TEST_CASE("aspect reduction splits far blobs and contracts near points") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto m = two_blobs(seed);
    auto inst = make_instance(m, Objective::kKMedian, 10, 2);
    const double eps = 0.3;
    Solution g = local_search_kmedian(inst, 2);
    auto red = reduce_aspect_ratio(inst, eps, g.cost);
    CHECK(red.parts.size() == 2u);
    CHECK(red.contracted_points >= 1);
    const double n = 10;
    CHECK(red.max_aspect_ratio <= 16.0 * std::pow(n, 5) / eps);
    std::int64_t demand = 0;
    for (const auto& p : red.parts) demand += p.instance.total_demand();
    CHECK(demand == inst.total_demand());

    // Combined exact optimum and its lift.
    const Solution opt = exact_kmedian(inst, 2);
    // Each blob needs its own center, so the split is one and one.
    Solution a = exact_kmedian(red.parts[0].instance, 1);
    Solution b = exact_kmedian(red.parts[1].instance, 1);
    const double combined = a.cost + b.cost;
    std::vector<std::vector<int>> best_sets{a.facilities, b.facilities};
    CHECK(combined <= (1 + eps / n) * opt.cost + 1e-15);
    Solution lifted = lift_reduction(inst, red, best_sets);
    CHECK(std::abs(lifted.cost - combined) <= eps * opt.cost / n);
  }
}

TEST_CASE("reduction without a facility in a component") {
  auto m = two_blobs(3);
  auto inst = make_instance(m, Objective::kKMedian, 4, 2);  // facilities only in the first blob
  CHECK_THROWS_AS(reduce_aspect_ratio(inst, 0.3, 0.05), InfeasibleError);
  CHECK_THROWS_AS(reduce_aspect_ratio(inst, 0.3, 0.0), ParameterError);
}

TEST_CASE("modified instance relocates exactly the badly cut clients") {
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    auto m = testing::random_plane(25, seed);
    auto inst = make_instance(m, Objective::kKMedian, 25, 3);
    Solution g = local_search_kmedian(inst, 3);
    auto dec = Decomposition::build(m, 0.25, seed);
    BadlyCutParams par{0.3, 1, 2};
    par.d = -6;  // a negative tau makes relocations common
    auto mod = build_modified_instance(inst, g, dec, par);
    for (std::size_t c = 0; c < inst.clients.size(); ++c) {
      int f = -1;
      double l = guide_distance(inst, g, static_cast<int>(c), &f);
      bool bad = inst.facilities[f].point != inst.clients[c].point &&
                 is_badly_cut_client(dec, inst.clients[c].point, l, par);
      CHECK((mod.relocations[c] >= 0) == bad);
      if (bad) CHECK(mod.modified.clients[c].point == inst.facilities[f].point);
      else CHECK(mod.modified.clients[c].point == inst.clients[c].point);
    }
    Solution lifted = lift_solution(mod, g);
    CHECK(testing::close_rel(lifted.cost, g.cost));
  }
}

TEST_CASE("k-center surgery") {
  int with_bad = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto m = testing::random_plane(30, seed + 60);
    auto inst = make_instance(m, Objective::kKCenter, 30, 3);
    Solution g = greedy_kcenter(inst, 3);
    auto dec = Decomposition::build(m, 0.25, seed);
    BadlyCutParams par{0.3, 1, -6};  // tau below zero: many centers count as badly cut
    auto mod = build_kcenter_instance(inst, g, dec, par, g.cost);
    with_bad += !mod.badly_cut_centers.empty();
    CHECK(mod.cover_sizes.size() == mod.badly_cut_centers.size());
    for (int c : mod.removed_clients) {
      CHECK(mod.modified.clients[c].demand == 0);
      bool near_forced = false;
      for (int f : mod.forced_centers)
        near_forced |= m->dist(inst.clients[c].point, inst.facilities[f].point) <= g.cost / 2 + 1e-12;
      if (!mod.cover_fallback) CHECK(near_forced);
    }
    CHECK(std::is_sorted(mod.forced_centers.begin(), mod.forced_centers.end()));
  }
  CHECK(with_bad > 0);
}

TEST_CASE("relocations happen under a negative tau") {
  int moved = 0;
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    auto m = testing::random_plane(25, seed);
    auto inst = make_instance(m, Objective::kKMedian, 25, 3);
    auto dec = Decomposition::build(m, 0.25, seed);
    auto mod = build_modified_instance(inst, local_search_kmedian(inst, 3), dec, BadlyCutParams{0.3, 1, -6});
    moved += mod.relocated_count();
  }
  CHECK(moved > 0);
}

TEST_CASE("combine is non-increasing in k") {
  CostGrid grid(0.1, 20.0, 1.25);
  const int J = grid.size();
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    Rng rng(seed + 100);
    std::vector<std::vector<int>> tab(3, std::vector<int>(J));
    for (auto& row : tab) {
      int c = 1 + static_cast<int>(uniform_index(rng, 3));
      for (int j = 0; j < J; ++j) {
        if (uniform01(rng) < 0.2 && c > 0) --c;
        row[j] = c;
      }
    }
    int prev = J;
    for (int k = 0; k <= 9; ++k) {
      int idx = J;
      try {
        idx = combine_subinstance_solutions(tab, grid, k).index;
      } catch (const InfeasibleError&) {
      }
      CHECK(idx <= prev);
      prev = idx;
    }
    CHECK(prev < J);
  }
}
