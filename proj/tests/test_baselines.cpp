#include <doctest.h>

#include <random>

#include "support.hpp"
#include "zoomcast/baselines.hpp"
#include "zoomcast/scheduler.hpp"

using namespace zoomcast;

namespace {

constexpr std::int64_t kNs = zt::kDeskSlotNs;

SlotBudget budget_of(int slots) {
  SlotBudget b;
  b.slots_per_frame = slots;
  b.slot_duration_ns = kNs;
  return b;
}

Utility units(double u) { return Utility::from_units(u); }

std::vector<UserRequest> unit_bounds(std::vector<UserRequest> r) {
  for (auto& u : r) u.guaranteed_level = 1;
  return r;
}

}  // namespace

TEST_CASE("unicast baseline") {
  const auto tiles = zt::desk_tiles(2);

  SUBCASE("one user with room gets R everywhere") {
    std::vector<UserRequest> one = {{1, zt::kOneBytePerSlot, {1, 2}, 2, 1}};
    const AllocationResult r = adaptive_unicast(tiles, one, budget_of(100), zt::desk_policy());
    CHECK(r.status == AllocationStatus::kOk);
    CHECK(r.objective == units(4));
    for (const auto& e : r.plan.entries) {
      CHECK(e.level == 2);
      CHECK(e.recipient == 1);
    }
  }
  SUBCASE("phase one exactly fills the budget") {
    // Each user needs two level-1 tiles of 4 bytes at one byte per slot: c = 8.
    std::vector<UserRequest> two = {{1, zt::kOneBytePerSlot, {1, 2}, 2, 1},
                                    {2, zt::kOneBytePerSlot, {1, 2}, 2, 1}};
    const AllocationResult fits = adaptive_unicast(tiles, two, budget_of(16), zt::desk_policy());
    CHECK(fits.status == AllocationStatus::kOk);
    CHECK(fits.plan.total_slots == 16);
    for (const auto& e : fits.plan.entries) CHECK(e.level == 1);
    CHECK(fits.objective == units(4));

    const AllocationResult over = adaptive_unicast(tiles, two, budget_of(15), zt::desk_policy());
    CHECK(over.status == AllocationStatus::kInfeasible);
    CHECK(over.objective.is_neg_inf());
  }
  SUBCASE("upgrades go by user id and skip what does not fit") {
    std::vector<UserRequest> two = {{2, zt::kOneBytePerSlot, {1}, 2, 1},
                                    {1, zt::kOneBytePerSlot, {1}, 2, 1}};
    const AllocationResult r = adaptive_unicast(tiles, two, budget_of(12), zt::desk_policy());
    CHECK(r.received_levels.at({1, 1}) == 2);
    CHECK(r.received_levels.at({1, 2}) == 1);
  }
}

TEST_CASE("multicast baseline") {
  SUBCASE("shared RoI costs one slow transmission per tile") {
    const auto tiles = zt::desk_tiles(2);
    const auto users = zt::desk_users(2);
    const AllocationResult r = adaptive_multicast(tiles, users, budget_of(8), zt::desk_policy());
    REQUIRE(r.plan.entries.size() == 2);
    for (const auto& e : r.plan.entries) {
      CHECK(e.link_rate_bps == zt::kOneBytePerSlot);
      CHECK(e.level == 1);
    }
    CHECK(r.plan.total_slots == 8);
  }
  SUBCASE("desk instance") {
    const auto tiles = zt::desk_tiles();
    const auto users = zt::desk_users();
    CHECK(adaptive_multicast(tiles, users, budget_of(8), zt::desk_policy()).objective == units(4));
    CHECK(adaptive_multicast(tiles, users, budget_of(7), zt::desk_policy()).objective == units(2));
    CHECK(adaptive_multicast(tiles, users, budget_of(3), zt::desk_policy()).status ==
          AllocationStatus::kInfeasible);
  }
  SUBCASE("popular tiles are upgraded first") {
    const auto tiles = zt::desk_tiles(2);
    std::vector<UserRequest> users = {{1, zt::kOneBytePerSlot, {1, 2}, 2, 1},
                                      {2, zt::kOneBytePerSlot, {2}, 2, 1}};
    const AllocationResult r = adaptive_multicast(tiles, users, budget_of(12), zt::desk_policy());
    CHECK(r.received_levels.at({2, 1}) == 2);
    CHECK(r.received_levels.at({1, 1}) == 1);
  }
}

TEST_CASE("approximation") {
  const auto tiles = zt::desk_tiles();
  const auto users = cluster_users(zt::desk_users(), tiles, zt::desk_policy());

  SUBCASE("a step finer than every utility gap is exact") {
    ApproximationConfig cfg;
    cfg.utility_unit = 0.25;
    for (int t = 0; t <= 12; ++t) {
      CHECK(approximation_allocate(tiles, users, t, kNs, cfg).objective ==
            multi_tile_optimal(tiles, users, t, kNs).objective);
    }
  }
  SUBCASE("half-unit step at 8 slots") {
    ApproximationConfig cfg;
    cfg.utility_unit = 0.5;
    const AllocationResult r = approximation_allocate(tiles, users, 8, kNs, cfg);
    CHECK(r.objective <= units(4));
    CHECK(units(3.5) <= r.objective);
  }
  SUBCASE("default step is a fifth of the mean top utility") {
    // Each user's top value is 2 units.
    CHECK(quantization_step(tiles, users, {}) == units(0.4));
  }
  SUBCASE("bad configuration") {
    ApproximationConfig cfg;
    cfg.epsilon = 1.5;
    CHECK_THROWS(approximation_allocate(tiles, users, 8, kNs, cfg));
  }
}

TEST_CASE("approximation bounds on random instances") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 200; ++trial) {
    const zt::Instance inst = zt::random_instance(rng);
    const auto users = cluster_users(inst.requests, inst.tiles);
    const Utility best = multi_tile_optimal(inst.tiles, users, inst.budget, kNs).objective;
    for (double eps : {0.5, 0.2, 0.05}) {
      ApproximationConfig cfg;
      cfg.epsilon = eps;
      const AllocationResult approx =
          approximation_allocate(inst.tiles, users, inst.budget, kNs, cfg);
      CHECK(approx.objective <= best);
      CHECK(approx.objective.is_finite() == best.is_finite());
      if (!approx.objective.is_finite()) continue;
      CHECK(approx.plan.total_slots <= inst.budget);
      CHECK(approx.plan.is_rate_monotone());
      CHECK(evaluate_plan(inst.tiles, inst.requests, approx.plan).objective == approx.objective);

      // Never below the optimum of the rounded-down utilities.
      const std::int64_t step = quantization_step(inst.tiles, users, cfg).ticks();
      auto rounded = users;
      for (auto& vu : rounded) {
        for (auto& row : vu.utility_table) {
          for (auto& u : row) u = Utility::from_ticks(u.ticks() / step * step);
        }
      }
      const Utility floor_best =
          multi_tile_optimal(inst.tiles, rounded, inst.budget, kNs).objective;
      CHECK(floor_best <= approx.objective);
    }
  }
}

TEST_CASE("optimal dominates both baselines with unit bounds") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 300; ++trial) {
    zt::Instance inst = zt::random_instance(rng);
    inst.requests = unit_bounds(inst.requests);
    const SlotBudget b = budget_of(inst.budget);
    const Utility best =
        multi_tile_optimal(inst.tiles, cluster_users(inst.requests, inst.tiles), inst.budget, kNs)
            .objective;
    const AllocationResult uni = adaptive_unicast(inst.tiles, inst.requests, b);
    const AllocationResult multi = adaptive_multicast(inst.tiles, inst.requests, b);
    CHECK(uni.objective <= best);
    CHECK(multi.objective <= best);
    for (const AllocationResult* r : {&uni, &multi}) {
      if (r->status != AllocationStatus::kOk) continue;
      CHECK(r->plan.total_slots <= inst.budget);
      CHECK(evaluate_plan(inst.tiles, inst.requests, r->plan).objective == r->objective);
    }
  }
}

TEST_CASE("multicast beats unicast when everyone shares rate and RoI") {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 200; ++trial) {
    zt::Instance inst = zt::random_instance(rng, {.allow_empty_roi = false});
    inst.requests = unit_bounds(inst.requests);
    if (inst.requests.size() < 2) continue;
    for (auto& u : inst.requests) {
      u.link_rate_bps = inst.requests.front().link_rate_bps;
      u.roi = inst.requests.front().roi;
    }
    const SlotBudget b = budget_of(inst.budget);
    const AllocationResult uni = adaptive_unicast(inst.tiles, inst.requests, b);
    const AllocationResult multi = adaptive_multicast(inst.tiles, inst.requests, b);
    if (uni.status == AllocationStatus::kOk) {
      REQUIRE(multi.status == AllocationStatus::kOk);
      CHECK(uni.objective <= multi.objective);
    }
  }
}

TEST_CASE("unicast can beat multicast when a slow viewer pins the tile rate") {
  // One shared tile. Multicast must lift it at the slow rate (8 slots extra),
  // unicast lifts only the fast user (2 slots extra).
  const std::vector<TileLadder> tiles = {{1, {4, 8}}};
  std::vector<UserRequest> users = {{1, zt::kOneBytePerSlot, {1}, 2, 1},
                                    {2, 32'000'000, {1}, 2, 1}};
  const SlotBudget b = budget_of(6);
  const AllocationResult uni = adaptive_unicast(tiles, users, b, zt::desk_policy());
  const AllocationResult multi = adaptive_multicast(tiles, users, b, zt::desk_policy());
  REQUIRE(uni.status == AllocationStatus::kOk);
  REQUIRE(multi.status == AllocationStatus::kOk);
  CHECK(multi.objective < uni.objective);
}
