#include <doctest.h>

#include <numeric>
#include <random>

#include "support.hpp"
#include "zoomcast/errors.hpp"
#include "zoomcast/simulator.hpp"

using namespace zoomcast;

namespace {

Scenario desk_scenario(int slots = 8) {
  Scenario sc;
  sc.grid = {1, 1};
  sc.rate_set = {zt::kOneBytePerSlot, zt::kTwoBytesPerSlot};
  sc.slot = {slots, zt::kDeskSlotNs, 25.0};
  sc.ladders = zt::desk_tiles();
  sc.users = zt::desk_users();
  sc.policy = std::make_shared<LevelWeightUtility>(std::vector<double>{1.0, 2.0});
  sc.duration_s = 4.0;
  sc.adapt_rates = false;
  return sc;
}

// A 4x3 grid with three levels, six users on mixed rates and overlapping RoIs.
// Rates stay fixed unless a test turns adaptation on.
Scenario grid_scenario(int slots, std::uint64_t seed) {
  Scenario sc;
  sc.grid = {4, 3};
  sc.rate_set = ieee80211a_rates();
  sc.slot = {slots, 9000, 25.0};
  for (int g = 1; g <= 12; ++g) {
    sc.ladders.push_back({g, {400 + 10 * g, 900 + 15 * g, 1700 + 20 * g}});
  }
  const std::vector<std::int64_t> rates = {6'000'000,  12'000'000, 24'000'000,
                                           24'000'000, 36'000'000, 54'000'000};
  const std::vector<RoiRect> rects = {{0, 0, 2, 2}, {1, 0, 2, 2}, {1, 1, 2, 2},
                                      {2, 1, 2, 2}, {0, 1, 3, 2}, {1, 0, 3, 1}};
  for (int u = 0; u < 6; ++u) {
    UserRequest r;
    r.user_id = u + 1;
    r.link_rate_bps = rates[static_cast<std::size_t>(u)];
    r.roi = sc.grid.tiles_in(rects[static_cast<std::size_t>(u)]);
    r.requested_level = 3;
    sc.users.push_back(r);
  }
  sc.duration_s = 6.0;
  sc.adapt_rates = false;
  sc.seed = seed;
  return sc;
}

}  // namespace

TEST_CASE("similarity") {
  const std::vector<UserRequest> same = {{1, 6'000'000, {1, 2}, 1, 1},
                                         {2, 6'000'000, {1, 2}, 1, 1}};
  CHECK(similarity(same) == doctest::Approx(1.0));
  const std::vector<UserRequest> apart = {{1, 6'000'000, {1, 2}, 1, 1},
                                          {2, 6'000'000, {3, 4}, 1, 1}};
  CHECK(similarity(apart) == 0.0);
  const std::vector<UserRequest> half = {{1, 6'000'000, {1, 2}, 1, 1},
                                         {2, 6'000'000, {2, 3}, 1, 1}};
  CHECK(similarity(half) == doctest::Approx(0.5));
  const std::vector<UserRequest> with_empty = {{1, 6'000'000, {1, 2}, 1, 1},
                                               {2, 6'000'000, {2, 3}, 1, 1},
                                               {3, 6'000'000, {}, 1, 1}};
  CHECK(similarity(with_empty) == doctest::Approx(0.5));
  const std::vector<UserRequest> none = {{1, 6'000'000, {}, 1, 1}};
  CHECK_THROWS_AS(similarity(none), ContractError);
}

TEST_CASE("fairness") {
  CHECK(fairness(std::vector<double>{3, 3, 3}) == 0.0);
  CHECK(fairness(std::vector<double>{0, 2}) == doctest::Approx(1.0));
}

TEST_CASE("proportional split conserves the total") {
  CHECK(proportional_split(10, default_frame_profile(10)) ==
        std::vector<std::int64_t>{2, 1, 1, 1, 1, 1, 1, 1, 0, 1});
  CHECK(proportional_split(7, std::vector<double>{1, 1, 1}) ==
        std::vector<std::int64_t>{3, 2, 2});
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> w(0.1, 5.0);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> weights(static_cast<std::size_t>(1 + trial % 12));
    for (double& x : weights) x = w(rng);
    const std::int64_t total = static_cast<std::int64_t>(rng() % 50'000);
    const auto parts = proportional_split(total, weights);
    CHECK(std::accumulate(parts.begin(), parts.end(), std::int64_t{0}) == total);
    const double sum = std::accumulate(weights.begin(), weights.end(), 0.0);
    for (std::size_t k = 0; k < parts.size(); ++k) {
      CHECK(std::abs(static_cast<double>(parts[k]) - total * weights[k] / sum) < 1.0);
    }
  }
  CHECK_THROWS_AS(proportional_split(5, std::vector<double>{1, 0}), ContractError);
}

TEST_CASE("desk scenario replay") {
  const auto reports = run_simulation(desk_scenario());
  REQUIRE(reports.size() == 2);
  for (const auto& r : reports) {
    CHECK(r.status == AllocationStatus::kOk);
    CHECK(r.planned_objective == Utility::from_units(4));
    CHECK(r.total_realized == doctest::Approx(4.0));
    CHECK(r.realized_ticks == 4 * r.gops * Utility::kTicksPerUnit);
    CHECK(r.slots_used == 8);
    CHECK(r.reception_bitmap.at({1, 1}) == 2);
    CHECK(r.reception_bitmap.at({2, 1}) == 2);
    // 8 bytes a frame, 50 frames, over 2 s.
    CHECK(r.goodput_bps.at(1) == doctest::Approx(8.0 * 8 * 50 / 2.0));
    const auto budgets = std::accumulate(r.frame_budgets.begin(), r.frame_budgets.end(),
                                         std::int64_t{0});
    CHECK(budgets == 80);
    for (std::size_t f = 0; f < r.frame_usage.size(); ++f) {
      CHECK(r.frame_usage[f] <= r.frame_budgets[f]);
    }
  }
}

TEST_CASE("ample budget without loss yields every user's maximum") {
  for (AllocatorKind kind : all_allocators()) {
    Scenario sc = grid_scenario(6000, 1);
    sc.allocator = kind;
    double expected = 0.0;
    for (const auto& u : sc.users) expected += static_cast<double>(u.roi.size());
    for (const auto& r : run_simulation(sc)) {
      CHECK(r.total_realized == doctest::Approx(expected));
    }
  }
}

TEST_CASE("a user who loses everything gets nothing") {
  Scenario sc = desk_scenario();
  sc.adapt_rates = false;
  sc.loss.per_user_rate_loss[1] = {1.0, 1.0};
  for (const auto& r : run_simulation(sc)) {
    CHECK(r.realized_utility.at(1) == 0.0);
    CHECK(r.realized_utility.at(2) == doctest::Approx(2.0));
    CHECK(r.goodput_bps.at(1) == 0.0);
  }
}

TEST_CASE("reports are deterministic in the seed") {
  Scenario sc = grid_scenario(3000, 11);
  sc.adapt_rates = true;
  for (int u = 1; u <= 6; ++u) {
    sc.loss.per_user_rate_loss[u] = {0.01, 0.01, 0.02, 0.05, 0.08, 0.15, 0.3, 0.5};
  }
  const auto a = run_simulation(sc);
  const auto b = run_simulation(sc);
  REQUIRE(a.size() == b.size());
  for (std::size_t e = 0; e < a.size(); ++e) {
    CHECK(a[e].realized_ticks == b[e].realized_ticks);
    CHECK(a[e].plan.entries == b[e].plan.entries);
    CHECK(a[e].rate_index == b[e].rate_index);
    CHECK(a[e].reception_bitmap == b[e].reception_bitmap);
  }
  sc.seed = 12;
  const auto c = run_simulation(sc);
  bool differs = false;
  for (std::size_t e = 0; e < a.size(); ++e) differs |= a[e].realized_ticks != c[e].realized_ticks;
  CHECK(differs);
}

TEST_CASE("lossless replay matches the planner for every allocator") {
  for (int slots : {800, 1500, 2500, 4444}) {
    for (AllocatorKind kind : all_allocators()) {
      Scenario sc = grid_scenario(slots, 5);
      sc.allocator = kind;
      for (const auto& r : run_simulation(sc)) {
        if (r.status != AllocationStatus::kOk || r.degraded) continue;
        CHECK(r.realized_ticks == r.planned_objective.ticks() * r.gops);
        CHECK(r.slots_used <= slots);
      }
    }
  }
}

TEST_CASE("trace events take effect at the next epoch") {
  Scenario sc = grid_scenario(6000, 1);
  sc.trace.push_back({1.0, 1, TraceKind::kRoi, {0, 0, 1, 1}});
  const auto reports = run_simulation(sc);
  CHECK(reports[0].realized_utility.at(1) == doctest::Approx(4.0));
  CHECK(reports[1].realized_utility.at(1) == doctest::Approx(1.0));

  Scenario desk = desk_scenario(100);
  desk.trace.push_back({2.0, 1, TraceKind::kZoom, {}, 1});
  desk.trace.push_back({2.0, 2, TraceKind::kZoom, {}, 1});
  const auto zoomed = run_simulation(desk);
  CHECK(zoomed[0].reception_bitmap.at({1, 1}) == 2);
  CHECK(zoomed[1].reception_bitmap.at({1, 1}) == 1);
  CHECK(zoomed[1].total_realized == doctest::Approx(2.0));
}

TEST_CASE("goodput scales with the delivery probability") {
  const double lossless = goodput(run_simulation(desk_scenario()), 2.0).average_bps;
  const double p = 0.2;
  double sum = 0.0;
  const int seeds = 100;
  for (int s = 1; s <= seeds; ++s) {
    Scenario sc = desk_scenario();
    sc.adapt_rates = false;
    sc.seed = static_cast<std::uint64_t>(s);
    sc.loss.per_user_rate_loss[1] = {p, p};
    sc.loss.per_user_rate_loss[2] = {p, p};
    sum += goodput(run_simulation(sc), 2.0).average_bps;
  }
  CHECK(sum / seeds / lossless == doctest::Approx(1.0 - p).epsilon(0.03));
}

TEST_CASE("optimal spreads utility at least as evenly as unicast") {
  double optimal = 0.0;
  double unicast = 0.0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    for (AllocatorKind kind : {AllocatorKind::kOptimal, AllocatorKind::kUnicast}) {
      Scenario sc = grid_scenario(2500, seed);
      sc.allocator = kind;
      sc.adapt_rates = true;
      for (const auto& u : sc.users) {
        sc.loss.per_user_rate_loss[u.user_id] = std::vector<double>(8, 0.02);
        sc.loss.max_rate_index[u.user_id] = sc.rate_index(u.link_rate_bps);
      }
      double f = 0.0;
      const auto reports = run_simulation(sc);
      for (const auto& r : reports) f += fairness(r);
      (kind == AllocatorKind::kOptimal ? optimal : unicast) += f / reports.size();
    }
  }
  CHECK(optimal <= unicast);
}

TEST_CASE("scenario validation") {
  Scenario sc = desk_scenario();
  sc.users[0].link_rate_bps = 6'000'000;
  CHECK_THROWS_AS(run_simulation(sc), ContractError);
  sc = desk_scenario();
  sc.gop_length = 7;
  CHECK_THROWS_AS(run_simulation(sc), ContractError);
  sc = desk_scenario();
  sc.trace.push_back({1.0, 9, TraceKind::kZoom, {}, 1});
  CHECK_THROWS_AS(run_simulation(sc), ContractError);
}
