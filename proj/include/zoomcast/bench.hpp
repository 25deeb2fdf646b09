#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "zoomcast/model.hpp"

namespace zoomcast {

struct BenchInstance {
  std::vector<TileLadder> tiles;
  std::vector<UserRequest> requests;
  std::vector<VirtualUser> users;  // one per 802.11a rate
  std::int64_t slot_duration_ns = 9000;
};

// 16x9 tiles, five-level ladder, 24 users spread over all eight 802.11a rates
// with random RoIs of roughly 40 tiles.
BenchInstance make_bench_instance(std::uint64_t seed);

struct BenchConfig {
  std::vector<int> budgets = {500, 1000, 2000, 4000};
  int repeats = 5;
  bool naive = true;
  std::optional<int> extra_budget = 4444;  // optimal only
  std::uint64_t seed = 7;
};

struct BenchPoint {
  int budget = 0;
  std::optional<double> naive_ms;
  double optimal_ms = 0.0;
  bool objectives_match = true;
};

struct BenchReport {
  std::vector<BenchPoint> points;
  double optimal_r2 = 0.0;
  // t(largest) / t(largest / 4) when both budgets are in the sweep.
  std::optional<double> naive_ratio;
  std::optional<double> extra_ms;
};

// Minimum wall time over `repeats` runs per budget.
BenchReport run_bench(const BenchConfig& cfg);

// Coefficient of determination of the least-squares line through (x, y).
double linear_r2(std::span<const double> x, std::span<const double> y);

}  // namespace zoomcast
