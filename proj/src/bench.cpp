#include "zoomcast/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "zoomcast/errors.hpp"
#include "zoomcast/scheduler.hpp"

namespace zoomcast {

BenchInstance make_bench_instance(std::uint64_t seed) {
  constexpr int kCols = 16;
  constexpr int kRows = 9;
  const double mbps[] = {1.5, 2.9, 4.6, 6.6, 10.9};
  BenchInstance b;
  for (int g = 1; g <= kCols * kRows; ++g) {
    TileLadder t;
    t.tile_id = g;
    for (double r : mbps) t.sizes.push_back(std::llround(r * 1e6 / 8 / 25 / (kCols * kRows)));
    b.tiles.push_back(std::move(t));
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> width(5, 9);
  std::uniform_int_distribution<int> height(3, 6);
  std::uniform_int_distribution<int> level(1, 5);
  const auto& rates = ieee80211a_rates();
  for (int u = 0; u < 24; ++u) {
    UserRequest r;
    r.user_id = u + 1;
    r.link_rate_bps = rates[static_cast<std::size_t>(u) % rates.size()];
    const int w = width(rng);
    const int h = height(rng);
    const int x = std::uniform_int_distribution<int>(0, kCols - w)(rng);
    const int y = std::uniform_int_distribution<int>(0, kRows - h)(rng);
    for (int yy = y; yy < y + h; ++yy) {
      for (int xx = x; xx < x + w; ++xx) r.roi.push_back(yy * kCols + xx + 1);
    }
    normalize_roi(r.roi);
    r.requested_level = level(rng);
    r.guaranteed_level = 1;
    b.requests.push_back(std::move(r));
  }
  b.users = cluster_users(b.requests, b.tiles);
  return b;
}

double linear_r2(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw ContractError("linear fit needs two or more paired points");
  }
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sxx += (x[k] - mx) * (x[k] - mx);
    sxy += (x[k] - mx) * (y[k] - my);
    syy += (y[k] - my) * (y[k] - my);
  }
  if (syy == 0.0) return 1.0;
  return (sxy * sxy) / (sxx * syy);
}

namespace {

template <class F>
double best_ms(int repeats, F&& run) {
  double best = std::numeric_limits<double>::infinity();
  for (int r = 0; r < std::max(1, repeats); ++r) {
    const auto start = std::chrono::steady_clock::now();
    run();
    const auto stop = std::chrono::steady_clock::now();
    best = std::min(best,
                    std::chrono::duration<double, std::milli>(stop - start).count());
  }
  return best;
}

}  // namespace

BenchReport run_bench(const BenchConfig& cfg) {
  const BenchInstance b = make_bench_instance(cfg.seed);
  BenchReport report;
  std::vector<double> xs, ys;
  // The improved DP is timed in its own pass so the naive combiner's large
  // tables do not disturb its cache state.
  std::vector<Utility> optimal_values;
  for (int t : cfg.budgets) {
    BenchPoint p;
    p.budget = t;
    Utility value;
    p.optimal_ms = best_ms(cfg.repeats, [&] {
      value = multi_tile_optimal(b.tiles, b.users, t, b.slot_duration_ns).objective;
    });
    optimal_values.push_back(value);
    xs.push_back(t);
    ys.push_back(p.optimal_ms);
    report.points.push_back(p);
  }
  if (cfg.extra_budget) {
    report.extra_ms = best_ms(cfg.repeats, [&] {
      multi_tile_optimal(b.tiles, b.users, *cfg.extra_budget, b.slot_duration_ns);
    });
  }
  if (cfg.naive) {
    for (std::size_t k = 0; k < report.points.size(); ++k) {
      BenchPoint& p = report.points[k];
      Utility value;
      p.naive_ms = best_ms(cfg.repeats, [&] {
        value = multi_tile_naive(b.tiles, b.users, p.budget, b.slot_duration_ns).objective;
      });
      p.objectives_match = value == optimal_values[k];
    }
  }
  if (xs.size() >= 2) report.optimal_r2 = linear_r2(xs, ys);
  if (cfg.naive) {
    auto at = [&](int t) -> std::optional<double> {
      for (const BenchPoint& p : report.points) {
        if (p.budget == t) return p.naive_ms;
      }
      return std::nullopt;
    };
    const int top = *std::max_element(cfg.budgets.begin(), cfg.budgets.end());
    if (top % 4 == 0) {
      auto hi = at(top);
      auto lo = at(top / 4);
      if (hi && lo && *lo > 0) report.naive_ratio = *hi / *lo;
    }
  }
  return report;
}

}  // namespace zoomcast
