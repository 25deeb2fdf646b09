#include <algorithm>

#include "dp_common.hpp"
#include "zoomcast/scheduler.hpp"

namespace zoomcast {

namespace detail {

std::vector<double> solve_single_tile(const TileLadder& tile,
                                      std::span<const VirtualUser> users,
                                      int budget, DecisionJournal& journal) {
  const int n = static_cast<int>(users.size());
  const int levels = tile.levels();
  const auto g = static_cast<std::size_t>(tile.tile_id - 1);
  const auto width = static_cast<std::size_t>(budget) + 1;

  // value[(i * (M + 1) + m) * width + t] = U(i, m, t)
  std::vector<double> value(static_cast<std::size_t>(n + 1) * (levels + 1) * width,
                            0.0);
  auto at = [&](int i, Level m, int t) -> double& {
    return value[(static_cast<std::size_t>(i) * (levels + 1) + m) * width +
                 static_cast<std::size_t>(t)];
  };

  for (int t = 0; t <= budget; ++t) {
    for (int i = 1; i <= n; ++i) {
      const bool interested = journal.interested(1, i);
      for (Level m = 0; m <= levels; ++m) {
        if (!interested) {
          at(i, m, t) = at(i - 1, m, t);
          continue;
        }
        if (m == 0) {
          at(i, m, t) = kNegInf;
          continue;
        }
        // Skip wins ties; among transmissions the slowest start wins.
        double best = at(i, m - 1, t);
        int choice = 0;
        double reward = 0.0;
        for (int from = i; from >= 1; --from) {
          reward += to_cell(users[static_cast<std::size_t>(from - 1)].reward(g, m));
          if (reward == kNegInf) break;
          const int cost = journal.cost(1, m, from);
          if (cost > t) continue;
          const double candidate = at(from - 1, m - 1, t - cost) + reward;
          if (candidate > best || (candidate == best && choice != 0)) {
            best = candidate;
            choice = from;
          }
        }
        at(i, m, t) = best;
        journal.row(1, i, m)[t] = static_cast<std::uint8_t>(choice);
      }
    }
  }

  std::vector<double> curve(width);
  for (int t = 0; t <= budget; ++t) curve[static_cast<std::size_t>(t)] = at(n, levels, t);
  return curve;
}

}  // namespace detail

AllocationResult single_tile_optimal(const TileLadder& tile,
                                     std::span<const VirtualUser> users,
                                     int slots, std::int64_t slot_duration_ns) {
  tile.validate();
  detail::check_sorted(users);
  detail::check_budget(slots);
  const std::span<const TileLadder> one(&tile, 1);
  detail::check_exact_range(one, users);
  DecisionJournal journal(one, users, slots, slot_duration_ns);
  const std::vector<double> curve =
      detail::solve_single_tile(tile, users, slots, journal);

  AllocationResult result;
  result.objective = detail::from_cell(curve.back());
  for (double v : curve) result.budget_curve.push_back(detail::from_cell(v));
  if (result.objective.is_finite()) {
    result.plan = extract_schedule(journal);
  } else {
    result.status = AllocationStatus::kInfeasible;
  }
  return result;
}

}  // namespace zoomcast
