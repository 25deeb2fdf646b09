#include "dp_common.hpp"
#include "zoomcast/scheduler.hpp"

namespace zoomcast {

AllocationResult multi_tile_naive(std::span<const TileLadder> tiles,
                                  std::span<const VirtualUser> users,
                                  int budget, std::int64_t slot_duration_ns) {
  validate_tiles(tiles);
  detail::check_sorted(users);
  detail::check_budget(budget);
  detail::check_exact_range(tiles, users);
  using detail::kNegInf;

  const auto width = static_cast<std::size_t>(budget) + 1;
  std::vector<DecisionJournal> journals;
  journals.reserve(tiles.size());
  // split[g][t]: slots given to tile g when tiles 1..g share t slots.
  std::vector<std::vector<int>> split(tiles.size(), std::vector<int>(width, 0));
  std::vector<double> best(width, 0.0);
  std::vector<double> next(width);

  for (std::size_t g = 0; g < tiles.size(); ++g) {
    const std::span<const TileLadder> one(&tiles[g], 1);
    journals.emplace_back(one, users, budget, slot_duration_ns);
    const std::vector<double> tile_curve =
        detail::solve_single_tile(tiles[g], users, budget, journals.back());
    for (std::size_t t = 0; t < width; ++t) {
      double top = kNegInf;
      int chosen = 0;
      for (std::size_t own = 0; own <= t; ++own) {
        if (tile_curve[own] == kNegInf || best[t - own] == kNegInf) continue;
        const double candidate = best[t - own] + tile_curve[own];
        if (candidate > top) {
          top = candidate;
          chosen = static_cast<int>(own);
        }
      }
      next[t] = top;
      split[g][t] = chosen;
    }
    best.swap(next);
  }

  AllocationResult result;
  result.objective = detail::from_cell(best.back());
  for (double v : best) result.budget_curve.push_back(detail::from_cell(v));
  if (!result.objective.is_finite()) {
    result.status = AllocationStatus::kInfeasible;
    return result;
  }
  int t = budget;
  for (std::size_t g = tiles.size(); g-- > 0;) {
    const int own = split[g][static_cast<std::size_t>(t)];
    for (const TransmissionEntry& e : extract_schedule(journals[g], own).entries) {
      result.plan.add(e);
    }
    t -= own;
  }
  result.plan.sort();
  return result;
}

}  // namespace zoomcast
