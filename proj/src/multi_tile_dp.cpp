#include <algorithm>
#include <string>

#include "dp_common.hpp"
#include "zoomcast/scheduler.hpp"

namespace zoomcast {

DecisionJournal::DecisionJournal(std::span<const TileLadder> tiles,
                                 std::span<const VirtualUser> users, int budget,
                                 std::int64_t slot_duration_ns)
    : tile_count_(static_cast<int>(tiles.size())),
      user_count_(static_cast<int>(users.size())),
      levels_(tiles.empty() ? 0 : tiles.front().levels()),
      budget_(budget) {
  for (const VirtualUser& vu : users) rates_.push_back(vu.link_rate_bps);
  costs_.assign(tiles.size() * (levels_ + 1) * (user_count_ + 1), 0);
  interested_.assign(tiles.size() * (user_count_ + 1), 0);
  for (int g = 1; g <= tile_count_; ++g) {
    const TileLadder& tile = tiles[static_cast<std::size_t>(g - 1)];
    tile_ids_.push_back(tile.tile_id);
    const auto table_index = static_cast<std::size_t>(tile.tile_id - 1);
    for (int i = 1; i <= user_count_; ++i) {
      interested_[index2(g, i)] =
          users[static_cast<std::size_t>(i - 1)].interested(table_index) ? 1 : 0;
      for (Level m = 1; m <= levels_; ++m) {
        costs_[index3(g, m, i)] =
            slot_cost(tile.size(m), rate(i), slot_duration_ns);
      }
    }
  }
  decisions_.assign(static_cast<std::size_t>(tile_count_) * user_count_ *
                        levels_ * (static_cast<std::size_t>(budget_) + 1),
                    0);
}

TransmissionPlan extract_schedule(const DecisionJournal& journal,
                                  int start_budget) {
  TransmissionPlan plan;
  int t = start_budget < 0 ? journal.budget() : start_budget;
  if (t > journal.budget()) {
    throw InternalError("extraction budget exceeds journal budget");
  }
  int g = journal.tile_count();
  int i = journal.user_count();
  Level m = journal.levels();
  while (g >= 1) {
    if (i == 0) {
      --g;
      i = journal.user_count();
      m = journal.levels();
      continue;
    }
    if (!journal.interested(g, i)) {
      --i;
      continue;
    }
    if (m == 0) {
      throw InternalError("journal replay reached level 0 at tile " +
                          std::to_string(journal.tile_id(g)));
    }
    const int choice = journal.decision(g, i, m, t);
    if (choice == 0) {
      --m;
      continue;
    }
    if (choice > i) throw InternalError("journal names a faster user");
    const int cost = journal.cost(g, m, choice);
    if (cost > t) throw InternalError("journal decision exceeds the budget");
    plan.add({journal.tile_id(g), m, journal.rate(choice), cost, std::nullopt});
    t -= cost;
    i = choice - 1;
    --m;
  }
  plan.sort();
  return plan;
}

AllocationResult multi_tile_optimal(std::span<const TileLadder> tiles,
                                    std::span<const VirtualUser> users,
                                    int budget, std::int64_t slot_duration_ns) {
  DecisionJournal journal;
  return multi_tile_optimal(tiles, users, budget, slot_duration_ns, journal);
}

AllocationResult multi_tile_optimal(std::span<const TileLadder> tiles,
                                    std::span<const VirtualUser> users,
                                    int budget, std::int64_t slot_duration_ns,
                                    DecisionJournal& journal) {
  const int levels = validate_tiles(tiles);
  detail::check_sorted(users);
  detail::check_budget(budget);
  detail::check_exact_range(tiles, users);
  journal = DecisionJournal(tiles, users, budget, slot_duration_ns);

  const int n = static_cast<int>(users.size());
  const auto width = static_cast<std::size_t>(budget) + 1;
  using detail::kNegInf;

  // best[t]: optimum over the tiles already folded in with t slots.
  std::vector<double> best(width, 0.0);
  const std::vector<double> unreachable(width, kNegInf);
  // Rows of the current tile's layer, one per (i, m) with user i interested.
  std::vector<double> layer(static_cast<std::size_t>(n) * levels * width);
  // rows[i * (M + 1) + m] points at U*(g, i, m, .). Uninterested users alias
  // the row below them.
  std::vector<const double*> rows(static_cast<std::size_t>(n + 1) * (levels + 1));
  auto row = [&](int i, Level m) -> const double*& {
    return rows[static_cast<std::size_t>(i) * (levels + 1) + m];
  };

  for (int g = 1; g <= journal.tile_count(); ++g) {
    const auto table_index =
        static_cast<std::size_t>(tiles[static_cast<std::size_t>(g - 1)].tile_id - 1);
    for (Level m = 0; m <= levels; ++m) row(0, m) = best.data();
    for (int i = 1; i <= n; ++i) {
      if (!journal.interested(g, i)) {
        for (Level m = 0; m <= levels; ++m) row(i, m) = row(i - 1, m);
        continue;
      }
      row(i, 0) = unreachable.data();
      for (Level m = 1; m <= levels; ++m) {
        double* out =
            &layer[(static_cast<std::size_t>(i - 1) * levels + (m - 1)) * width];
        std::uint8_t* decision = journal.row(g, i, m);
        std::fill(out, out + width, kNegInf);
        double reward = 0.0;
        for (int from = i; from >= 1; --from) {
          const double r = detail::to_cell(
              users[static_cast<std::size_t>(from - 1)].reward(table_index, m));
          if (r == kNegInf) break;  // every slower start also covers `from`
          reward += r;
          const int cost = journal.cost(g, m, from);
          if (cost > budget) continue;
          const double* below = row(from - 1, m - 1);
          const auto from_code = static_cast<std::uint8_t>(from);
          for (std::size_t t = static_cast<std::size_t>(cost); t < width; ++t) {
            const double candidate = below[t - cost] + reward;
            if (candidate >= out[t]) {
              out[t] = candidate;
              decision[t] = from_code;
            }
          }
        }
        const double* skip = row(i, m - 1);
        for (std::size_t t = 0; t < width; ++t) {
          if (skip[t] >= out[t]) {
            out[t] = skip[t];
            decision[t] = 0;
          }
        }
        row(i, m) = out;
      }
    }
    const double* top = row(n, levels);
    if (top != best.data()) std::copy(top, top + width, best.begin());
  }

  AllocationResult result;
  result.objective = detail::from_cell(best[width - 1]);
  result.budget_curve.reserve(width);
  for (double v : best) result.budget_curve.push_back(detail::from_cell(v));
  if (result.objective.is_finite()) {
    result.plan = extract_schedule(journal);
  } else {
    result.status = AllocationStatus::kInfeasible;
  }
  return result;
}

}  // namespace zoomcast
