#include <algorithm>
#include <cmath>
#include <limits>

#include "dp_common.hpp"
#include "zoomcast/baselines.hpp"

namespace zoomcast {

void ApproximationConfig::validate() const {
  if (utility_unit) {
    if (!(*utility_unit > 0.0) || !std::isfinite(*utility_unit)) {
      throw ContractError("utility unit must be positive");
    }
    return;
  }
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw ContractError("epsilon must lie in (0, 1)");
  }
}

Utility quantization_step(std::span<const TileLadder> tiles,
                          std::span<const VirtualUser> users,
                          const ApproximationConfig& cfg) {
  cfg.validate();
  if (cfg.utility_unit) {
    return Utility::from_ticks(
        std::max<std::int64_t>(1, std::llround(*cfg.utility_unit *
                                                Utility::kTicksPerUnit)));
  }
  const int levels = validate_tiles(tiles);
  double total = 0.0;
  double pairs = 0.0;
  for (const VirtualUser& vu : users) {
    for (std::size_t g = 0; g < tiles.size(); ++g) {
      if (!vu.interested(g)) continue;
      total += static_cast<double>(vu.table(g, levels).ticks());
      pairs += vu.interested_members_per_tile[g];
    }
  }
  const double mean = pairs > 0 ? total / pairs : Utility::kTicksPerUnit;
  return Utility::from_ticks(
      std::max<std::int64_t>(1, std::llround(cfg.epsilon * mean)));
}

namespace {

constexpr std::int64_t kNever = std::int64_t{1} << 60;

// Quantized reward of virtual user c (0-based) for tile g at level m; -1 when
// the level breaks the user's guarantee.
std::int64_t quantized(const VirtualUser& vu, std::size_t g, Level m,
                       std::int64_t step) {
  const Utility r = vu.reward(g, m);
  if (r.is_neg_inf()) return -1;
  return r.ticks() / step;
}

}  // namespace

AllocationResult approximation_allocate(std::span<const TileLadder> tiles,
                                        std::span<const VirtualUser> users,
                                        int budget, std::int64_t slot_duration_ns,
                                        const ApproximationConfig& cfg) {
  const int levels = validate_tiles(tiles);
  detail::check_sorted(users);
  detail::check_budget(budget);
  const std::int64_t step = quantization_step(tiles, users, cfg).ticks();

  std::int64_t top = 0;
  for (const VirtualUser& vu : users) {
    for (std::size_t g = 0; g < tiles.size(); ++g) {
      if (vu.interested(g)) top += quantized(vu, g, levels, step);
    }
  }
  const int n = static_cast<int>(users.size());
  const auto width = static_cast<std::size_t>(top) + 1;
  if (static_cast<double>(width) * n * levels * tiles.size() > 4e9) {
    throw ContractError("quantization step too fine for this instance");
  }

  // The journal's budget axis holds quantized utility here.
  DecisionJournal journal(tiles, users, static_cast<int>(top), slot_duration_ns);
  std::vector<std::int64_t> best(width, kNever);
  best[0] = 0;
  const std::vector<std::int64_t> never(width, kNever);
  std::vector<std::int64_t> layer(static_cast<std::size_t>(n) * levels * width);
  std::vector<const std::int64_t*> rows(static_cast<std::size_t>(n + 1) *
                                        (levels + 1));
  auto row = [&](int i, Level m) -> const std::int64_t*& {
    return rows[static_cast<std::size_t>(i) * (levels + 1) + m];
  };

  for (int g = 1; g <= journal.tile_count(); ++g) {
    const auto gi = static_cast<std::size_t>(g - 1);
    for (Level m = 0; m <= levels; ++m) row(0, m) = best.data();
    for (int i = 1; i <= n; ++i) {
      if (!journal.interested(g, i)) {
        for (Level m = 0; m <= levels; ++m) row(i, m) = row(i - 1, m);
        continue;
      }
      row(i, 0) = never.data();
      for (Level m = 1; m <= levels; ++m) {
        std::int64_t* out =
            &layer[(static_cast<std::size_t>(i - 1) * levels + (m - 1)) * width];
        std::uint8_t* decision = journal.row(g, i, m);
        std::fill(out, out + width, kNever);
        std::int64_t gain = 0;
        for (int from = i; from >= 1; --from) {
          const std::int64_t q =
              quantized(users[static_cast<std::size_t>(from - 1)], gi, m, step);
          if (q < 0) break;
          gain += q;
          const int cost = journal.cost(g, m, from);
          const std::int64_t* below = row(from - 1, m - 1);
          const auto code = static_cast<std::uint8_t>(from);
          for (auto u = static_cast<std::size_t>(gain); u < width; ++u) {
            const std::int64_t candidate = below[u - gain] + cost;
            if (candidate <= out[u]) {
              out[u] = candidate;
              decision[u] = code;
            }
          }
        }
        const std::int64_t* skip = row(i, m - 1);
        for (std::size_t u = 0; u < width; ++u) {
          if (skip[u] <= out[u]) {
            out[u] = skip[u];
            decision[u] = 0;
          }
        }
        row(i, m) = out;
      }
    }
    const std::int64_t* last = row(n, levels);
    if (last != best.data()) std::copy(last, last + width, best.begin());
  }

  std::int64_t chosen = -1;
  for (std::size_t u = width; u-- > 0;) {
    if (best[u] <= budget) {
      chosen = static_cast<std::int64_t>(u);
      break;
    }
  }
  AllocationResult result;
  if (chosen < 0) {
    result.status = AllocationStatus::kInfeasible;
    result.objective = Utility::neg_inf();
    return result;
  }

  std::int64_t u = chosen;
  int g = journal.tile_count();
  int i = n;
  Level m = levels;
  while (g >= 1) {
    if (i == 0) {
      --g;
      i = n;
      m = levels;
      continue;
    }
    if (!journal.interested(g, i)) {
      --i;
      continue;
    }
    if (m == 0) throw InternalError("approximation replay reached level 0");
    const int from = journal.decision(g, i, m, static_cast<int>(u));
    if (from == 0) {
      --m;
      continue;
    }
    for (int c = from; c <= i; ++c) {
      u -= quantized(users[static_cast<std::size_t>(c - 1)],
                     static_cast<std::size_t>(g - 1), m, step);
    }
    if (u < 0) throw InternalError("approximation replay overdrew utility");
    result.plan.add({journal.tile_id(g), m, journal.rate(from),
                     journal.cost(g, m, from), std::nullopt});
    i = from - 1;
    --m;
  }
  if (u != 0 || result.plan.total_slots > budget) {
    throw InternalError("approximation replay does not match its table");
  }
  result.plan.sort();
  result.objective = evaluate_plan(tiles, users, result.plan);
  return result;
}

}  // namespace zoomcast
