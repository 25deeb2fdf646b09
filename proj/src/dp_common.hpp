#pragma once

// Internal helpers shared by the allocation DPs.

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "zoomcast/errors.hpp"
#include "zoomcast/model.hpp"
#include "zoomcast/scheduler.hpp"

namespace zoomcast::detail {

// DP cells hold utility ticks as doubles. Tick counts stay far below 2^53 (see
// check_exact_range), so additions and comparisons are exact, and IEEE -inf
// is the absorbing NEG_INF.
inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

inline double to_cell(Utility u) {
  return u.is_neg_inf() ? kNegInf : static_cast<double>(u.ticks());
}

inline Utility from_cell(double v) {
  if (std::isinf(v)) return Utility::neg_inf();
  return Utility::from_ticks(static_cast<std::int64_t>(v));
}

inline void check_sorted(std::span<const VirtualUser> users) {
  for (std::size_t i = 1; i < users.size(); ++i) {
    if (users[i].link_rate_bps < users[i - 1].link_rate_bps) {
      throw ContractError("virtual users must be sorted by link rate");
    }
  }
  if (users.size() > 255) {
    throw ContractError("at most 255 virtual users per allocation");
  }
}

// Rejects instances whose total utility could exceed the exactly
// representable integer range of a double.
inline void check_exact_range(std::span<const TileLadder> tiles,
                              std::span<const VirtualUser> users) {
  constexpr double kLimit = 9007199254740992.0;  // 2^53
  double total = 0.0;
  for (const VirtualUser& vu : users) {
    for (const TileLadder& tile : tiles) {
      const auto g = static_cast<std::size_t>(tile.tile_id - 1);
      const Utility top = vu.table(g, tile.levels());
      if (top.is_finite()) total += static_cast<double>(top.ticks());
    }
  }
  if (total >= kLimit) throw ContractError("utility total too large");
}

inline void check_budget(int budget) {
  if (budget < 0) throw ContractError("slot budget must be non-negative");
}

// Best utility for every budget 0..T of one tile, recorded into a one-tile
// journal.
std::vector<double> solve_single_tile(const TileLadder& tile,
                                      std::span<const VirtualUser> users,
                                      int budget, DecisionJournal& journal);

}  // namespace zoomcast::detail
