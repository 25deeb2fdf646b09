#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "zoomcast/model.hpp"

namespace zoomcast {

// Guaranteed level L_i per user id.
using LowerBoundVector = std::map<UserId, Level>;

// Copies `requests` with guaranteed levels taken from `bounds`.
std::vector<UserRequest> apply_bounds(std::span<const UserRequest> requests,
                                      const LowerBoundVector& bounds);

LowerBoundVector requested_levels(std::span<const UserRequest> requests);

// Minimum slots needed to deliver `tile` so that every interested user
// decodes at least its bound. `users` must be sorted by link rate ascending.
// std::nullopt when the bounds cannot be met at any cost.
std::optional<std::int64_t> min_slots_tile(const TileLadder& tile,
                                           std::span<const UserRequest> users,
                                           const LowerBoundVector& bounds,
                                           std::int64_t slot_duration_ns);

bool is_feasible(std::span<const TileLadder> tiles,
                 std::span<const UserRequest> users,
                 const LowerBoundVector& bounds, const SlotBudget& budget);

enum class BoundStatus { kFeasible, kInfeasibleAtMinimum };

struct BoundAdaptation {
  BoundStatus status = BoundStatus::kFeasible;
  // The first feasible vector; all ones when status is kInfeasibleAtMinimum.
  LowerBoundVector bounds;
  int decrements = 0;
};

// Starts from L_i = R_i and lowers every bound by one (floored at 1) until
// the per-tile minimum slot counts fit in budget.slots_per_frame.
BoundAdaptation adapt_lower_bounds(std::span<const TileLadder> tiles,
                                   std::span<const UserRequest> users,
                                   const SlotBudget& budget);

}  // namespace zoomcast
