#pragma once

#include <cstdint>
#include <optional>
#include <span>

#include "zoomcast/model.hpp"

namespace zoomcast {

// Unicast baseline. Phase 1 sends every RoI tile of every user at level 1 at
// that user's own rate (one entry per user and tile, with `recipient` set);
// the result is kInfeasible when that alone exceeds the budget. Phase 2 walks
// users by ascending id and lifts all of a user's tiles to R_i when the extra
// slots fit. Guaranteed levels are ignored (treated as 1).
AllocationResult adaptive_unicast(
    std::span<const TileLadder> tiles, std::span<const UserRequest> requests,
    const SlotBudget& budget,
    const UtilityPolicy& policy = default_utility_policy());

// Multicast baseline. Phase 1 sends each requested tile once at level 1 at the
// slowest interested rate; phase 2 walks tiles by descending popularity
// (ties: ascending id) and lifts a tile to the highest requested level among
// its viewers, same rate, when the extra slots fit.
AllocationResult adaptive_multicast(
    std::span<const TileLadder> tiles, std::span<const UserRequest> requests,
    const SlotBudget& budget,
    const UtilityPolicy& policy = default_utility_policy());

struct ApproximationConfig {
  double epsilon = 0.2;
  // Explicit quantization step in utility units; overrides epsilon.
  std::optional<double> utility_unit;

  void validate() const;
};

// delta = epsilon * (mean over interested (tile, user) pairs of the pair's
// top utility), or the explicit unit. Never below one tick.
Utility quantization_step(std::span<const TileLadder> tiles,
                          std::span<const VirtualUser> users,
                          const ApproximationConfig& cfg);

// Utility-quantized dual of multi_tile_optimal: every virtual-user table entry
// is rounded down to a multiple of delta, the DP finds the fewest slots for
// each quantized total, and the best total that fits the budget wins. The
// reported objective is the plan's exact (unquantized) utility.
AllocationResult approximation_allocate(std::span<const TileLadder> tiles,
                                        std::span<const VirtualUser> users,
                                        int budget, std::int64_t slot_duration_ns,
                                        const ApproximationConfig& cfg = {});

}  // namespace zoomcast
