#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "zoomcast/baselines.hpp"
#include "zoomcast/feasibility.hpp"
#include "zoomcast/model.hpp"

namespace zoomcast {

enum class AllocatorKind { kOptimal, kNaive, kUnicast, kMulticast, kApproximation };

std::string_view allocator_name(AllocatorKind kind);
std::optional<AllocatorKind> parse_allocator(std::string_view name);
std::span<const AllocatorKind> all_allocators();

struct PlanOptions {
  AllocatorKind allocator = AllocatorKind::kOptimal;
  ApproximationConfig approximation;
  const UtilityPolicy* policy = &default_utility_policy();
};

struct EpochPlan {
  AllocationResult result;
  // Bounds the DP allocators planned with; empty for the baselines.
  LowerBoundVector bounds;
  // Even L_i = 1 for everyone does not fit the budget; nothing is sent.
  bool degraded = false;
};

// One allocation round. The DP allocators (optimal, naive, approximation)
// first adapt lower bounds and then plan over virtual users; the baselines
// plan over raw requests with every L_i taken as 1. per_user_utility and
// received_levels are filled for every allocator. Users with an empty RoI
// must be filtered out by the caller.
EpochPlan plan_epoch(std::span<const TileLadder> tiles,
                     std::span<const UserRequest> requests,
                     const SlotBudget& budget, const PlanOptions& options = {});

}  // namespace zoomcast
