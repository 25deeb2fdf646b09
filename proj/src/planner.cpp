#include "zoomcast/planner.hpp"

#include <array>

#include "zoomcast/scheduler.hpp"

namespace zoomcast {

namespace {

constexpr std::array kAll = {AllocatorKind::kOptimal, AllocatorKind::kNaive,
                             AllocatorKind::kUnicast, AllocatorKind::kMulticast,
                             AllocatorKind::kApproximation};

}  // namespace

std::string_view allocator_name(AllocatorKind kind) {
  switch (kind) {
    case AllocatorKind::kOptimal: return "optimal";
    case AllocatorKind::kNaive: return "naive";
    case AllocatorKind::kUnicast: return "unicast";
    case AllocatorKind::kMulticast: return "multicast";
    case AllocatorKind::kApproximation: return "approximation";
  }
  return "?";
}

std::optional<AllocatorKind> parse_allocator(std::string_view name) {
  for (AllocatorKind k : kAll) {
    if (allocator_name(k) == name) return k;
  }
  return std::nullopt;
}

std::span<const AllocatorKind> all_allocators() { return kAll; }

EpochPlan plan_epoch(std::span<const TileLadder> tiles,
                     std::span<const UserRequest> requests,
                     const SlotBudget& budget, const PlanOptions& options) {
  const UtilityPolicy& policy = *options.policy;
  EpochPlan out;
  switch (options.allocator) {
    case AllocatorKind::kUnicast:
      out.result = adaptive_unicast(tiles, requests, budget, policy);
      return out;
    case AllocatorKind::kMulticast:
      out.result = adaptive_multicast(tiles, requests, budget, policy);
      return out;
    default:
      break;
  }

  BoundAdaptation adapted = adapt_lower_bounds(tiles, requests, budget);
  out.bounds = adapted.bounds;
  if (adapted.status == BoundStatus::kInfeasibleAtMinimum) {
    out.degraded = true;
    out.result.status = AllocationStatus::kInfeasible;
    out.result.objective = Utility::neg_inf();
    return out;
  }
  const std::vector<UserRequest> bounded = apply_bounds(requests, adapted.bounds);
  const std::vector<VirtualUser> users = cluster_users(bounded, tiles, policy);
  const int t = budget.slots_per_frame;
  const std::int64_t ns = budget.slot_duration_ns;
  switch (options.allocator) {
    case AllocatorKind::kNaive:
      out.result = multi_tile_naive(tiles, users, t, ns);
      break;
    case AllocatorKind::kApproximation:
      out.result = approximation_allocate(tiles, users, t, ns, options.approximation);
      break;
    default:
      out.result = multi_tile_optimal(tiles, users, t, ns);
      break;
  }
  attach_evaluation(out.result, tiles, bounded, EvaluationMode::kEnforceLowerBounds,
                    policy);
  return out;
}

}  // namespace zoomcast
