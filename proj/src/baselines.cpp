#include "zoomcast/baselines.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "zoomcast/errors.hpp"

namespace zoomcast {

namespace {

std::vector<UserRequest> with_unit_bounds(std::span<const UserRequest> requests) {
  std::vector<UserRequest> out(requests.begin(), requests.end());
  for (UserRequest& r : out) r.guaranteed_level = 1;
  return out;
}

AllocationResult infeasible() {
  AllocationResult r;
  r.status = AllocationStatus::kInfeasible;
  r.objective = Utility::neg_inf();
  return r;
}

void finish(AllocationResult& result, std::span<const TileLadder> tiles,
            std::span<const UserRequest> requests, const UtilityPolicy& policy) {
  const std::vector<UserRequest> relaxed = with_unit_bounds(requests);
  result.plan.sort();
  result.objective =
      evaluate_plan(tiles, relaxed, result.plan,
                    EvaluationMode::kEnforceLowerBounds, policy)
          .objective;
  attach_evaluation(result, tiles, relaxed, EvaluationMode::kMeasure, policy);
}

void check_inputs(std::span<const TileLadder> tiles,
                  std::span<const UserRequest> requests) {
  const int levels = validate_tiles(tiles);
  for (const UserRequest& r : requests) {
    r.validate(levels);
    for (TileId g : r.roi) {
      if (g < 1 || g > static_cast<TileId>(tiles.size())) {
        throw ContractError("user " + std::to_string(r.user_id) +
                            " references unknown tile " + std::to_string(g));
      }
    }
  }
}

}  // namespace

AllocationResult adaptive_unicast(std::span<const TileLadder> tiles,
                                  std::span<const UserRequest> requests,
                                  const SlotBudget& budget,
                                  const UtilityPolicy& policy) {
  check_inputs(tiles, requests);
  std::vector<const UserRequest*> order;
  for (const UserRequest& r : requests) order.push_back(&r);
  std::sort(order.begin(), order.end(),
            [](const UserRequest* a, const UserRequest* b) {
              return a->user_id < b->user_id;
            });

  auto cost = [&](const UserRequest& u, TileId g, Level m) {
    return slot_cost(tiles[static_cast<std::size_t>(g - 1)].size(m),
                     u.link_rate_bps, budget);
  };

  std::int64_t used = 0;
  for (const UserRequest* u : order) {
    for (TileId g : u->roi) used += cost(*u, g, 1);
  }
  if (used > budget.slots_per_frame) return infeasible();

  std::map<UserId, Level> level_of;
  for (const UserRequest* u : order) {
    level_of[u->user_id] = 1;
    if (u->requested_level == 1) continue;
    std::int64_t delta = 0;
    for (TileId g : u->roi) {
      delta += cost(*u, g, u->requested_level) - cost(*u, g, 1);
    }
    if (used + delta <= budget.slots_per_frame) {
      used += delta;
      level_of[u->user_id] = u->requested_level;
    }
  }

  AllocationResult result;
  for (const UserRequest* u : order) {
    const Level m = level_of[u->user_id];
    for (TileId g : u->roi) {
      result.plan.add({g, m, u->link_rate_bps, cost(*u, g, m), u->user_id});
    }
  }
  finish(result, tiles, requests, policy);
  return result;
}

AllocationResult adaptive_multicast(std::span<const TileLadder> tiles,
                                    std::span<const UserRequest> requests,
                                    const SlotBudget& budget,
                                    const UtilityPolicy& policy) {
  check_inputs(tiles, requests);
  struct TileDemand {
    TileId tile = 0;
    int viewers = 0;
    std::int64_t rate = 0;
    Level top = 1;
  };
  std::map<TileId, TileDemand> demand;
  for (const UserRequest& u : requests) {
    for (TileId g : u.roi) {
      TileDemand& d = demand[g];
      if (d.viewers == 0) {
        d.tile = g;
        d.rate = u.link_rate_bps;
      }
      d.viewers += 1;
      d.rate = std::min(d.rate, u.link_rate_bps);
      d.top = std::max(d.top, u.requested_level);
    }
  }

  auto cost = [&](const TileDemand& d, Level m) {
    return slot_cost(tiles[static_cast<std::size_t>(d.tile - 1)].size(m), d.rate,
                     budget);
  };

  std::int64_t used = 0;
  for (const auto& [g, d] : demand) used += cost(d, 1);
  if (used > budget.slots_per_frame) return infeasible();

  std::vector<TileDemand*> order;
  for (auto& [g, d] : demand) order.push_back(&d);
  std::stable_sort(order.begin(), order.end(),
                   [](const TileDemand* a, const TileDemand* b) {
                     return a->viewers > b->viewers;
                   });
  std::map<TileId, Level> level_of;
  for (TileDemand* d : order) {
    level_of[d->tile] = 1;
    if (d->top == 1) continue;
    const std::int64_t delta = cost(*d, d->top) - cost(*d, 1);
    if (used + delta <= budget.slots_per_frame) {
      used += delta;
      level_of[d->tile] = d->top;
    }
  }

  AllocationResult result;
  for (const auto& [g, d] : demand) {
    const Level m = level_of[g];
    result.plan.add({g, m, d.rate, cost(d, m), std::nullopt});
  }
  finish(result, tiles, requests, policy);
  return result;
}

}  // namespace zoomcast
