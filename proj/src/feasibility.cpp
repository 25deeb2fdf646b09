#include "zoomcast/feasibility.hpp"

#include <algorithm>
#include <string>

#include "zoomcast/errors.hpp"

namespace zoomcast {

namespace {

constexpr std::int64_t kUnreachable = -1;

Level bound_of(const LowerBoundVector& bounds, const UserRequest& user) {
  auto it = bounds.find(user.user_id);
  return it == bounds.end() ? user.guaranteed_level : it->second;
}

std::vector<UserRequest> sorted_by_rate(std::span<const UserRequest> users) {
  std::vector<UserRequest> out(users.begin(), users.end());
  std::stable_sort(out.begin(), out.end(),
                   [](const UserRequest& a, const UserRequest& b) {
                     return a.link_rate_bps < b.link_rate_bps;
                   });
  return out;
}

}  // namespace

std::vector<UserRequest> apply_bounds(std::span<const UserRequest> requests,
                                      const LowerBoundVector& bounds) {
  std::vector<UserRequest> out(requests.begin(), requests.end());
  for (UserRequest& r : out) r.guaranteed_level = bound_of(bounds, r);
  return out;
}

LowerBoundVector requested_levels(std::span<const UserRequest> requests) {
  LowerBoundVector out;
  for (const UserRequest& r : requests) out[r.user_id] = r.requested_level;
  return out;
}

std::optional<std::int64_t> min_slots_tile(const TileLadder& tile,
                                           std::span<const UserRequest> users,
                                           const LowerBoundVector& bounds,
                                           std::int64_t slot_duration_ns) {
  for (std::size_t i = 1; i < users.size(); ++i) {
    if (users[i].link_rate_bps < users[i - 1].link_rate_bps) {
      throw ContractError("min_slots_tile needs users sorted by link rate");
    }
  }
  const int levels = tile.levels();
  // need[l]: min slots over users 1..i with level l still owed to users above.
  std::vector<std::int64_t> need(levels + 1, kUnreachable);
  need[0] = 0;
  std::vector<std::int64_t> next(levels + 1);
  for (const UserRequest& user : users) {
    if (!user.interested_in(tile.tile_id)) continue;
    const Level bound = bound_of(bounds, user);
    if (bound < 1 || bound > levels) {
      throw ContractError("bound for user " + std::to_string(user.user_id) +
                          " outside [1, M]");
    }
    for (Level l = 0; l <= levels; ++l) {
      const Level pending = std::max(l, bound);
      std::int64_t best = need[pending];
      if (need[0] != kUnreachable) {
        const std::int64_t served =
            need[0] + slot_cost(tile.size(pending), user.link_rate_bps,
                                slot_duration_ns);
        if (best == kUnreachable || served < best) best = served;
      }
      next[l] = best;
    }
    need.swap(next);
  }
  if (need[0] == kUnreachable) return std::nullopt;
  return need[0];
}

bool is_feasible(std::span<const TileLadder> tiles,
                 std::span<const UserRequest> users,
                 const LowerBoundVector& bounds, const SlotBudget& budget) {
  const std::vector<UserRequest> sorted = sorted_by_rate(users);
  std::int64_t total = 0;
  for (const TileLadder& tile : tiles) {
    const auto slots =
        min_slots_tile(tile, sorted, bounds, budget.slot_duration_ns);
    if (!slots) return false;
    total += *slots;
    if (total > budget.slots_per_frame) return false;
  }
  return true;
}

BoundAdaptation adapt_lower_bounds(std::span<const TileLadder> tiles,
                                   std::span<const UserRequest> users,
                                   const SlotBudget& budget) {
  BoundAdaptation out;
  out.bounds = requested_levels(users);
  while (!is_feasible(tiles, users, out.bounds, budget)) {
    bool lowered = false;
    for (auto& [id, level] : out.bounds) {
      if (level > 1) {
        --level;
        lowered = true;
      }
    }
    if (!lowered) {
      out.status = BoundStatus::kInfeasibleAtMinimum;
      return out;
    }
    ++out.decrements;
  }
  return out;
}

}  // namespace zoomcast
