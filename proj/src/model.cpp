#include "zoomcast/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <tuple>

#include "zoomcast/errors.hpp"

namespace zoomcast {

std::int64_t TileLadder::size(Level m) const {
  if (m < 1 || m > levels()) {
    throw ContractError("level " + std::to_string(m) + " outside [1, " +
                        std::to_string(levels()) + "] for tile " +
                        std::to_string(tile_id));
  }
  return sizes[static_cast<std::size_t>(m - 1)];
}

void TileLadder::validate() const {
  if (sizes.empty()) {
    throw ContractError("tile " + std::to_string(tile_id) + " has no levels");
  }
  for (std::size_t m = 0; m < sizes.size(); ++m) {
    if (sizes[m] <= 0) {
      throw ContractError("tile " + std::to_string(tile_id) +
                          " has a non-positive size");
    }
    if (m > 0 && sizes[m] <= sizes[m - 1]) {
      throw ContractError("tile " + std::to_string(tile_id) +
                          " sizes are not strictly increasing");
    }
  }
}

int validate_tiles(std::span<const TileLadder> tiles) {
  if (tiles.empty()) throw ContractError("no tiles");
  const int levels = tiles.front().levels();
  for (std::size_t g = 0; g < tiles.size(); ++g) {
    tiles[g].validate();
    if (tiles[g].tile_id != static_cast<TileId>(g + 1)) {
      throw ContractError("tile ids must be 1..N in order");
    }
    if (tiles[g].levels() != levels) {
      throw ContractError("all tiles must have the same number of levels");
    }
  }
  return levels;
}

bool UserRequest::interested_in(TileId tile) const {
  return std::binary_search(roi.begin(), roi.end(), tile);
}

void UserRequest::validate(int max_level) const {
  if (link_rate_bps <= 0) {
    throw ContractError("user " + std::to_string(user_id) +
                        " has a non-positive link rate");
  }
  if (!(1 <= guaranteed_level && guaranteed_level <= requested_level &&
        requested_level <= max_level)) {
    throw ContractError("user " + std::to_string(user_id) +
                        " violates 1 <= L <= R <= M");
  }
  if (!std::is_sorted(roi.begin(), roi.end()) ||
      std::adjacent_find(roi.begin(), roi.end()) != roi.end()) {
    throw ContractError("user " + std::to_string(user_id) +
                        " RoI must be sorted and unique");
  }
}

void normalize_roi(std::vector<TileId>& roi) {
  std::sort(roi.begin(), roi.end());
  roi.erase(std::unique(roi.begin(), roi.end()), roi.end());
}

SlotBudget SlotBudget::for_frame_rate(double frame_rate,
                                      std::int64_t slot_duration_ns) {
  if (!(frame_rate > 0.0) || slot_duration_ns <= 0) {
    throw ContractError("frame rate and slot duration must be positive");
  }
  SlotBudget b;
  b.frame_rate = frame_rate;
  b.slot_duration_ns = slot_duration_ns;
  const double whole = std::round(frame_rate);
  if (whole == frame_rate) {
    b.slots_per_frame = static_cast<int>(
        1'000'000'000LL / (static_cast<std::int64_t>(whole) * slot_duration_ns));
  } else {
    b.slots_per_frame = static_cast<int>(std::floor(
        1e9L / (static_cast<long double>(frame_rate) * slot_duration_ns)));
  }
  return b;
}

int slot_cost(std::int64_t size_bytes, std::int64_t link_rate_bps,
              std::int64_t slot_duration_ns) {
  if (size_bytes <= 0 || link_rate_bps <= 0 || slot_duration_ns <= 0) {
    throw ContractError("slot_cost needs positive size, rate and slot length");
  }
  const __int128 num = static_cast<__int128>(size_bytes) * 8 * 1'000'000'000;
  const __int128 den = static_cast<__int128>(link_rate_bps) * slot_duration_ns;
  const __int128 slots = (num + den - 1) / den;
  if (slots > std::numeric_limits<int>::max()) {
    throw ContractError("slot count overflows");
  }
  return static_cast<int>(slots);
}

void TransmissionPlan::add(TransmissionEntry entry) {
  total_slots += entry.slots;
  entries.push_back(entry);
}

void TransmissionPlan::sort() {
  std::sort(entries.begin(), entries.end(),
            [](const TransmissionEntry& a, const TransmissionEntry& b) {
              return std::tuple(a.tile, a.level, a.link_rate_bps,
                                a.recipient.value_or(0)) <
                     std::tuple(b.tile, b.level, b.link_rate_bps,
                                b.recipient.value_or(0));
            });
}

bool TransmissionPlan::is_rate_monotone() const {
  std::vector<TransmissionEntry> sorted = entries;
  std::sort(sorted.begin(), sorted.end(),
            [](const TransmissionEntry& a, const TransmissionEntry& b) {
              return std::tie(a.tile, a.link_rate_bps, a.level) <
                     std::tie(b.tile, b.link_rate_bps, b.level);
            });
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    if (sorted[k].recipient) return false;
    if (k == 0 || sorted[k].tile != sorted[k - 1].tile) continue;
    if (sorted[k].link_rate_bps == sorted[k - 1].link_rate_bps) return false;
    if (sorted[k].level <= sorted[k - 1].level) return false;
  }
  return true;
}

Utility SizeProportionalUtility::finite_value(const TileLadder& tile,
                                              Level requested, Level m) const {
  const __int128 num = static_cast<__int128>(tile.size(m)) *
                       Utility::kTicksPerUnit;
  const __int128 den = tile.size(requested);
  return Utility::from_ticks(static_cast<std::int64_t>((2 * num + den) /
                                                       (2 * den)));
}

LevelWeightUtility::LevelWeightUtility(std::vector<double> weights)
    : weights_(std::move(weights)) {
  for (std::size_t m = 0; m < weights_.size(); ++m) {
    values_.push_back(Utility::from_units(weights_[m]));
    if (m > 0 && values_[m] <= values_[m - 1]) {
      throw ContractError("level weights must be strictly increasing");
    }
  }
}

Utility LevelWeightUtility::finite_value(const TileLadder&, Level,
                                         Level m) const {
  if (m < 1 || m > static_cast<Level>(values_.size())) {
    throw ContractError("no weight for level " + std::to_string(m));
  }
  return values_[static_cast<std::size_t>(m - 1)];
}

const UtilityPolicy& default_utility_policy() {
  static const SizeProportionalUtility policy;
  return policy;
}

Utility utility(const TileLadder& tile, const UserRequest& user, Level m,
                const UtilityPolicy& policy) {
  if (m < 1 || m > tile.levels()) {
    throw ContractError("level " + std::to_string(m) + " outside [1, " +
                        std::to_string(tile.levels()) + "]");
  }
  if (!user.interested_in(tile.tile_id)) return Utility{};
  if (m < user.guaranteed_level) return Utility::neg_inf();
  return policy.finite_value(tile, user.requested_level,
                             std::min(m, user.requested_level));
}

Utility VirtualUser::reward(std::size_t tile_index, Level m) const {
  const Level guaranteed = guaranteed_level_per_tile[tile_index];
  if (guaranteed == 0) return Utility{};
  if (m < guaranteed) return Utility::neg_inf();
  return utility_table[tile_index][static_cast<std::size_t>(m)];
}

namespace {

VirtualUser build_virtual_user(std::span<const UserRequest* const> members,
                               std::span<const TileLadder> tiles, int levels,
                               const UtilityPolicy& policy) {
  VirtualUser vu;
  vu.link_rate_bps = members.front()->link_rate_bps;
  vu.levels = levels;
  vu.utility_table.assign(tiles.size(),
                          std::vector<Utility>(levels + 1, Utility{}));
  vu.guaranteed_level_per_tile.assign(tiles.size(), 0);
  vu.interested_members_per_tile.assign(tiles.size(), 0);
  for (const UserRequest* member : members) {
    vu.merged_ids.push_back(member->user_id);
    for (TileId tile : member->roi) {
      const auto g = static_cast<std::size_t>(tile - 1);
      vu.guaranteed_level_per_tile[g] =
          std::max(vu.guaranteed_level_per_tile[g], member->guaranteed_level);
      vu.interested_members_per_tile[g] += 1;
      for (Level m = member->guaranteed_level; m <= levels; ++m) {
        vu.utility_table[g][m] += utility(tiles[g], *member, m, policy);
      }
    }
  }
  std::sort(vu.merged_ids.begin(), vu.merged_ids.end());
  return vu;
}

void check_requests(std::span<const UserRequest> requests,
                    std::span<const TileLadder> tiles, int levels) {
  for (const UserRequest& r : requests) {
    r.validate(levels);
    for (TileId tile : r.roi) {
      if (tile < 1 || tile > static_cast<TileId>(tiles.size())) {
        throw ContractError("user " + std::to_string(r.user_id) +
                            " references unknown tile " + std::to_string(tile));
      }
    }
  }
}

}  // namespace

std::vector<VirtualUser> cluster_users(std::span<const UserRequest> requests,
                                       std::span<const TileLadder> tiles,
                                       const UtilityPolicy& policy) {
  const int levels = validate_tiles(tiles);
  check_requests(requests, tiles, levels);
  std::map<std::int64_t, std::vector<const UserRequest*>> by_rate;
  for (const UserRequest& r : requests) by_rate[r.link_rate_bps].push_back(&r);
  std::vector<VirtualUser> out;
  out.reserve(by_rate.size());
  for (const auto& [rate, members] : by_rate) {
    out.push_back(build_virtual_user(members, tiles, levels, policy));
  }
  return out;
}

std::vector<VirtualUser> as_virtual_users(std::span<const UserRequest> requests,
                                          std::span<const TileLadder> tiles,
                                          const UtilityPolicy& policy) {
  const int levels = validate_tiles(tiles);
  check_requests(requests, tiles, levels);
  std::vector<const UserRequest*> order;
  for (const UserRequest& r : requests) order.push_back(&r);
  std::stable_sort(order.begin(), order.end(),
                   [](const UserRequest* a, const UserRequest* b) {
                     return std::tie(a->link_rate_bps, a->user_id) <
                            std::tie(b->link_rate_bps, b->user_id);
                   });
  std::vector<VirtualUser> out;
  for (const UserRequest* r : order) {
    const UserRequest* one[] = {r};
    out.push_back(build_virtual_user(one, tiles, levels, policy));
  }
  return out;
}

Level received_level(const TransmissionPlan& plan, TileId tile,
                     const UserRequest& user) {
  Level best = 0;
  for (const TransmissionEntry& e : plan.entries) {
    if (e.tile != tile) continue;
    const bool receivable = e.recipient ? *e.recipient == user.user_id
                                        : e.link_rate_bps <= user.link_rate_bps;
    if (receivable) best = std::max(best, e.level);
  }
  return best;
}

PlanEvaluation evaluate_plan(std::span<const TileLadder> tiles,
                             std::span<const UserRequest> requests,
                             const TransmissionPlan& plan, EvaluationMode mode,
                             const UtilityPolicy& policy) {
  std::map<TileId, std::vector<const TransmissionEntry*>> by_tile;
  for (const TransmissionEntry& e : plan.entries) by_tile[e.tile].push_back(&e);

  PlanEvaluation out;
  for (const UserRequest& user : requests) {
    UserRequest measured = user;
    if (mode == EvaluationMode::kMeasure) measured.guaranteed_level = 1;
    Utility total;
    for (TileId tile : user.roi) {
      Level best = 0;
      if (auto it = by_tile.find(tile); it != by_tile.end()) {
        for (const TransmissionEntry* e : it->second) {
          const bool receivable = e->recipient
                                      ? *e->recipient == user.user_id
                                      : e->link_rate_bps <= user.link_rate_bps;
          if (receivable) best = std::max(best, e->level);
        }
      }
      out.received_levels[{tile, user.user_id}] = best;
      const TileLadder& ladder = tiles[static_cast<std::size_t>(tile - 1)];
      if (best == 0) {
        if (mode == EvaluationMode::kEnforceLowerBounds) {
          total = Utility::neg_inf();
        }
      } else {
        total += utility(ladder, measured, best, policy);
      }
    }
    out.per_user_utility[user.user_id] = total;
    out.objective += total;
  }
  return out;
}

Utility evaluate_plan(std::span<const TileLadder> tiles,
                      std::span<const VirtualUser> users,
                      const TransmissionPlan& plan) {
  Utility total;
  for (const VirtualUser& vu : users) {
    for (std::size_t g = 0; g < tiles.size(); ++g) {
      if (!vu.interested(g)) continue;
      Level best = 0;
      for (const TransmissionEntry& e : plan.entries) {
        if (e.tile == tiles[g].tile_id && !e.recipient &&
            e.link_rate_bps <= vu.link_rate_bps) {
          best = std::max(best, e.level);
        }
      }
      total += vu.reward(g, best);
    }
  }
  return total;
}

void attach_evaluation(AllocationResult& result,
                       std::span<const TileLadder> tiles,
                       std::span<const UserRequest> requests,
                       EvaluationMode mode, const UtilityPolicy& policy) {
  PlanEvaluation eval = evaluate_plan(tiles, requests, result.plan, mode, policy);
  result.per_user_utility = std::move(eval.per_user_utility);
  result.received_levels = std::move(eval.received_levels);
}

}  // namespace zoomcast
