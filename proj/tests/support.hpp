#pragma once

// Independent reference computations and instance generators shared by the
// unit and acceptance tests. Nothing here calls the DP code.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <vector>

#include "zoomcast/model.hpp"

namespace zt {

using namespace zoomcast;

// Slot length under which 8 Mb/s moves one byte per slot and 16 Mb/s two.
inline constexpr std::int64_t kDeskSlotNs = 1000;
inline constexpr std::int64_t kOneBytePerSlot = 8'000'000;
inline constexpr std::int64_t kTwoBytesPerSlot = 16'000'000;

inline std::vector<TileLadder> desk_tiles(int copies = 1) {
  std::vector<TileLadder> tiles;
  for (int g = 1; g <= copies; ++g) tiles.push_back({g, {4, 8}});
  return tiles;
}

inline std::vector<UserRequest> desk_users(int copies = 1, Level bound = 1) {
  std::vector<TileId> roi;
  for (int g = 1; g <= copies; ++g) roi.push_back(g);
  return {{1, kOneBytePerSlot, roi, 2, bound}, {2, kTwoBytesPerSlot, roi, 2, bound}};
}

inline const LevelWeightUtility& desk_policy() {
  static const LevelWeightUtility policy({1.0, 2.0});
  return policy;
}

struct Instance {
  std::vector<TileLadder> tiles;
  std::vector<UserRequest> requests;
  int budget = 0;
};

struct InstanceShape {
  int max_tiles = 3;
  int max_users = 4;
  int max_distinct_rates = 3;
  int max_levels = 3;
  int max_budget = 64;
  bool allow_empty_roi = true;
};

// Sizes are small byte counts with rates of 1..4 bytes per slot at
// kDeskSlotNs, so budgets up to 64 bind.
inline Instance random_instance(std::mt19937_64& rng, const InstanceShape& shape = {}) {
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  Instance inst;
  const int tiles = pick(1, shape.max_tiles);
  const int levels = pick(1, shape.max_levels);
  for (int g = 1; g <= tiles; ++g) {
    TileLadder t{g, {}};
    std::int64_t size = pick(1, 6);
    for (int m = 0; m < levels; ++m) {
      t.sizes.push_back(size);
      size += pick(1, 8);
    }
    inst.tiles.push_back(t);
  }
  std::vector<std::int64_t> rate_pool = {8'000'000, 16'000'000, 24'000'000, 32'000'000};
  std::shuffle(rate_pool.begin(), rate_pool.end(), rng);
  rate_pool.resize(static_cast<std::size_t>(pick(1, std::min(shape.max_distinct_rates, 4))));
  const int users = pick(1, shape.max_users);
  for (int u = 1; u <= users; ++u) {
    UserRequest r;
    r.user_id = u;
    r.link_rate_bps = rate_pool[static_cast<std::size_t>(pick(0, static_cast<int>(rate_pool.size()) - 1))];
    for (int g = 1; g <= tiles; ++g) {
      if (pick(0, 2) > 0) r.roi.push_back(g);
    }
    if (r.roi.empty() && !shape.allow_empty_roi) r.roi.push_back(pick(1, tiles));
    r.requested_level = pick(1, levels);
    r.guaranteed_level = pick(1, r.requested_level);
    inst.requests.push_back(r);
  }
  inst.budget = pick(0, shape.max_budget);
  return inst;
}

// Every subset of (level, distinct rate) transmissions of one tile, as plans.
inline std::vector<TransmissionPlan> all_tile_plans(const TileLadder& tile,
                                                    const std::vector<std::int64_t>& rates,
                                                    std::int64_t slot_ns) {
  const int pairs = tile.levels() * static_cast<int>(rates.size());
  std::vector<TransmissionPlan> out;
  for (unsigned mask = 0; mask < (1u << pairs); ++mask) {
    TransmissionPlan p;
    for (int k = 0; k < pairs; ++k) {
      if (!(mask & (1u << k))) continue;
      const Level m = k / static_cast<int>(rates.size()) + 1;
      const std::int64_t r = rates[static_cast<std::size_t>(k % static_cast<int>(rates.size()))];
      p.add({tile.tile_id, m, r, slot_cost(tile.size(m), r, slot_ns), std::nullopt});
    }
    out.push_back(std::move(p));
  }
  return out;
}

inline std::vector<std::int64_t> distinct_rates(const std::vector<UserRequest>& requests) {
  std::set<std::int64_t> s;
  for (const auto& r : requests) s.insert(r.link_rate_bps);
  return {s.begin(), s.end()};
}

// Fewest slots so every interested user decodes at least its bound.
inline std::optional<std::int64_t> brute_min_slots(const TileLadder& tile,
                                                   const std::vector<UserRequest>& users,
                                                   std::int64_t slot_ns) {
  std::optional<std::int64_t> best;
  for (const TransmissionPlan& p : all_tile_plans(tile, distinct_rates(users), slot_ns)) {
    bool ok = true;
    for (const UserRequest& u : users) {
      if (u.interested_in(tile.tile_id) &&
          received_level(p, tile.tile_id, u) < u.guaranteed_level) {
        ok = false;
        break;
      }
    }
    if (ok && (!best || p.total_slots < *best)) best = p.total_slots;
  }
  return best;
}

// Exhaustive optimum over raw (unclustered) users, evaluating candidate plans
// through evaluate_plan: per tile the best utility for every cost, then all
// cross-tile combinations.
inline Utility brute_objective(const Instance& inst, std::int64_t slot_ns,
                               const UtilityPolicy& policy = default_utility_policy()) {
  const std::vector<std::int64_t> rates = distinct_rates(inst.requests);
  std::vector<std::map<int, Utility>> per_tile;
  for (const TileLadder& tile : inst.tiles) {
    std::vector<UserRequest> viewers;
    for (const auto& u : inst.requests) {
      UserRequest v = u;
      v.roi.clear();
      if (u.interested_in(tile.tile_id)) v.roi.push_back(tile.tile_id);
      viewers.push_back(v);
    }
    std::map<int, Utility> best;
    for (const TransmissionPlan& p : all_tile_plans(tile, rates, slot_ns)) {
      if (p.total_slots > inst.budget) continue;
      const Utility u = evaluate_plan(inst.tiles, viewers, p,
                                      EvaluationMode::kEnforceLowerBounds, policy)
                            .objective;
      auto [it, fresh] = best.try_emplace(p.total_slots, u);
      if (!fresh && u > it->second) it->second = u;
    }
    per_tile.push_back(std::move(best));
  }
  Utility best = Utility::neg_inf();
  std::vector<std::pair<int, Utility>> acc = {{0, Utility{}}};
  for (const auto& options : per_tile) {
    std::map<int, Utility> next;
    for (const auto& [c0, u0] : acc) {
      for (const auto& [c1, u1] : options) {
        if (c0 + c1 > inst.budget) continue;
        auto [it, fresh] = next.try_emplace(c0 + c1, u0 + u1);
        if (!fresh && u0 + u1 > it->second) it->second = u0 + u1;
      }
    }
    acc.assign(next.begin(), next.end());
  }
  for (const auto& [c, u] : acc) {
    if (u > best) best = u;
  }
  return best;
}

// True when per tile at most one entry per level exists and levels rise with
// rate.
inline bool plan_is_monotone(const TransmissionPlan& plan) { return plan.is_rate_monotone(); }

}  // namespace zt
