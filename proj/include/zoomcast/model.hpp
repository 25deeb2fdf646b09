#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "zoomcast/utility.hpp"

namespace zoomcast {

using TileId = int;    // 1-based
using Level = int;     // 1-based resolution level; 0 means "nothing received"
using UserId = int;

// 802.11a PHY rates in bits/s.
inline const std::vector<std::int64_t>& ieee80211a_rates() {
  static const std::vector<std::int64_t> rates = {
      6'000'000, 9'000'000, 12'000'000, 18'000'000,
      24'000'000, 36'000'000, 48'000'000, 54'000'000};
  return rates;
}

// Average per-frame byte size of one tile at each resolution level.
struct TileLadder {
  TileId tile_id = 1;
  std::vector<std::int64_t> sizes;  // sizes[m - 1] is the size at level m

  int levels() const { return static_cast<int>(sizes.size()); }
  std::int64_t size(Level m) const;
  // Throws ContractError unless sizes are positive and strictly increasing.
  void validate() const;
};

// Checks tile ids are 1..N in order and every ladder has the same level count.
// Returns that level count (M).
int validate_tiles(std::span<const TileLadder> tiles);

struct UserRequest {
  UserId user_id = 1;
  std::int64_t link_rate_bps = 0;
  std::vector<TileId> roi;  // sorted, unique
  Level requested_level = 1;
  Level guaranteed_level = 1;

  bool interested_in(TileId tile) const;
  void validate(int max_level) const;
};

// Sorts and deduplicates an RoI tile list in place.
void normalize_roi(std::vector<TileId>& roi);

struct SlotBudget {
  int slots_per_frame = 4444;
  std::int64_t slot_duration_ns = 9000;
  double frame_rate = 25.0;

  // floor(frame interval / slot duration); 4444 for 25 fps and 9 us.
  static SlotBudget for_frame_rate(double frame_rate,
                                   std::int64_t slot_duration_ns = 9000);
};

// ceil(size_bytes * 8 / (link_rate * slot_duration)) in exact integer
// arithmetic.
int slot_cost(std::int64_t size_bytes, std::int64_t link_rate_bps,
              std::int64_t slot_duration_ns);
inline int slot_cost(std::int64_t size_bytes, std::int64_t link_rate_bps,
                     const SlotBudget& slot) {
  return slot_cost(size_bytes, link_rate_bps, slot.slot_duration_ns);
}

struct TransmissionEntry {
  TileId tile = 1;
  Level level = 1;
  std::int64_t link_rate_bps = 0;
  int slots = 0;
  // Set for unicast transmissions: only this user consumes the entry.
  std::optional<UserId> recipient;

  friend bool operator==(const TransmissionEntry&,
                         const TransmissionEntry&) = default;
};

struct TransmissionPlan {
  std::vector<TransmissionEntry> entries;
  int total_slots = 0;

  void add(TransmissionEntry entry);
  // Orders entries by (tile, level, rate, recipient).
  void sort();
  // Multicast plans only: per tile at most one entry per level and levels
  // strictly increasing with link rate.
  bool is_rate_monotone() const;
};

// Value policy for the finite branch of the utility rules. Implementations
// return u^m for 1 <= m <= requested and must be strictly increasing in m.
class UtilityPolicy {
 public:
  virtual ~UtilityPolicy() = default;
  virtual Utility finite_value(const TileLadder& tile, Level requested,
                               Level m) const = 0;
};

// u^m = s^m / s^R: proportional to tile size with one unit at the requested
// level.
class SizeProportionalUtility final : public UtilityPolicy {
 public:
  Utility finite_value(const TileLadder& tile, Level requested,
                       Level m) const override;
};

// u^m = weights[m - 1], independent of the tile. Weights must be strictly
// increasing.
class LevelWeightUtility final : public UtilityPolicy {
 public:
  explicit LevelWeightUtility(std::vector<double> weights);
  Utility finite_value(const TileLadder& tile, Level requested,
                       Level m) const override;
  const std::vector<double>& weights() const { return weights_; }

 private:
  std::vector<Utility> values_;
  std::vector<double> weights_;
};

const UtilityPolicy& default_utility_policy();

// Utility of receiving level m of a tile at one user:
//   0 when the tile is outside the RoI, NEG_INF below the guaranteed level,
//   the policy value on [L, R], and the value at R above R.
Utility utility(const TileLadder& tile, const UserRequest& user, Level m,
                const UtilityPolicy& policy = default_utility_policy());

// All users sharing one link rate, merged by summing utilities.
struct VirtualUser {
  std::int64_t link_rate_bps = 0;
  std::vector<UserId> merged_ids;
  int levels = 0;
  // Indexed by tile position (tile_id - 1).
  std::vector<std::vector<Utility>> utility_table;  // [tile][m], m in 0..M
  std::vector<Level> guaranteed_level_per_tile;     // 0: no member interested
  std::vector<int> interested_members_per_tile;

  bool interested(std::size_t tile_index) const {
    return guaranteed_level_per_tile[tile_index] > 0;
  }
  Utility table(std::size_t tile_index, Level m) const {
    return utility_table[tile_index][m];
  }
  // Table value when m meets the per-tile guarantee, NEG_INF otherwise, 0 for
  // tiles no member wants.
  Utility reward(std::size_t tile_index, Level m) const;
};

// One virtual user per distinct link rate, sorted by rate ascending.
std::vector<VirtualUser> cluster_users(
    std::span<const UserRequest> requests, std::span<const TileLadder> tiles,
    const UtilityPolicy& policy = default_utility_policy());

// One virtual user per request (no merging), sorted by rate then user id.
std::vector<VirtualUser> as_virtual_users(
    std::span<const UserRequest> requests, std::span<const TileLadder> tiles,
    const UtilityPolicy& policy = default_utility_policy());

struct PlanEvaluation {
  Utility objective;
  std::map<UserId, Utility> per_user_utility;
  // Highest received level per (tile, user); only RoI tiles are listed.
  std::map<std::pair<TileId, UserId>, Level> received_levels;
};

enum class EvaluationMode {
  // Planner semantics: a level below L_i (including nothing) is NEG_INF.
  kEnforceLowerBounds,
  // Measurement semantics: L_i is treated as 1 and a missing tile counts 0.
  kMeasure,
};

// Highest level of `tile` that `user` can decode from `plan`.
Level received_level(const TransmissionPlan& plan, TileId tile,
                     const UserRequest& user);

PlanEvaluation evaluate_plan(
    std::span<const TileLadder> tiles, std::span<const UserRequest> requests,
    const TransmissionPlan& plan,
    EvaluationMode mode = EvaluationMode::kEnforceLowerBounds,
    const UtilityPolicy& policy = default_utility_policy());

// Re-evaluates a multicast plan against virtual users.
Utility evaluate_plan(std::span<const TileLadder> tiles,
                      std::span<const VirtualUser> users,
                      const TransmissionPlan& plan);

enum class AllocationStatus { kOk, kInfeasible };

struct AllocationResult {
  AllocationStatus status = AllocationStatus::kOk;
  Utility objective;
  TransmissionPlan plan;
  std::map<UserId, Utility> per_user_utility;
  std::map<std::pair<TileId, UserId>, Level> received_levels;
  // DP allocators only: best objective for every budget 0..T.
  std::vector<Utility> budget_curve;
};

// Fills per-user utilities and received levels by re-evaluating the plan.
void attach_evaluation(AllocationResult& result,
                       std::span<const TileLadder> tiles,
                       std::span<const UserRequest> requests,
                       EvaluationMode mode,
                       const UtilityPolicy& policy = default_utility_policy());

}  // namespace zoomcast
