#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "zoomcast/channel.hpp"
#include "zoomcast/model.hpp"
#include "zoomcast/planner.hpp"

namespace zoomcast {

struct RoiRect {
  int x = 0;
  int y = 0;
  int width = 1;
  int height = 1;

  friend bool operator==(const RoiRect&, const RoiRect&) = default;
};

// Row-major tile grid; tile ids run 1..cols*rows from the top-left corner.
struct TileGrid {
  int cols = 16;
  int rows = 9;

  int tile_count() const { return cols * rows; }
  TileId tile_at(int x, int y) const { return y * cols + x + 1; }
  // Throws ContractError when the rectangle leaves the grid or is empty.
  std::vector<TileId> tiles_in(const RoiRect& rect) const;

  friend bool operator==(const TileGrid&, const TileGrid&) = default;
};

enum class TraceKind { kRoi, kZoom, kChannel };

struct TraceEvent {
  double time_s = 0.0;
  UserId user_id = 1;
  TraceKind kind = TraceKind::kRoi;
  RoiRect rect;                  // kRoi
  Level level = 1;               // kZoom: new requested level
  std::vector<double> channel;   // kChannel: new per-rate loss row

  friend bool operator==(const TraceEvent&, const TraceEvent&) = default;
};

struct LevelInfo {
  int width = 0;
  int height = 0;

  friend bool operator==(const LevelInfo&, const LevelInfo&) = default;
};

struct Scenario {
  TileGrid grid;
  std::vector<std::int64_t> rate_set = ieee80211a_rates();
  SlotBudget slot;
  std::vector<LevelInfo> level_info;
  std::vector<TileLadder> ladders;
  std::vector<UserRequest> users;   // initial state; guaranteed levels unused
  LossModel loss;
  double epoch_s = 2.0;
  double duration_s = 20.0;
  int gop_length = 10;
  std::vector<double> frame_profile;  // empty: default I/P/B weights
  std::vector<TraceEvent> trace;
  AllocatorKind allocator = AllocatorKind::kOptimal;
  ApproximationConfig approximation;
  std::uint64_t seed = 1;
  bool adapt_rates = true;
  HaRraaConfig rate_control;
  std::shared_ptr<const UtilityPolicy> policy;  // null: size-proportional

  const UtilityPolicy& utility_policy() const {
    return policy ? *policy : default_utility_policy();
  }
  int frames_per_epoch() const;
  int epochs() const;
  std::vector<double> gop_weights() const;
  int rate_index(std::int64_t rate_bps) const;
  // Throws ContractError on any inconsistency.
  void validate() const;
};

// I frame 4, every third frame P (2), the rest B (1).
std::vector<double> default_frame_profile(int gop_length);

// Splits `total` into integer parts proportional to `weights` by largest
// remainder (ties to the earlier position). Parts sum to `total` exactly.
std::vector<std::int64_t> proportional_split(std::int64_t total,
                                             std::span<const double> weights);

struct EpochReport {
  int epoch_index = 0;
  AllocatorKind allocator = AllocatorKind::kOptimal;
  std::uint64_t seed = 0;
  AllocationStatus status = AllocationStatus::kOk;
  bool degraded = false;
  Utility planned_objective;
  TransmissionPlan plan;
  LowerBoundVector bounds;

  // Mean per-GOP utility measured at the receivers (L_i read as 1).
  std::map<UserId, double> realized_utility;
  double total_realized = 0.0;
  // Exact sum of measured ticks over users and GOPs.
  std::int64_t realized_ticks = 0;
  int gops = 0;

  std::map<UserId, double> goodput_bps;
  double mean_goodput_bps = 0.0;
  std::map<UserId, int> rate_index;
  // Highest level decoded per (user, tile) in the epoch's last GOP.
  std::map<std::pair<UserId, TileId>, Level> reception_bitmap;

  int slots_used = 0;     // per frame
  int slot_budget = 0;    // per frame
  std::vector<std::int64_t> frame_budgets;  // per frame of one GOP
  std::vector<std::int64_t> frame_usage;
  double similarity = 0.0;
};

std::vector<EpochReport> run_simulation(const Scenario& scenario);

// Mean over users with a non-empty RoI of the overlap degree
// sum(p_g over shared RoI tiles) / |G(i)|, where p_g is the fraction of users
// interested in tile g. Throws ContractError if every RoI is empty.
double similarity(std::span<const UserRequest> requests);

struct GoodputSummary {
  std::map<UserId, double> per_user_bps;
  double average_bps = 0.0;
};

// Time-weighted over the whole report stream.
GoodputSummary goodput(std::span<const EpochReport> reports, double epoch_s);

// Population standard deviation.
double fairness(std::span<const double> values);
double fairness(const EpochReport& report);

}  // namespace zoomcast
