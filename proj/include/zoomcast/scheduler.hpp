#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "zoomcast/model.hpp"

namespace zoomcast {

// Argmax record of a tile-allocation DP, one byte per interested state
// (tile g, virtual user i, level m, slots t). A stored 0 means level m was not
// sent; k > 0 means level m was sent at the rate of the k-th slowest virtual
// user, which then serves users k..i.
class DecisionJournal {
 public:
  DecisionJournal() = default;
  DecisionJournal(std::span<const TileLadder> tiles,
                  std::span<const VirtualUser> users, int budget,
                  std::int64_t slot_duration_ns);

  int tile_count() const { return tile_count_; }
  int user_count() const { return user_count_; }
  int levels() const { return levels_; }
  int budget() const { return budget_; }

  bool interested(int g, int i) const {
    return interested_[index2(g, i)] != 0;
  }
  int cost(int g, Level m, int i) const { return costs_[index3(g, m, i)]; }
  std::int64_t rate(int i) const { return rates_[static_cast<std::size_t>(i - 1)]; }
  TileId tile_id(int g) const { return tile_ids_[static_cast<std::size_t>(g - 1)]; }

  std::uint8_t decision(int g, int i, Level m, int t) const {
    return decisions_[index4(g, i, m, t)];
  }
  std::uint8_t* row(int g, int i, Level m) { return &decisions_[index4(g, i, m, 0)]; }

 private:
  std::size_t index2(int g, int i) const {
    return static_cast<std::size_t>(g - 1) * (user_count_ + 1) + i;
  }
  std::size_t index3(int g, Level m, int i) const {
    return (static_cast<std::size_t>(g - 1) * (levels_ + 1) + m) *
               (user_count_ + 1) + i;
  }
  std::size_t index4(int g, int i, Level m, int t) const {
    return ((static_cast<std::size_t>(g - 1) * user_count_ + (i - 1)) * levels_ +
            (m - 1)) * (budget_ + 1) + t;
  }

  int tile_count_ = 0;
  int user_count_ = 0;
  int levels_ = 0;
  int budget_ = 0;
  std::vector<std::int64_t> rates_;
  std::vector<TileId> tile_ids_;
  std::vector<int> costs_;
  std::vector<std::uint8_t> interested_;
  std::vector<std::uint8_t> decisions_;
};

// Replays the journal from (last tile, all users, top level, start_budget)
// and returns the transmissions it chose. start_budget < 0 means the journal
// budget. Throws InternalError if the journal does not replay.
TransmissionPlan extract_schedule(const DecisionJournal& journal,
                                  int start_budget = -1);

// Optimal allocation of one tile within `slots` slots. `users` must be
// sorted by link rate ascending. budget_curve holds the optimum for every
// budget 0..slots. Objective NEG_INF means the bounds cannot be met.
AllocationResult single_tile_optimal(const TileLadder& tile,
                                     std::span<const VirtualUser> users,
                                     int slots, std::int64_t slot_duration_ns);

// Per-tile optima combined by enumerating every split of the budget.
// O(T^2 N_g) combiner; kept as the reference for multi_tile_optimal.
AllocationResult multi_tile_naive(std::span<const TileLadder> tiles,
                                  std::span<const VirtualUser> users,
                                  int budget, std::int64_t slot_duration_ns);

// Production allocator. The previous tiles' best-by-budget row is folded into
// the single-tile recursion so no budget split is enumerated: O(n^2 T M N_g).
AllocationResult multi_tile_optimal(std::span<const TileLadder> tiles,
                                    std::span<const VirtualUser> users,
                                    int budget, std::int64_t slot_duration_ns);

// Same DP as multi_tile_optimal, also handing back the decision journal.
AllocationResult multi_tile_optimal(std::span<const TileLadder> tiles,
                                    std::span<const VirtualUser> users,
                                    int budget, std::int64_t slot_duration_ns,
                                    DecisionJournal& journal);

// Exhaustive search over every set of (level, rate) transmissions per tile.
// Limited to N_g <= 3, n <= 4, M <= 3, budget <= 64; throws ContractError
// beyond that.
Utility brute_force_oracle(std::span<const TileLadder> tiles,
                           std::span<const VirtualUser> users, int budget,
                           std::int64_t slot_duration_ns);

}  // namespace zoomcast
