#include <algorithm>
#include <map>

#include "dp_common.hpp"
#include "zoomcast/scheduler.hpp"

namespace zoomcast {

namespace {

struct Option {
  int cost = 0;
  Utility value;
};

// Cheapest-first options of one tile, each strictly better than every cheaper
// one. The empty transmission set is always first.
std::vector<Option> tile_frontier(const TileLadder& tile,
                                  std::span<const VirtualUser> users, int budget,
                                  std::int64_t slot_duration_ns) {
  const int n = static_cast<int>(users.size());
  const int levels = tile.levels();
  const int pairs = n * levels;
  const auto g = static_cast<std::size_t>(tile.tile_id - 1);
  std::map<int, Utility> best_at_cost;
  for (unsigned mask = 0; mask < (1u << pairs); ++mask) {
    int cost = 0;
    std::vector<Level> got(static_cast<std::size_t>(n), 0);
    for (int p = 0; p < pairs; ++p) {
      if (!(mask & (1u << p))) continue;
      const Level m = p / n + 1;
      const auto sender = static_cast<std::size_t>(p % n);
      cost += slot_cost(tile.size(m), users[sender].link_rate_bps, slot_duration_ns);
      for (std::size_t c = 0; c < users.size(); ++c) {
        if (users[sender].link_rate_bps <= users[c].link_rate_bps) {
          got[c] = std::max(got[c], m);
        }
      }
    }
    if (cost > budget) continue;
    Utility value;
    for (std::size_t c = 0; c < users.size(); ++c) value += users[c].reward(g, got[c]);
    auto [it, fresh] = best_at_cost.try_emplace(cost, value);
    if (!fresh && value > it->second) it->second = value;
  }
  std::vector<Option> frontier;
  for (const auto& [cost, value] : best_at_cost) {
    if (frontier.empty() || value > frontier.back().value) {
      frontier.push_back({cost, value});
    }
  }
  return frontier;
}

void search(const std::vector<std::vector<Option>>& frontiers, std::size_t g,
            int remaining, Utility so_far, Utility& best) {
  if (g == frontiers.size()) {
    if (so_far > best) best = so_far;
    return;
  }
  for (const Option& o : frontiers[g]) {
    if (o.cost > remaining) break;
    search(frontiers, g + 1, remaining - o.cost, so_far + o.value, best);
  }
}

}  // namespace

Utility brute_force_oracle(std::span<const TileLadder> tiles,
                           std::span<const VirtualUser> users, int budget,
                           std::int64_t slot_duration_ns) {
  const int levels = validate_tiles(tiles);
  detail::check_budget(budget);
  if (tiles.size() > 3 || users.size() > 4 || levels > 3 || budget > 64) {
    throw ContractError("instance too large for the exhaustive oracle");
  }
  std::vector<std::vector<Option>> frontiers;
  for (const TileLadder& tile : tiles) {
    frontiers.push_back(tile_frontier(tile, users, budget, slot_duration_ns));
  }
  Utility best = Utility::neg_inf();
  search(frontiers, 0, budget, Utility{}, best);
  return best;
}

}  // namespace zoomcast
