#pragma once

#include <cstdint>
#include <vector>

#include "zoomcast/simulator.hpp"

namespace zoomcast {

struct TraceGenConfig {
  TileGrid grid;
  int users = 8;
  double similarity = 0.5;
  double tolerance = 0.05;
  double duration_s = 20.0;
  double interval_s = 2.0;  // a fresh layout every interval
  int roi_width = 6;
  int roi_height = 3;
  std::uint64_t seed = 1;
};

// Equal-size RoI rectangles for users 1..n, re-laid out every interval, each
// layout measuring within `tolerance` of the target similarity. Throws
// ContractError naming the range reached when the target cannot be hit.
std::vector<TraceEvent> generate_trace(const TraceGenConfig& cfg);

// Similarity of one layout of same-size rectangles.
double layout_similarity(const TileGrid& grid, const std::vector<RoiRect>& layout);

}  // namespace zoomcast
