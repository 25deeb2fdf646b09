#include "zoomcast/trace_gen.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "zoomcast/errors.hpp"

namespace zoomcast {

double layout_similarity(const TileGrid& grid, const std::vector<RoiRect>& layout) {
  std::vector<UserRequest> requests;
  for (std::size_t k = 0; k < layout.size(); ++k) {
    UserRequest r;
    r.user_id = static_cast<UserId>(k + 1);
    r.roi = grid.tiles_in(layout[k]);
    normalize_roi(r.roi);
    requests.push_back(std::move(r));
  }
  return similarity(requests);
}

namespace {

struct Search {
  const TraceGenConfig& cfg;
  std::mt19937_64& rng;
  double lowest = 1.0;
  double highest = 0.0;

  int max_x() const { return cfg.grid.cols - cfg.roi_width; }
  int max_y() const { return cfg.grid.rows - cfg.roi_height; }

  RoiRect random_rect() {
    std::uniform_int_distribution<int> x(0, max_x());
    std::uniform_int_distribution<int> y(0, max_y());
    return {x(rng), y(rng), cfg.roi_width, cfg.roi_height};
  }

  double score(const std::vector<RoiRect>& layout) {
    const double s = layout_similarity(cfg.grid, layout);
    lowest = std::min(lowest, s);
    highest = std::max(highest, s);
    return s;
  }

  // Hill climb on |similarity - target| from a random start.
  std::pair<std::vector<RoiRect>, double> climb(bool clustered_start) {
    std::vector<RoiRect> layout;
    const RoiRect anchor = random_rect();
    for (int k = 0; k < cfg.users; ++k) {
      layout.push_back(clustered_start ? anchor : random_rect());
    }
    double sim = score(layout);
    double err = std::abs(sim - cfg.similarity);
    std::uniform_int_distribution<int> pick(0, cfg.users - 1);
    std::uniform_int_distribution<int> step(-1, 1);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    int stale = 0;
    for (int it = 0; it < 4000 && stale < 300 && err > cfg.tolerance / 5; ++it) {
      const int k = pick(rng);
      const RoiRect old = layout[static_cast<std::size_t>(k)];
      RoiRect moved = old;
      if (coin(rng) < 0.3) {
        moved = random_rect();
      } else if (coin(rng) < 0.2) {
        moved = layout[static_cast<std::size_t>(pick(rng))];
      } else {
        moved.x = std::clamp(old.x + step(rng), 0, max_x());
        moved.y = std::clamp(old.y + step(rng), 0, max_y());
      }
      layout[static_cast<std::size_t>(k)] = moved;
      const double next = score(layout);
      const double next_err = std::abs(next - cfg.similarity);
      stale = next_err < err ? 0 : stale + 1;
      if (next_err <= err) {
        sim = next;
        err = next_err;
      } else {
        layout[static_cast<std::size_t>(k)] = old;
      }
    }
    return {layout, sim};
  }
};

}  // namespace

std::vector<TraceEvent> generate_trace(const TraceGenConfig& cfg) {
  if (cfg.users < 1) throw ContractError("need at least one user");
  if (!(0.0 <= cfg.similarity && cfg.similarity <= 1.0)) {
    throw ContractError("similarity target must lie in [0, 1]");
  }
  if (cfg.roi_width < 1 || cfg.roi_height < 1 || cfg.roi_width > cfg.grid.cols ||
      cfg.roi_height > cfg.grid.rows) {
    throw ContractError("RoI does not fit the grid");
  }
  if (!(cfg.interval_s > 0.0) || !(cfg.duration_s > 0.0)) {
    throw ContractError("interval and duration must be positive");
  }
  std::mt19937_64 rng(cfg.seed);
  Search search{cfg, rng};
  std::vector<TraceEvent> events;
  const int intervals = static_cast<int>(std::ceil(cfg.duration_s / cfg.interval_s - 1e-9));
  for (int k = 0; k < intervals; ++k) {
    std::vector<RoiRect> best;
    double best_err = 2.0;
    for (int attempt = 0; attempt < 40; ++attempt) {
      if (best_err <= cfg.tolerance / 5 || (attempt >= 4 && best_err <= cfg.tolerance)) break;
      auto [layout, sim] = search.climb(attempt % 2 == 1);
      const double err = std::abs(sim - cfg.similarity);
      if (err < best_err) {
        best_err = err;
        best = std::move(layout);
      }
    }
    if (best_err > cfg.tolerance) {
      std::ostringstream msg;
      msg << "similarity " << cfg.similarity << " not reachable for " << cfg.users
          << " users with " << cfg.roi_width << "x" << cfg.roi_height
          << " RoIs on a " << cfg.grid.cols << "x" << cfg.grid.rows
          << " grid; layouts reached [" << search.lowest << ", " << search.highest
          << "]";
      throw ContractError(msg.str());
    }
    for (int u = 0; u < cfg.users; ++u) {
      TraceEvent ev;
      ev.time_s = k * cfg.interval_s;
      ev.user_id = u + 1;
      ev.kind = TraceKind::kRoi;
      ev.rect = best[static_cast<std::size_t>(u)];
      events.push_back(ev);
    }
  }
  return events;
}

}  // namespace zoomcast
