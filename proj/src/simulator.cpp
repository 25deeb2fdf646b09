#include "zoomcast/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "zoomcast/errors.hpp"

namespace zoomcast {

std::vector<TileId> TileGrid::tiles_in(const RoiRect& rect) const {
  if (rect.width < 1 || rect.height < 1 || rect.x < 0 || rect.y < 0 ||
      rect.x + rect.width > cols || rect.y + rect.height > rows) {
    throw ContractError("RoI rectangle leaves the " + std::to_string(cols) + "x" +
                        std::to_string(rows) + " grid");
  }
  std::vector<TileId> out;
  for (int y = rect.y; y < rect.y + rect.height; ++y) {
    for (int x = rect.x; x < rect.x + rect.width; ++x) out.push_back(tile_at(x, y));
  }
  return out;
}

std::vector<double> default_frame_profile(int gop_length) {
  std::vector<double> w;
  for (int f = 0; f < gop_length; ++f) {
    w.push_back(f == 0 ? 4.0 : (f % 3 == 0 ? 2.0 : 1.0));
  }
  return w;
}

std::vector<std::int64_t> proportional_split(std::int64_t total,
                                             std::span<const double> weights) {
  if (weights.empty() || total < 0) {
    throw ContractError("split needs weights and a non-negative total");
  }
  const double sum = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (!(sum > 0.0)) throw ContractError("split weights must be positive");
  std::vector<std::int64_t> parts(weights.size());
  std::vector<std::pair<double, std::size_t>> rest;
  std::int64_t given = 0;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    if (!(weights[k] > 0.0)) throw ContractError("split weights must be positive");
    const double exact = static_cast<double>(total) * weights[k] / sum;
    parts[k] = static_cast<std::int64_t>(std::floor(exact));
    given += parts[k];
    rest.emplace_back(exact - static_cast<double>(parts[k]), k);
  }
  std::stable_sort(rest.begin(), rest.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t k = 0; given < total; ++k, ++given) {
    parts[rest[k % rest.size()].second] += 1;
  }
  return parts;
}

int Scenario::frames_per_epoch() const {
  return static_cast<int>(std::llround(epoch_s * slot.frame_rate));
}

int Scenario::epochs() const {
  return static_cast<int>(std::ceil(duration_s / epoch_s - 1e-9));
}

std::vector<double> Scenario::gop_weights() const {
  return frame_profile.empty() ? default_frame_profile(gop_length) : frame_profile;
}

int Scenario::rate_index(std::int64_t rate_bps) const {
  auto it = std::find(rate_set.begin(), rate_set.end(), rate_bps);
  if (it == rate_set.end()) {
    throw ContractError("rate " + std::to_string(rate_bps) +
                        " b/s is not in the rate set");
  }
  return static_cast<int>(it - rate_set.begin());
}

void Scenario::validate() const {
  if (rate_set.empty() || !std::is_sorted(rate_set.begin(), rate_set.end()) ||
      std::adjacent_find(rate_set.begin(), rate_set.end()) != rate_set.end()) {
    throw ContractError("rate set must be non-empty and strictly increasing");
  }
  if (grid.cols < 1 || grid.rows < 1) throw ContractError("empty tile grid");
  if (static_cast<int>(ladders.size()) != grid.tile_count()) {
    throw ContractError("ladder count does not match the tile grid");
  }
  const int levels = validate_tiles(ladders);
  if (!level_info.empty() && static_cast<int>(level_info.size()) != levels) {
    throw ContractError("level descriptions do not match the ladder");
  }
  if (slot.slots_per_frame < 0 || slot.slot_duration_ns <= 0 ||
      !(slot.frame_rate > 0.0)) {
    throw ContractError("invalid slot budget");
  }
  if (!(epoch_s > 0.0) || !(duration_s > 0.0)) {
    throw ContractError("epoch and duration must be positive");
  }
  const double frames = epoch_s * slot.frame_rate;
  if (std::abs(frames - std::round(frames)) > 1e-9 || frames < 1) {
    throw ContractError("an epoch must hold a whole number of frames");
  }
  if (gop_length < 1 || frames_per_epoch() % gop_length != 0) {
    throw ContractError("frames per epoch must be a multiple of the GOP length");
  }
  if (!frame_profile.empty() &&
      static_cast<int>(frame_profile.size()) != gop_length) {
    throw ContractError("frame profile needs one weight per GOP frame");
  }
  for (double w : frame_profile) {
    if (!(w > 0.0)) throw ContractError("frame weights must be positive");
  }
  approximation.validate();
  loss.validate();
  std::vector<UserId> ids;
  for (const UserRequest& u : users) {
    if (u.requested_level < 1 || u.requested_level > levels) {
      throw ContractError("user " + std::to_string(u.user_id) +
                          " requests a level outside the ladder");
    }
    rate_index(u.link_rate_bps);
    for (TileId g : u.roi) {
      if (g < 1 || g > grid.tile_count()) {
        throw ContractError("user " + std::to_string(u.user_id) +
                            " references unknown tile " + std::to_string(g));
      }
    }
    ids.push_back(u.user_id);
  }
  std::sort(ids.begin(), ids.end());
  if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) {
    throw ContractError("duplicate user id");
  }
  double last = 0.0;
  for (const TraceEvent& ev : trace) {
    if (ev.time_s < last) throw ContractError("trace times must not decrease");
    last = ev.time_s;
    if (!std::binary_search(ids.begin(), ids.end(), ev.user_id)) {
      throw ContractError("trace names unknown user " + std::to_string(ev.user_id));
    }
    if (ev.kind == TraceKind::kRoi) grid.tiles_in(ev.rect);
    if (ev.kind == TraceKind::kZoom && (ev.level < 1 || ev.level > levels)) {
      throw ContractError("trace zooms to a level outside the ladder");
    }
  }
}

namespace {

struct ClientState {
  UserRequest request;
  RateAdaptState rate;
};

std::mt19937_64 stream(std::uint64_t seed, int epoch, UserId user, int tag) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(epoch),
                    static_cast<std::uint32_t>(user),
                    static_cast<std::uint32_t>(tag)};
  return std::mt19937_64(seq);
}

void apply_event(const Scenario& sc, const TraceEvent& ev, ClientState& client,
                 LossModel& loss) {
  switch (ev.kind) {
    case TraceKind::kRoi:
      client.request.roi = sc.grid.tiles_in(ev.rect);
      normalize_roi(client.request.roi);
      break;
    case TraceKind::kZoom:
      client.request.requested_level = ev.level;
      break;
    case TraceKind::kChannel:
      loss.per_user_rate_loss[ev.user_id] = ev.channel;
      break;
  }
}

}  // namespace

std::vector<EpochReport> run_simulation(const Scenario& sc) {
  sc.validate();
  const int levels = sc.ladders.front().levels();
  const int frames = sc.frames_per_epoch();
  const int gops = frames / sc.gop_length;
  const std::vector<double> weights = sc.gop_weights();
  const UtilityPolicy& policy = sc.utility_policy();
  LossModel loss = sc.loss;

  std::vector<ClientState> clients;
  for (const UserRequest& u : sc.users) {
    ClientState c;
    c.request = u;
    normalize_roi(c.request.roi);
    c.rate = RateAdaptState::start(static_cast<int>(sc.rate_set.size()),
                                   sc.rate_index(u.link_rate_bps), frames,
                                   sc.rate_control);
    clients.push_back(std::move(c));
  }
  std::sort(clients.begin(), clients.end(), [](const auto& a, const auto& b) {
    return a.request.user_id < b.request.user_id;
  });
  auto client_of = [&](UserId id) -> ClientState& {
    return *std::find_if(clients.begin(), clients.end(), [&](const auto& c) {
      return c.request.user_id == id;
    });
  };

  PlanOptions options;
  options.allocator = sc.allocator;
  options.approximation = sc.approximation;
  options.policy = &policy;

  std::vector<EpochReport> reports;
  std::size_t next_event = 0;
  for (int e = 0; e < sc.epochs(); ++e) {
    const double now = e * sc.epoch_s;
    while (next_event < sc.trace.size() &&
           sc.trace[next_event].time_s <= now + 1e-9) {
      const TraceEvent& ev = sc.trace[next_event++];
      apply_event(sc, ev, client_of(ev.user_id), loss);
    }

    EpochReport rep;
    rep.epoch_index = e;
    rep.allocator = sc.allocator;
    rep.seed = sc.seed;
    rep.gops = gops;
    rep.slot_budget = sc.slot.slots_per_frame;

    std::vector<UserRequest> requests;
    for (ClientState& c : clients) {
      c.request.link_rate_bps =
          sc.rate_set[static_cast<std::size_t>(c.rate.rate_index)];
      c.request.guaranteed_level = c.request.requested_level;
      rep.rate_index[c.request.user_id] = c.rate.rate_index;
      if (!c.request.roi.empty()) requests.push_back(c.request);
    }

    if (!requests.empty()) {
      rep.similarity = similarity(requests);
      EpochPlan planned = plan_epoch(sc.ladders, requests, sc.slot, options);
      rep.status = planned.result.status;
      rep.degraded = planned.degraded;
      rep.planned_objective = planned.result.objective;
      rep.plan = std::move(planned.result.plan);
      rep.bounds = std::move(planned.bounds);
    }
    rep.slots_used = rep.plan.total_slots;
    rep.frame_budgets = proportional_split(
        static_cast<std::int64_t>(sc.slot.slots_per_frame) * sc.gop_length, weights);
    rep.frame_usage = proportional_split(
        static_cast<std::int64_t>(rep.slots_used) * sc.gop_length, weights);
    // Move any slot that overshoots its frame's share to frames with room.
    for (std::size_t f = 0; f < weights.size(); ++f) {
      while (rep.frame_usage[f] > rep.frame_budgets[f]) {
        auto room = std::find_if(
            rep.frame_usage.begin(), rep.frame_usage.end(), [&](const auto& u) {
              const auto k = static_cast<std::size_t>(&u - rep.frame_usage.data());
              return u < rep.frame_budgets[k];
            });
        if (room == rep.frame_usage.end()) {
          throw InternalError("plan exceeds the GOP slot budget");
        }
        --rep.frame_usage[f];
        ++*room;
      }
    }

    std::map<TileId, std::vector<const TransmissionEntry*>> by_tile;
    for (const TransmissionEntry& entry : rep.plan.entries) {
      by_tile[entry.tile].push_back(&entry);
    }

    double goodput_sum = 0.0;
    for (ClientState& c : clients) {
      const UserRequest& req = c.request;
      const UserId id = req.user_id;
      UserRequest measured = req;
      measured.guaranteed_level = 1;
      std::mt19937_64 rx = stream(sc.seed, e, id, 1);
      std::uniform_real_distribution<double> uniform(0.0, 1.0);
      const std::size_t per_gop =
          static_cast<std::size_t>(sc.ladders.size()) * levels;
      std::vector<double> draws(per_gop * gops);
      for (double& d : draws) d = uniform(rx);

      std::int64_t ticks = 0;
      double bits = 0.0;
      for (int gop = 0; gop < gops; ++gop) {
        for (TileId g : req.roi) {
          Level best = 0;
          auto it = by_tile.find(g);
          if (it != by_tile.end()) {
            for (const TransmissionEntry* entry : it->second) {
              if (entry->recipient && *entry->recipient != id) continue;
              const int k = sc.rate_index(entry->link_rate_bps);
              const double u =
                  draws[gop * per_gop +
                        static_cast<std::size_t>(g - 1) * levels + (entry->level - 1)];
              const bool ok = sample_reception(loss, id, k, u);
              if (entry->link_rate_bps > req.link_rate_bps) {
                if (sc.adapt_rates && !entry->recipient) {
                  c.rate = free_probe_observe(c.rate, k, ok);
                }
                continue;
              }
              if (ok) best = std::max(best, entry->level);
            }
          }
          if (gop == gops - 1) rep.reception_bitmap[{id, g}] = best;
          if (best == 0) continue;
          const TileLadder& tile = sc.ladders[static_cast<std::size_t>(g - 1)];
          ticks += utility(tile, measured, best, policy).ticks();
          bits += 8.0 * static_cast<double>(tile.size(best)) * sc.gop_length;
        }
      }
      rep.realized_ticks += ticks;
      const double mean_units =
          static_cast<double>(ticks) / gops / Utility::kTicksPerUnit;
      rep.realized_utility[id] = mean_units;
      rep.total_realized += mean_units;
      rep.goodput_bps[id] = bits / sc.epoch_s;
      goodput_sum += bits / sc.epoch_s;

      if (sc.adapt_rates) {
        std::mt19937_64 fb = stream(sc.seed, e, id, 2);
        int lost = 0;
        for (int f = 0; f < frames; ++f) {
          if (!sample_reception(loss, id, c.rate.rate_index, fb)) ++lost;
        }
        observe_interval(c.rate, frames, lost);
      }
    }
    rep.mean_goodput_bps = clients.empty() ? 0.0 : goodput_sum / clients.size();
    reports.push_back(std::move(rep));
  }
  return reports;
}

}  // namespace zoomcast
