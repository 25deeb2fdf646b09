#include "zoomcast/channel.hpp"

#include <algorithm>
#include <string>

#include "zoomcast/errors.hpp"

namespace zoomcast {

RateAdaptState RateAdaptState::start(int rate_count, int rate_index,
                                     int min_window, HaRraaConfig config) {
  if (rate_count < 1 || rate_index < 0 || rate_index >= rate_count) {
    throw ContractError("rate index outside the rate set");
  }
  if (min_window < 1) throw ContractError("minimum window must be positive");
  if (!(config.opportunistic_increase < config.max_tolerable_loss)) {
    throw ContractError("P_ORI must be below P_MTL");
  }
  if (config.max_backoff < 1) throw ContractError("backoff cap must be >= 1");
  RateAdaptState s;
  s.rate_index = rate_index;
  s.rate_count = rate_count;
  s.min_window = min_window;
  s.backoff.assign(static_cast<std::size_t>(rate_count), 1);
  s.config = config;
  return s;
}

namespace {

void drop_rate(RateAdaptState& s) {
  s.rate_index = std::max(0, s.rate_index - 1);
  int& b = s.backoff[static_cast<std::size_t>(s.rate_index)];
  b = std::min(b * 2, s.config.max_backoff);
}

void relax_lower_backoff(RateAdaptState& s) {
  if (s.rate_index == 0) return;
  int& b = s.backoff[static_cast<std::size_t>(s.rate_index - 1)];
  b = std::max(1, b / 2);
}

void restart_window(RateAdaptState& s) {
  s.window_fill = 0;
  s.loss_count = 0;
  s.probe_successes = 0;
  s.probe_failures = 0;
}

bool probes_forbid_increase(const RateAdaptState& s) {
  if (s.probe_failures == 0) return false;
  const double failed = static_cast<double>(s.probe_failures) /
                        (s.probe_failures + s.probe_successes);
  return failed > s.config.max_tolerable_loss;
}

}  // namespace

RateAdaptState ha_rraa_step(RateAdaptState state, double loss_rate,
                            double small_window_loss) {
  if (!(0.0 <= loss_rate && loss_rate <= 1.0) ||
      !(0.0 <= small_window_loss && small_window_loss <= 1.0)) {
    throw ContractError("loss rates must lie in [0, 1]");
  }
  const HaRraaConfig& c = state.config;
  if (small_window_loss > c.max_tolerable_loss ||
      loss_rate > c.max_tolerable_loss) {
    drop_rate(state);
  } else {
    relax_lower_backoff(state);
    if (loss_rate < c.opportunistic_increase && !probes_forbid_increase(state)) {
      state.rate_index = std::min(state.rate_count - 1, state.rate_index + 1);
    }
  }
  restart_window(state);
  return state;
}

RateAdaptState free_probe_observe(RateAdaptState state, int received_at_rate,
                                  bool success) {
  if (received_at_rate <= state.rate_index ||
      received_at_rate >= state.rate_count) {
    throw ContractError("probe rate must be above the current rate");
  }
  if (success) {
    ++state.probe_successes;
  } else if (received_at_rate == state.rate_index + 1) {
    ++state.probe_failures;
  }
  return state;
}

bool observe_interval(RateAdaptState& state, int frames, int losses) {
  if (frames <= 0 || losses < 0 || losses > frames) {
    throw ContractError("interval needs frames > 0 and 0 <= losses <= frames");
  }
  state.window_fill += frames;
  state.loss_count += losses;
  const double small = static_cast<double>(losses) / frames;
  if (small <= state.config.max_tolerable_loss &&
      state.window_fill < state.estimation_window()) {
    return false;
  }
  const double p = static_cast<double>(state.loss_count) / state.window_fill;
  state = ha_rraa_step(state, p, small);
  return true;
}

double LossModel::loss(UserId user, int rate_index) const {
  if (auto cap = max_rate_index.find(user);
      cap != max_rate_index.end() && rate_index > cap->second) {
    return 1.0;
  }
  auto it = per_user_rate_loss.find(user);
  if (it == per_user_rate_loss.end() || it->second.empty()) return 0.0;
  const auto& row = it->second;
  return row[static_cast<std::size_t>(
      std::clamp(rate_index, 0, static_cast<int>(row.size()) - 1))];
}

void LossModel::validate() const {
  for (const auto& [user, row] : per_user_rate_loss) {
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (!(0.0 <= row[k] && row[k] <= 1.0)) {
        throw ContractError("user " + std::to_string(user) +
                            " has a loss probability outside [0, 1]");
      }
      if (k > 0 && row[k] < row[k - 1]) {
        throw ContractError("user " + std::to_string(user) +
                            " loss row decreases with rate");
      }
    }
  }
}

bool sample_reception(const LossModel& model, UserId user, int rate_index,
                      double uniform) {
  return uniform >= model.loss(user, rate_index);
}

bool sample_reception(const LossModel& model, UserId user, int rate_index,
                      std::mt19937_64& rng) {
  return sample_reception(model, user, rate_index,
                          std::uniform_real_distribution<double>(0.0, 1.0)(rng));
}

}  // namespace zoomcast
