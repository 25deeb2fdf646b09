#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <vector>

#include "zoomcast/model.hpp"

namespace zoomcast {

struct HaRraaConfig {
  double max_tolerable_loss = 0.10;       // P_MTL
  double opportunistic_increase = 0.03;   // P_ORI
  int max_backoff = 64;                   // cap on the per-rate window multiplier
};

// Per-client rate adaptation state. Windows are counted in frames.
struct RateAdaptState {
  int rate_index = 0;
  int rate_count = 1;
  int min_window = 1;            // one allocation interval
  std::vector<int> backoff;      // per rate, power of two, >= 1
  int window_fill = 0;
  int loss_count = 0;
  int probe_successes = 0;       // at any rate above the current one
  int probe_failures = 0;        // at the next rate up only
  HaRraaConfig config;

  static RateAdaptState start(int rate_count, int rate_index, int min_window,
                              HaRraaConfig config = {});

  int estimation_window() const {
    return min_window * backoff[static_cast<std::size_t>(rate_index)];
  }
};

// One estimation-window decision. A small-window loss above P_MTL drops the
// rate at once. Otherwise P > P_MTL drops the rate, and P < P_ORI raises it
// unless failed probes at the next rate say it would not hold. Every drop
// doubles the backoff of the rate dropped to; every window with P <= P_MTL
// halves the backoff of the rate below (floored at 1) instead of resetting it.
// Counters and probe tallies restart afterwards.
RateAdaptState ha_rraa_step(RateAdaptState state, double loss_rate,
                            double small_window_loss);

// Records a reception attempt of a transmission sent above the current rate.
RateAdaptState free_probe_observe(RateAdaptState state, int received_at_rate,
                                  bool success);

// Feeds one interval of per-frame observations at the current rate and runs
// ha_rraa_step when the interval itself exceeds P_MTL or the estimation
// window is full. Returns whether a decision was taken.
bool observe_interval(RateAdaptState& state, int frames, int losses);

// Per-(user, rate index) loss probabilities for the simulator.
struct LossModel {
  std::map<UserId, std::vector<double>> per_user_rate_loss;
  // Highest rate index a user can decode at all; above it loss is 1.
  std::map<UserId, int> max_rate_index;
  std::uint64_t rng_seed = 0;

  double loss(UserId user, int rate_index) const;
  // Throws ContractError for probabilities outside [0, 1] or decreasing rows.
  void validate() const;
};

// True with probability 1 - loss(user, rate_index), decided by `uniform`,
// a draw from [0, 1).
bool sample_reception(const LossModel& model, UserId user, int rate_index,
                      double uniform);
bool sample_reception(const LossModel& model, UserId user, int rate_index,
                      std::mt19937_64& rng);

}  // namespace zoomcast
