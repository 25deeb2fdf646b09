#include <doctest.h>

#include <random>

#include "zoomcast/channel.hpp"
#include "zoomcast/errors.hpp"

using namespace zoomcast;

namespace {

RateAdaptState fresh(int index = 3) { return RateAdaptState::start(8, index, 50); }

// Runs `windows` intervals of `frames` against a stationary per-rate loss row
// and returns the rate index after each one.
std::vector<int> run_stationary(const std::vector<double>& loss, int start,
                                int windows, std::uint64_t seed, bool probes) {
  const int frames = 50;
  RateAdaptState s = RateAdaptState::start(static_cast<int>(loss.size()), start, frames);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<int> trace;
  for (int w = 0; w < windows; ++w) {
    int losses = 0;
    for (int f = 0; f < frames; ++f) {
      if (u(rng) < loss[static_cast<std::size_t>(s.rate_index)]) ++losses;
      if (probes && s.rate_index + 1 < s.rate_count) {
        s = free_probe_observe(s, s.rate_index + 1,
                               u(rng) >= loss[static_cast<std::size_t>(s.rate_index + 1)]);
      }
    }
    observe_interval(s, frames, losses);
    trace.push_back(s.rate_index);
  }
  return trace;
}

}  // namespace

TEST_CASE("threshold behaviour") {
  SUBCASE("loss above MTL drops the rate and doubles its backoff") {
    const RateAdaptState s = ha_rraa_step(fresh(), 0.12, 0.0);
    CHECK(s.rate_index == 2);
    CHECK(s.backoff[2] == 2);
    CHECK(s.estimation_window() == 100);
  }
  SUBCASE("loss below ORI raises the rate") {
    CHECK(ha_rraa_step(fresh(), 0.02, 0.0).rate_index == 4);
  }
  SUBCASE("in between holds and halves the lower backoff") {
    RateAdaptState s = fresh();
    s.backoff[2] = 8;
    s = ha_rraa_step(s, 0.05, 0.05);
    CHECK(s.rate_index == 3);
    CHECK(s.backoff[2] == 4);
    s = ha_rraa_step(s, 0.05, 0.05);
    CHECK(s.backoff[2] == 2);
  }
  SUBCASE("small-window loss drops even when the window average is fine") {
    CHECK(ha_rraa_step(fresh(), 0.01, 0.2).rate_index == 2);
  }
  SUBCASE("the rate saturates at both ends") {
    CHECK(ha_rraa_step(fresh(0), 0.5, 0.5).rate_index == 0);
    CHECK(ha_rraa_step(fresh(7), 0.0, 0.0).rate_index == 7);
  }
  SUBCASE("counters restart after a decision") {
    RateAdaptState s = fresh();
    s.window_fill = 40;
    s.loss_count = 3;
    s.probe_failures = 2;
    s = ha_rraa_step(s, 0.05, 0.05);
    CHECK(s.window_fill == 0);
    CHECK(s.loss_count == 0);
    CHECK(s.probe_failures == 0);
  }
  SUBCASE("bad inputs") {
    CHECK_THROWS_AS(ha_rraa_step(fresh(), 1.5, 0.0), ContractError);
    CHECK_THROWS_AS(RateAdaptState::start(8, 8, 50), ContractError);
    CHECK_THROWS_AS(RateAdaptState::start(8, 0, 50, {0.03, 0.10, 64}), ContractError);
  }
}

TEST_CASE("backoff doubles on repeated failure and halves on success") {
  RateAdaptState s = fresh(2);
  std::vector<int> seen;
  for (int round = 0; round < 8; ++round) {
    s = ha_rraa_step(s, 0.01, 0.0);  // up to 3
    REQUIRE(s.rate_index == 3);
    s = ha_rraa_step(s, 0.30, 0.30);  // back down to 2
    REQUIRE(s.rate_index == 2);
    seen.push_back(s.backoff[2]);
  }
  CHECK(seen == std::vector<int>{2, 4, 8, 16, 32, 64, 64, 64});

  // Trace property: every multiplier stays a power of two in [1, cap].
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 0.3);
  RateAdaptState r = fresh(4);
  for (int step = 0; step < 2000; ++step) {
    const RateAdaptState before = r;
    const double p = u(rng);
    r = ha_rraa_step(r, p, p);
    for (int b : r.backoff) {
      CHECK(b >= 1);
      CHECK(b <= 64);
      CHECK((b & (b - 1)) == 0);
    }
    if (p > 0.10 && before.rate_index > 0) {
      const int k = before.rate_index - 1;
      CHECK(r.backoff[k] == std::min(64, before.backoff[k] * 2));
    } else if (p <= 0.10 && before.rate_index > 0) {
      const int k = before.rate_index - 1;
      CHECK(r.backoff[k] == std::max(1, before.backoff[k] / 2));
    }
  }
}

TEST_CASE("free probes") {
  SUBCASE("a failed probe at the next rate suppresses one increase") {
    RateAdaptState s = free_probe_observe(fresh(), 4, false);
    s = ha_rraa_step(s, 0.0, 0.0);
    CHECK(s.rate_index == 3);
    // The suppression lasts one window only.
    s = ha_rraa_step(s, 0.0, 0.0);
    CHECK(s.rate_index == 4);
  }
  SUBCASE("no probes is neutral") {
    CHECK(ha_rraa_step(fresh(), 0.0, 0.0).rate_index == 4);
  }
  SUBCASE("successful probes let the increase proceed") {
    RateAdaptState s = fresh();
    for (int k = 0; k < 5; ++k) s = free_probe_observe(s, 4, true);
    s = ha_rraa_step(s, 0.0, 0.0);
    CHECK(s.rate_index == 4);
  }
  SUBCASE("mostly successful probes outweigh a rare failure") {
    RateAdaptState s = free_probe_observe(fresh(), 4, false);
    for (int k = 0; k < 19; ++k) s = free_probe_observe(s, 4, true);
    CHECK(ha_rraa_step(s, 0.0, 0.0).rate_index == 4);
  }
  SUBCASE("failures further up are not counted") {
    RateAdaptState s = free_probe_observe(fresh(), 6, false);
    CHECK(s.probe_failures == 0);
    CHECK(ha_rraa_step(s, 0.0, 0.0).rate_index == 4);
  }
  SUBCASE("probes must come from above") {
    CHECK_THROWS_AS(free_probe_observe(fresh(), 3, true), ContractError);
    CHECK_THROWS_AS(free_probe_observe(fresh(), 8, true), ContractError);
  }
}

TEST_CASE("interval feeding") {
  RateAdaptState s = fresh();
  s.backoff[3] = 4;  // window of 200 frames
  CHECK_FALSE(observe_interval(s, 50, 1));
  CHECK(s.window_fill == 50);
  CHECK_FALSE(observe_interval(s, 50, 0));
  CHECK_FALSE(observe_interval(s, 50, 0));
  CHECK(observe_interval(s, 50, 0));  // full: P = 1/200 < ORI
  CHECK(s.rate_index == 4);
  CHECK(s.window_fill == 0);

  RateAdaptState t = fresh();
  t.backoff[3] = 4;
  CHECK(observe_interval(t, 50, 6));  // small window at 12%
  CHECK(t.rate_index == 2);
  CHECK_THROWS_AS(observe_interval(t, 0, 0), ContractError);
  CHECK_THROWS_AS(observe_interval(t, 10, 11), ContractError);
}

TEST_CASE("convergence to the sustainable rate") {
  // Rate 3 is the only one with loss under ORI directly below a rate over MTL.
  const std::vector<double> loss = {0.0, 0.005, 0.01, 0.015, 0.35, 0.6, 0.9, 1.0};
  for (bool probes : {false, true}) {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      for (int start : {0, 7}) {
        const std::vector<int> trace = run_stationary(loss, start, 200, seed, probes);
        int at_target = 0;
        for (std::size_t w = 150; w < 200; ++w) at_target += trace[w] == 3;
        CHECK_MESSAGE(at_target >= 45, "seed " << seed << " start " << start);
      }
    }
  }
}

TEST_CASE("loss model") {
  LossModel m;
  m.per_user_rate_loss[1] = {0.0, 0.1, 0.5};
  m.max_rate_index[1] = 1;
  CHECK(m.loss(1, 0) == 0.0);
  CHECK(m.loss(1, 1) == 0.1);
  CHECK(m.loss(1, 2) == 1.0);
  CHECK(m.loss(2, 5) == 0.0);
  CHECK(sample_reception(m, 1, 1, 0.1));
  CHECK_FALSE(sample_reception(m, 1, 1, 0.0999));
  m.validate();
  m.per_user_rate_loss[3] = {0.5, 0.2};
  CHECK_THROWS_AS(m.validate(), ContractError);
  m.per_user_rate_loss[3] = {1.2};
  CHECK_THROWS_AS(m.validate(), ContractError);

  LossModel p;
  p.per_user_rate_loss[1] = {0.1};
  std::mt19937_64 rng(9);
  int received = 0;
  const int draws = 10'000;
  for (int k = 0; k < draws; ++k) received += sample_reception(p, 1, 0, rng);
  CHECK(std::abs(static_cast<double>(received) / draws - 0.9) <= 0.01);
}
