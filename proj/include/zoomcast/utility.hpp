#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>

namespace zoomcast {

// Utility value that is either a finite non-negative quantity or the absorbing
// NEG_INF marker used for lower-bound violations.
//
// Finite values are fixed point: one unit of utility is kTicksPerUnit ticks.
// Every per-(tile, user, level) value is rounded to ticks exactly once, so sums
// are exact integers and independent of summation order. The scheduler, the
// naive combiner and the brute-force oracle can therefore be compared with ==.
class Utility {
 public:
  static constexpr std::int64_t kTicksPerUnit = 1'000'000'000;

  constexpr Utility() = default;

  static constexpr Utility neg_inf() {
    Utility u;
    u.neg_inf_ = true;
    return u;
  }
  static Utility from_ticks(std::int64_t ticks);
  // Rounds to the nearest tick. Requires units >= 0 and finite.
  static Utility from_units(double units);

  constexpr bool is_neg_inf() const { return neg_inf_; }
  constexpr bool is_finite() const { return !neg_inf_; }

  // Requires is_finite().
  std::int64_t ticks() const;
  // -infinity for NEG_INF.
  double units() const;

  friend Utility operator+(Utility a, Utility b) {
    if (a.neg_inf_ || b.neg_inf_) return neg_inf();
    Utility r;
    r.ticks_ = a.ticks_ + b.ticks_;
    return r;
  }
  Utility& operator+=(Utility other) { return *this = *this + other; }

  friend constexpr bool operator==(Utility a, Utility b) {
    if (a.neg_inf_ || b.neg_inf_) return a.neg_inf_ == b.neg_inf_;
    return a.ticks_ == b.ticks_;
  }
  friend constexpr std::strong_ordering operator<=>(Utility a, Utility b) {
    if (a.neg_inf_ || b.neg_inf_) {
      return b.neg_inf_ <=> a.neg_inf_;
    }
    return a.ticks_ <=> b.ticks_;
  }

  std::string to_string() const;

 private:
  std::int64_t ticks_ = 0;
  bool neg_inf_ = false;
};

std::ostream& operator<<(std::ostream& os, Utility u);

}  // namespace zoomcast
