#include "zoomcast/utility.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include "zoomcast/errors.hpp"

namespace zoomcast {

Utility Utility::from_ticks(std::int64_t ticks) {
  if (ticks < 0) throw ContractError("utility must be non-negative");
  Utility u;
  u.ticks_ = ticks;
  return u;
}

Utility Utility::from_units(double units) {
  if (!std::isfinite(units) || units < 0.0) {
    throw ContractError("utility must be finite and non-negative");
  }
  return from_ticks(std::llround(units * static_cast<double>(kTicksPerUnit)));
}

std::int64_t Utility::ticks() const {
  if (neg_inf_) throw ContractError("ticks() of NEG_INF utility");
  return ticks_;
}

double Utility::units() const {
  if (neg_inf_) return -std::numeric_limits<double>::infinity();
  return static_cast<double>(ticks_) / static_cast<double>(kTicksPerUnit);
}

std::string Utility::to_string() const {
  if (neg_inf_) return "-inf";
  std::ostringstream os;
  os.precision(9);
  os << units();
  return os.str();
}

std::ostream& operator<<(std::ostream& os, Utility u) {
  return os << u.to_string();
}

}  // namespace zoomcast
