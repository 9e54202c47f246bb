#include "sltk/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "sltk/error.hpp"

namespace sltk {

std::int64_t guarded_ceil(double x) {
  if (!std::isfinite(x)) throw ParameterError("ceiling of a non-finite value");
  const double guarded = std::ceil(x - 1e-9 - 8 * std::numeric_limits<double>::epsilon() * std::abs(x));
  if (guarded >= 9.2e18 || guarded <= -9.2e18) {
    throw ParameterError("ceiling " + std::to_string(guarded) + " exceeds the 64-bit range");
  }
  return static_cast<std::int64_t>(guarded);
}

double log_three_halves(double x) noexcept { return std::log(x) / std::log(1.5); }

}  // namespace sltk
