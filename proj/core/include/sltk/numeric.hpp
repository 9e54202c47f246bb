#pragma once

#include <cstdint>

namespace sltk {

/// ceil(x) that does not flip up when x is an integer plus representation
/// noise: ceil(x - 1e-9 - 8 eps |x|). Throws ParameterError if the result
/// does not fit in int64 or x is not finite.
[[nodiscard]] std::int64_t guarded_ceil(double x);

/// log base 3/2.
[[nodiscard]] double log_three_halves(double x) noexcept;

inline constexpr double kGoldenRatio = 1.6180339887498948482;
inline constexpr double kDefaultGamma = 2.0 / 3.0;

}  // namespace sltk
