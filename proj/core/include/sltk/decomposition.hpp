#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "sltk/numeric.hpp"

namespace sltk {

/// Parameters of the golden-ratio decomposition at accuracy `eps` for
/// weights in [0, w_max]. Intervals are I_i = (gamma^{i+1}, gamma^i] in
/// units of w_max, i = 1..k, with k = ceil(log_gamma(eps / w_max)) and
/// k' = log_gamma(gamma * eps / w_max) (for gamma = 2/3 this is
/// log_{3/2}(3 w_max / (2 eps))).
struct GrdParams {
  double gamma = kDefaultGamma;
  double eps = 0.0;
  double w_max = 1.0;
  int k = 0;
  double k_prime = 0.0;

  /// Throws ParameterError if gamma is outside [1/phi, 1), eps or w_max are
  /// not positive, or k' <= 0.
  static GrdParams make(double eps, double w_max = 1.0, double gamma = kDefaultGamma);

  /// m = ceil(k' ln(k'/delta)), at least 1.
  [[nodiscard]] std::size_t sample_count(double delta) const;

  /// Lower end gamma^{k+1} of the last interval, in units of w_max.
  [[nodiscard]] double lowest_edge() const;
};

/// gamma^i, the single definition of interval edges used everywhere.
[[nodiscard]] double gamma_power(double gamma, int i) noexcept;

/// The unique i in [1, k] with gamma^{i+1} < v <= gamma^i, or nullopt.
/// Throws DomainError for v <= 0 and ParameterError unless 0 < gamma < 1.
[[nodiscard]] std::optional<int> interval_index(double v, double gamma, int k);

/// Interval membership of every sample plus the first sample of each interval.
struct BucketIndex {
  std::vector<std::optional<int>> interval_of_sample;
  /// first_in_interval[i-1]: lowest sample index in I_i, if any.
  std::vector<std::optional<std::size_t>> first_in_interval;

  /// First interval (1-based) with no sample, if any.
  [[nodiscard]] std::optional<int> first_gap() const;
};

[[nodiscard]] BucketIndex bucket_samples(std::span<const double> samples, double gamma, int k);

struct DecompositionResult {
  std::vector<std::uint8_t> mask;  // one entry per supplied sample
  double approx = 0.0;             // sum of selected samples
  double residual = 0.0;           // w - approx

  [[nodiscard]] std::size_t popcount() const noexcept;
};

/// Greedy golden-ratio decomposition of w in [0, 1] (units of w_max) over
/// samples given in the same units. For i = 1..k, subtracts the first sample
/// of I_i whenever the running residual is at least gamma^i, which keeps the
/// residual in [0, gamma^i] after step i. Result: w - eps/w_max <= approx <= w.
///
/// w <= eps/w_max returns the empty mask without looking at the samples.
/// Otherwise every interval must hold a sample, else CoverageError naming
/// the first empty interval.
[[nodiscard]] DecompositionResult grd_decompose(double w, std::span<const double> samples,
                                                const GrdParams& params);

/// grd_decompose for w in [0, w_max] with samples on the original scale.
[[nodiscard]] DecompositionResult grd_decompose_scaled(double w, std::span<const double> samples,
                                                       const GrdParams& params);

/// m = ceil(k' ln(k'/delta)) with k' = log_{3/2}(3 w_max / (2 eps)).
/// Throws ParameterError for delta outside (0,1) or k' <= 0.
[[nodiscard]] std::int64_t grd_sample_count(double eps, double w_max, double delta);

/// M = ceil((2/c)(n + ln(k/delta))): enough iid draws so each of k
/// categories of probability in [c, 1/2] gets n hits with probability
/// at least 1 - delta. Throws ParameterError if c is outside (0, 1/2].
[[nodiscard]] std::int64_t fillcat_sample_count(double c, std::int64_t k, std::int64_t n,
                                                double delta);

}  // namespace sltk
