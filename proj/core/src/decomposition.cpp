#include "sltk/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "sltk/error.hpp"

namespace sltk {

namespace {

constexpr double kSlack = 1e-9;

void check_gamma_open(double gamma) {
  if (!(gamma > 0.0 && gamma < 1.0)) {
    throw ParameterError("gamma must lie in (0, 1), got " + std::to_string(gamma));
  }
}

void check_delta(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw ParameterError("delta must lie in (0, 1), got " + std::to_string(delta));
  }
}

}  // namespace

double gamma_power(double gamma, int i) noexcept { return std::pow(gamma, i); }

GrdParams GrdParams::make(double eps, double w_max, double gamma) {
  if (!(gamma >= 1.0 / kGoldenRatio && gamma < 1.0)) {
    throw ParameterError("gamma must lie in [1/phi, 1), got " + std::to_string(gamma));
  }
  if (!(eps > 0.0) || !(w_max > 0.0)) {
    throw ParameterError("eps and w_max must be positive");
  }
  GrdParams p;
  p.gamma = gamma;
  p.eps = eps;
  p.w_max = w_max;
  const double ratio = eps / w_max;
  p.k_prime = std::log(gamma * ratio) / std::log(gamma);
  if (!(p.k_prime > 0.0)) {
    throw ParameterError("eps too large for w_max: k' = " + std::to_string(p.k_prime));
  }
  p.k = static_cast<int>(std::max<std::int64_t>(0, guarded_ceil(std::log(ratio) / std::log(gamma))));
  return p;
}

std::size_t GrdParams::sample_count(double delta) const {
  check_delta(delta);
  const auto m = guarded_ceil(k_prime * std::log(k_prime / delta));
  return static_cast<std::size_t>(std::max<std::int64_t>(1, m));
}

double GrdParams::lowest_edge() const { return gamma_power(gamma, k + 1); }

std::optional<int> interval_index(double v, double gamma, int k) {
  check_gamma_open(gamma);
  if (!(v > 0.0)) throw DomainError("interval_index needs v > 0, got " + std::to_string(v));
  if (v > gamma || k < 1) return std::nullopt;
  const double guess = std::floor(std::log(v) / std::log(gamma));
  if (guess > k + 1.0) return std::nullopt;
  int i = static_cast<int>(guess);
  // The logarithm can be off by one near the edges; settle with the exact powers.
  while (i > 0 && v > gamma_power(gamma, i)) --i;
  while (v <= gamma_power(gamma, i + 1)) ++i;
  if (i < 1 || i > k) return std::nullopt;
  return i;
}

std::optional<int> BucketIndex::first_gap() const {
  for (std::size_t i = 0; i < first_in_interval.size(); ++i) {
    if (!first_in_interval[i]) return static_cast<int>(i + 1);
  }
  return std::nullopt;
}

BucketIndex bucket_samples(std::span<const double> samples, double gamma, int k) {
  BucketIndex index;
  index.interval_of_sample.reserve(samples.size());
  index.first_in_interval.assign(static_cast<std::size_t>(std::max(k, 0)), std::nullopt);
  for (std::size_t s = 0; s < samples.size(); ++s) {
    const auto i = interval_index(samples[s], gamma, k);
    index.interval_of_sample.push_back(i);
    if (i && !index.first_in_interval[*i - 1]) index.first_in_interval[*i - 1] = s;
  }
  return index;
}

std::size_t DecompositionResult::popcount() const noexcept {
  return static_cast<std::size_t>(std::count(mask.begin(), mask.end(), std::uint8_t{1}));
}

DecompositionResult grd_decompose(double w, std::span<const double> samples,
                                  const GrdParams& params) {
  if (!(w >= 0.0 && w <= 1.0)) {
    throw RangeError("grd_decompose needs w in [0, 1], got " + std::to_string(w));
  }
  DecompositionResult result;
  result.mask.assign(samples.size(), 0);
  result.residual = w;
  const double eps = params.eps / params.w_max;
  if (w <= eps) return result;

  const BucketIndex index = bucket_samples(samples, params.gamma, params.k);
  if (const auto gap = index.first_gap()) {
    throw CoverageError(*gap, "no sample in decomposition interval " + std::to_string(*gap));
  }

  double residual = w;
  for (int i = 1; i <= params.k; ++i) {
    const double edge = gamma_power(params.gamma, i);
    if (residual >= edge) {
      const std::size_t s = *index.first_in_interval[i - 1];
      residual -= samples[s];
      result.mask[s] = 1;
    }
    if (residual < -kSlack || residual > edge * (1.0 + kSlack)) {
      throw std::logic_error("greedy residual left [0, gamma^" + std::to_string(i) + "]");
    }
  }

  double approx = 0.0;
  for (std::size_t s = 0; s < samples.size(); ++s) {
    if (result.mask[s]) approx += samples[s];
  }
  result.approx = approx;
  result.residual = w - approx;
  return result;
}

DecompositionResult grd_decompose_scaled(double w, std::span<const double> samples,
                                         const GrdParams& params) {
  if (!(w >= 0.0 && w <= params.w_max)) {
    throw RangeError("grd_decompose_scaled needs w in [0, w_max], got " + std::to_string(w));
  }
  std::vector<double> unit(samples.size());
  std::transform(samples.begin(), samples.end(), unit.begin(),
                 [&](double v) { return v / params.w_max; });
  DecompositionResult result = grd_decompose(w / params.w_max, unit, params);
  double approx = 0.0;
  for (std::size_t s = 0; s < samples.size(); ++s) {
    if (result.mask[s]) approx += samples[s];
  }
  result.approx = approx;
  result.residual = w - approx;
  return result;
}

std::int64_t grd_sample_count(double eps, double w_max, double delta) {
  check_delta(delta);
  if (!(eps > 0.0) || !(w_max > 0.0)) throw ParameterError("eps and w_max must be positive");
  const double k_prime = log_three_halves(3.0 * w_max / (2.0 * eps));
  if (!(k_prime > 1e-12)) {
    throw ParameterError("degenerate k' = " + std::to_string(k_prime));
  }
  return std::max<std::int64_t>(1, guarded_ceil(k_prime * std::log(k_prime / delta)));
}

std::int64_t fillcat_sample_count(double c, std::int64_t k, std::int64_t n, double delta) {
  if (!(c > 0.0 && c <= 0.5)) {
    throw ParameterError("category probability bound c must lie in (0, 1/2]");
  }
  if (k < 1 || n < 0) throw ParameterError("need k >= 1 and n >= 0");
  check_delta(delta);
  return guarded_ceil((2.0 / c) * (static_cast<double>(n) + std::log(static_cast<double>(k) / delta)));
}

}  // namespace sltk
