#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sltk/network.hpp"

namespace sltk {

/// How the spectral norms of the pruned weight matrices enter epsilon_w.
struct SpectralMode {
  enum class Kind { AssumeUnit, WorstCase, Explicit };
  Kind kind = Kind::AssumeUnit;
  /// Per-layer norms, used only when kind == Explicit.
  std::vector<double> norms;

  static SpectralMode assume_unit() { return {}; }
  static SpectralMode worst_case() { return {Kind::WorstCase, {}}; }
  static SpectralMode explicit_norms(std::vector<double> norms) {
    return {Kind::Explicit, std::move(norms)};
  }
};

[[nodiscard]] std::string to_string(SpectralMode::Kind kind);

struct BoundInputs {
  Architecture arch;
  double eps = 0.0;
  double delta = 0.0;
  double w_max = 1.0;
  double f_max = 1.0;
  SpectralMode spectral;

  /// Throws ParameterError on non-positive eps/w_max/f_max, delta outside
  /// (0,1) or an explicit norm list of the wrong length or sign.
  void validate() const;
};

struct BoundReport {
  double eps_w = 0.0;
  double k_prime = 0.0;
  std::int64_t k = 0;
  std::vector<std::int64_t> M_thm1;
  std::vector<std::int64_t> M_recycle;
  std::vector<std::int64_t> M_combined;
  double ratio = 0.0;
  std::vector<std::uint64_t> malach_M;
  double per_weight_thm1 = 0.0;
};

/// eps / (e l lambda_max n_max^{3/2} F_max prod_i max{1, lambda_i s_i}) where
/// s_i is 1 (AssumeUnit), w_max n_max (WorstCase) or the supplied norm.
[[nodiscard]] double epsilon_w(const BoundInputs& inputs);

/// k' = log_{3/2}(3 w_max / eps_w). Throws ParameterError if k' <= 0.
[[nodiscard]] double sampling_k_prime(double eps_w, double w_max);

/// Interval count used by both pruning modes: k = ceil(log_{3/2}(2 w_max / eps_w)),
/// i.e. decomposition at accuracy eps_w/2.
[[nodiscard]] std::int64_t sampling_k(double eps_w, double w_max);

/// M_i = ceil(16 k' (n_i n_{i-1} + ln(2 l k' / delta))).
[[nodiscard]] std::vector<std::int64_t> layer_samples_thm1(const BoundInputs& inputs, double eps_w);

/// M_i = ceil(2 k' (n_i n_{i-1} + 4 max{n_i, n_{i-1}} ln(2 k' N_F / delta))).
[[nodiscard]] std::vector<std::int64_t> layer_samples_recycle(const BoundInputs& inputs,
                                                              double eps_w);

/// Entrywise minimum; throws DimensionError on a length mismatch.
[[nodiscard]] std::vector<std::int64_t> layer_samples_combined(std::span<const std::int64_t> a,
                                                               std::span<const std::int64_t> b);

/// N_G / N_F with N_G = sum_i (n_{i-1} + n_i) M_i.
[[nodiscard]] double weight_count_ratio(const Architecture& arch, std::span<const std::int64_t> M);

/// 32 n_max k' plus the contribution of the log term and the ceiling,
/// (16 k' ln(2 l k'/delta) + 1) sum_i (n_{i-1} + n_i) / N_F. Upper-bounds
/// weight_count_ratio(arch, layer_samples_thm1(...)).
[[nodiscard]] double weight_count_ratio_bound(const BoundInputs& inputs, double eps_w);

/// Prior-work count per target weight, ceil(64 l^2 n_max^3 ln(2 n_max^2 l / delta) / eps^2).
/// Throws ResourceError if it does not fit in 64 bits.
[[nodiscard]] std::uint64_t malach_per_weight(const BoundInputs& inputs);

/// n_max^2 times malach_per_weight, one entry per intermediate layer.
[[nodiscard]] std::vector<std::uint64_t> malach_layer_samples(const BoundInputs& inputs);

[[nodiscard]] BoundReport make_bound_report(const BoundInputs& inputs);

/// Pretty-printed JSON with one key per BoundReport field.
[[nodiscard]] std::string to_json(const BoundReport& report);

/// Bound on x_T for x_t <= a_t x_{t-1} + b_t:
/// e (x0 + c) prod_{a_t >= 1 + 1/tau} a_t, c = max_t b_t / max{1/tau, a_t - 1}.
/// Throws ParameterError if tau is not feasible (|{a_t < 1 + 1/tau}| > tau),
/// on negative entries or on a length mismatch.
[[nodiscard]] double sequence_bound(std::span<const double> a, std::span<const double> b,
                                     double x0, double tau);

/// e T max_t b_t prod_t max{1, a_t}, valid for x0 = 0.
[[nodiscard]] double sequence_bound_simple(std::span<const double> a, std::span<const double> b);

/// max{1/(x-1), |{a_t < x}|}. Throws ParameterError unless x > 1.
[[nodiscard]] double feasible_tau(std::span<const double> a, double x);

}  // namespace sltk
