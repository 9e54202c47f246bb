#pragma once

namespace sltk {

/// Hyperbolic (log-uniform) density c'/v on [lo, hi], c' = 1/ln(hi/lo).
class HyperbolicDist {
 public:
  /// Throws ParameterError unless 0 < lo < hi.
  HyperbolicDist(double lo, double hi);

  [[nodiscard]] double lo() const noexcept { return lo_; }
  [[nodiscard]] double hi() const noexcept { return hi_; }
  [[nodiscard]] double norm_const() const noexcept { return norm_const_; }

  /// Density at v; zero outside [lo, hi].
  [[nodiscard]] double density(double v) const noexcept;
  /// P[X <= v].
  [[nodiscard]] double cdf(double v) const noexcept;

 private:
  double lo_;
  double hi_;
  double norm_const_;
};

/// Symmetric version on [-hi,-lo] U [lo,hi]: p(w) = p(-w) = base.density(|w|)/2.
class SignedHyperbolicDist {
 public:
  explicit SignedHyperbolicDist(HyperbolicDist base) noexcept : base_(base) {}
  SignedHyperbolicDist(double lo, double hi) : base_(lo, hi) {}

  [[nodiscard]] const HyperbolicDist& base() const noexcept { return base_; }
  [[nodiscard]] double density(double w) const noexcept;

 private:
  HyperbolicDist base_;
};

/// Inverse-CDF sampler: lo * (hi/lo)^u. Throws RangeError unless 0 <= u <= 1.
[[nodiscard]] double sample_pos(const HyperbolicDist& dist, double u);

/// (-1)^s * sample_pos(base, u). `s` must be 0 or 1.
[[nodiscard]] double sample_signed(const SignedHyperbolicDist& dist, double u, int s);

/// Individual-weight range [alpha, beta] whose products of two samples cover
/// the product range [alpha', beta'] = [2 eps_w / 9, 2 w_max / 3] with
/// density at least c/(2w).
struct RangeSpec {
  double alpha_prime = 0.0;
  double beta_prime = 0.0;
  double q = 0.0;
  double alpha = 0.0;
  double beta = 0.0;

  [[nodiscard]] HyperbolicDist weight_dist() const { return {alpha, beta}; }
};

/// alpha' = 2 eps_w/9, beta' = 2 w_max/3, q = (alpha' beta')^(1/4),
/// alpha = alpha'/q, beta = beta'/q.
/// Throws ParameterError unless 0 < eps_w < 1.5 w_max.
[[nodiscard]] RangeSpec ranges_for_accuracy(double eps_w, double w_max);

}  // namespace sltk
