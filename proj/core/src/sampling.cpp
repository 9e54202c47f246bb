#include "sltk/sampling.hpp"

#include <cmath>
#include <string>

#include "sltk/error.hpp"

namespace sltk {

HyperbolicDist::HyperbolicDist(double lo, double hi) : lo_(lo), hi_(hi) {
  if (!(lo > 0.0) || !(hi > lo) || !std::isfinite(hi)) {
    throw ParameterError("hyperbolic distribution needs 0 < lo < hi, got [" + std::to_string(lo) +
                         ", " + std::to_string(hi) + "]");
  }
  norm_const_ = 1.0 / std::log(hi_ / lo_);
}

double HyperbolicDist::density(double v) const noexcept {
  if (v < lo_ || v > hi_) return 0.0;
  return norm_const_ / v;
}

double HyperbolicDist::cdf(double v) const noexcept {
  if (v <= lo_) return 0.0;
  if (v >= hi_) return 1.0;
  return norm_const_ * std::log(v / lo_);
}

double SignedHyperbolicDist::density(double w) const noexcept {
  return 0.5 * base_.density(std::abs(w));
}

double sample_pos(const HyperbolicDist& dist, double u) {
  if (!(u >= 0.0 && u <= 1.0)) {
    throw RangeError("uniform variate " + std::to_string(u) + " outside [0, 1]");
  }
  if (u == 0.0) return dist.lo();
  if (u == 1.0) return dist.hi();
  return dist.lo() * std::pow(dist.hi() / dist.lo(), u);
}

double sample_signed(const SignedHyperbolicDist& dist, double u, int s) {
  if (s != 0 && s != 1) throw RangeError("sign coin must be 0 or 1");
  const double v = sample_pos(dist.base(), u);
  return s == 0 ? v : -v;
}

RangeSpec ranges_for_accuracy(double eps_w, double w_max) {
  if (!(w_max > 0.0) || !(eps_w > 0.0) || !(eps_w < 1.5 * w_max)) {
    throw ParameterError("ranges_for_accuracy needs 0 < eps_w < 1.5 w_max (eps_w=" +
                         std::to_string(eps_w) + ", w_max=" + std::to_string(w_max) + ")");
  }
  RangeSpec r;
  r.alpha_prime = 2.0 * eps_w / 9.0;
  r.beta_prime = 2.0 * w_max / 3.0;
  r.q = std::pow(r.alpha_prime * r.beta_prime, 0.25);
  r.alpha = r.alpha_prime / r.q;
  r.beta = r.beta_prime / r.q;
  return r;
}

}  // namespace sltk
