#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "sltk/error.hpp"
#include "sltk/random.hpp"
#include "sltk/sampling.hpp"

namespace sltk {
namespace {

TEST(HyperbolicDist, Validation) {
  EXPECT_THROW(HyperbolicDist(0.0, 1.0), ParameterError);
  EXPECT_THROW(HyperbolicDist(2.0, 1.0), ParameterError);
  EXPECT_THROW(HyperbolicDist(1.0, 1.0), ParameterError);
}

TEST(HyperbolicDist, DensityIntegratesToOne) {
  const HyperbolicDist d(0.1, 10.0);
  EXPECT_NEAR(d.norm_const(), 1.0 / std::log(100.0), 1e-15);
  // Midpoint rule in log space: the integrand v p(v) is constant.
  constexpr int kSteps = 1000;
  const double h = std::log(100.0) / kSteps;
  double total = 0.0;
  for (int i = 0; i < kSteps; ++i) {
    const double v = 0.1 * std::exp((i + 0.5) * h);
    total += d.density(v) * v * h;
  }
  EXPECT_NEAR(total, 1.0, 1e-12);
  EXPECT_EQ(d.density(0.05), 0.0);
  EXPECT_EQ(d.density(11.0), 0.0);
  EXPECT_NEAR(d.cdf(1.0), 0.5, 1e-15);
}

TEST(SamplePos, Endpoints) {
  const HyperbolicDist d(0.1, 10.0);
  EXPECT_EQ(sample_pos(d, 0.0), 0.1);
  EXPECT_EQ(sample_pos(d, 1.0), 10.0);
}

TEST(SamplePos, MidpointIsGeometricMean) {
  EXPECT_NEAR(sample_pos(HyperbolicDist(0.1, 10.0), 0.5), 1.0, 1e-15);
}

TEST(SamplePos, RejectsOutOfRangeU) {
  const HyperbolicDist d(0.1, 10.0);
  EXPECT_THROW((void)sample_pos(d, -0.01), RangeError);
  EXPECT_THROW((void)sample_pos(d, 1.01), RangeError);
}

TEST(SamplePos, MonotoneInU) {
  const HyperbolicDist d(0.003, 7.0);
  double last = 0.0;
  for (int i = 0; i <= 1000; ++i) {
    const double v = sample_pos(d, i / 1000.0);
    EXPECT_GE(v, last);
    last = v;
  }
}

TEST(SamplePos, ScaleInvariance) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const double c = std::exp(u(rng) * 6.0 - 3.0);
    const double x = u(rng);
    const double plain = sample_pos(HyperbolicDist(0.2, 3.0), x);
    const double scaled = sample_pos(HyperbolicDist(c * 0.2, c * 3.0), x);
    EXPECT_NEAR(scaled, c * plain, 1e-12 * scaled);
  }
}

TEST(SampleSigned, Examples) {
  const SignedHyperbolicDist d(0.1, 10.0);
  EXPECT_EQ(sample_signed(d, 0.0, 1), -0.1);
  EXPECT_EQ(sample_signed(d, 1.0, 0), 10.0);
  EXPECT_THROW((void)sample_signed(d, 0.5, 2), RangeError);
  EXPECT_NEAR(d.density(-1.0), 0.5 * d.base().density(1.0), 1e-15);
}

TEST(SampleSigned, FairSigns) {
  const SignedHyperbolicDist d(0.1, 10.0);
  const Stream s(9, "signs");
  int negative = 0;
  constexpr int kN = 100000;
  for (int c = 0; c < kN; ++c) {
    if (sample_signed(d, s.uniform(c), s.coin(c)) < 0) ++negative;
  }
  EXPECT_NEAR(static_cast<double>(negative) / kN, 0.5, 0.01);
}

TEST(SamplePos, LogSamplesPassKolmogorovSmirnov) {
  const HyperbolicDist d(0.01, 5.0);
  const Stream s(10, "ks");
  constexpr int kN = 100000;
  std::vector<double> logs(kN);
  for (int c = 0; c < kN; ++c) logs[c] = std::log(sample_pos(d, s.uniform(c)));
  std::sort(logs.begin(), logs.end());
  const double lo = std::log(0.01), hi = std::log(5.0);
  double stat = 0.0;
  for (int i = 0; i < kN; ++i) {
    const double f = (logs[i] - lo) / (hi - lo);
    stat = std::max({stat, (i + 1.0) / kN - f, f - static_cast<double>(i) / kN});
  }
  // Asymptotic critical value at significance 0.01 is 1.628 / sqrt(n).
  EXPECT_LT(stat, 1.628 / std::sqrt(static_cast<double>(kN)));
}

TEST(RangesForAccuracy, WorkedExample) {
  const RangeSpec r = ranges_for_accuracy(0.045, 1.0);
  // Independent evaluation of the closed forms.
  const double ap = 2.0 * 0.045 / 9.0;
  const double bp = 2.0 / 3.0;
  const double q = std::pow(ap * bp, 0.25);
  EXPECT_NEAR(r.alpha_prime, 0.01, 1e-15);
  EXPECT_NEAR(r.beta_prime, 0.666667, 1e-6);
  EXPECT_NEAR(r.q, 0.28574, 1e-5);
  EXPECT_NEAR(r.q, q, 1e-15);
  EXPECT_NEAR(r.alpha, 0.034997, 1e-6);
  EXPECT_NEAR(r.beta, 2.33309, 1e-5);
}

TEST(RangesForAccuracy, ProductRangeIdentity) {
  std::mt19937_64 rng(37);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const double w_max = std::exp(u(rng) * 4.0 - 2.0);
    const double eps_w = w_max * 1.5 * std::pow(10.0, -8.0 * u(rng)) * 0.999;
    const RangeSpec r = ranges_for_accuracy(eps_w, w_max);
    const double a = r.alpha, b = r.beta;
    EXPECT_NEAR(a * std::sqrt(a * b), r.alpha_prime, 1e-12 * r.alpha_prime);
    EXPECT_NEAR(b * std::sqrt(a * b), r.beta_prime, 1e-12 * r.beta_prime);
  }
}

TEST(RangesForAccuracy, RejectsDegenerateRange) {
  EXPECT_THROW((void)ranges_for_accuracy(2.0 * 3.0 / 4.0, 1.0), ParameterError);
  EXPECT_THROW((void)ranges_for_accuracy(0.0, 1.0), ParameterError);
}

TEST(ProductOfSamples, DensityLowerBoundAndMassInside) {
  const RangeSpec r = ranges_for_accuracy(1e-3, 1.0);
  const HyperbolicDist d = r.weight_dist();
  const double a = r.alpha, b = r.beta;
  const double lo = a * std::sqrt(a * b), hi = b * std::sqrt(a * b);
  const double c = 1.0 / std::log(b / a);
  constexpr int kBins = 20;
  constexpr int kDraws = 1000000;
  std::vector<int> counts(kBins, 0);
  int inside = 0;
  StreamCursor cur(Stream(2, "products"));
  for (int i = 0; i < kDraws; ++i) {
    const double p = sample_pos(d, cur.uniform()) * sample_pos(d, cur.uniform());
    if (p < lo || p > hi) continue;
    ++inside;
    const int bin = std::min(kBins - 1, static_cast<int>(kBins * std::log(p / lo) / std::log(hi / lo)));
    ++counts[bin];
  }
  for (int j = 0; j < kBins; ++j) {
    // Integral of c/(2w) over a log-width of ln(hi/lo)/kBins.
    const double floor_mass = 0.5 * c * std::log(hi / lo) / kBins;
    EXPECT_GE(static_cast<double>(counts[j]) / kDraws, 0.95 * floor_mass) << "bin " << j;
  }
  EXPECT_GE(static_cast<double>(inside) / kDraws, 0.49);
}

}  // namespace
}  // namespace sltk
