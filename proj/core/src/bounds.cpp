#include "sltk/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "json.hpp"
#include "sltk/error.hpp"
#include "sltk/numeric.hpp"

namespace sltk {

namespace {

double to_double(std::size_t n) { return static_cast<double>(n); }

double layer_log_term_thm1(const BoundInputs& in, double k_prime) {
  return std::log(2.0 * to_double(in.arch.depth()) * k_prime / in.delta);
}

}  // namespace

std::string to_string(SpectralMode::Kind kind) {
  switch (kind) {
    case SpectralMode::Kind::AssumeUnit: return "unit";
    case SpectralMode::Kind::WorstCase: return "worst";
    case SpectralMode::Kind::Explicit: return "explicit";
  }
  return "unknown";
}

void BoundInputs::validate() const {
  if (arch.depth() == 0) throw ParameterError("architecture has no layers");
  if (!(eps > 0.0)) throw ParameterError("eps must be positive");
  if (!(delta > 0.0 && delta < 1.0)) throw ParameterError("delta must lie in (0, 1)");
  if (!(w_max > 0.0)) throw ParameterError("w_max must be positive");
  if (!(f_max > 0.0)) throw ParameterError("f_max must be positive");
  if (spectral.kind == SpectralMode::Kind::Explicit) {
    if (spectral.norms.size() != arch.depth()) {
      throw ParameterError("explicit spectral norms: expected " + std::to_string(arch.depth()) +
                           " values, got " + std::to_string(spectral.norms.size()));
    }
    for (double s : spectral.norms) {
      if (!(s >= 0.0) || !std::isfinite(s)) throw ParameterError("spectral norms must be finite and >= 0");
    }
  }
}

double epsilon_w(const BoundInputs& inputs) {
  inputs.validate();
  const auto& arch = inputs.arch;
  const double n_max = to_double(arch.n_max());
  double product = 1.0;
  for (std::size_t i = 1; i <= arch.depth(); ++i) {
    double norm = 1.0;
    switch (inputs.spectral.kind) {
      case SpectralMode::Kind::AssumeUnit: norm = 1.0; break;
      case SpectralMode::Kind::WorstCase: norm = inputs.w_max * n_max; break;
      case SpectralMode::Kind::Explicit: norm = inputs.spectral.norms[i - 1]; break;
    }
    product *= std::max(1.0, lipschitz(arch.activation(i)) * norm);
  }
  const double denom = std::numbers::e * to_double(arch.depth()) * arch.lambda_max() *
                       std::pow(n_max, 1.5) * inputs.f_max * product;
  return inputs.eps / denom;
}

double sampling_k_prime(double eps_w, double w_max) {
  if (!(eps_w > 0.0) || !(w_max > 0.0)) throw ParameterError("eps_w and w_max must be positive");
  const double k_prime = log_three_halves(3.0 * w_max / eps_w);
  if (!(k_prime > 0.0)) throw ParameterError("degenerate k' = " + std::to_string(k_prime));
  return k_prime;
}

std::int64_t sampling_k(double eps_w, double w_max) {
  if (!(eps_w > 0.0) || !(w_max > 0.0)) throw ParameterError("eps_w and w_max must be positive");
  return std::max<std::int64_t>(0, guarded_ceil(log_three_halves(2.0 * w_max / eps_w)));
}

std::vector<std::int64_t> layer_samples_thm1(const BoundInputs& inputs, double eps_w) {
  inputs.validate();
  const double k_prime = sampling_k_prime(eps_w, inputs.w_max);
  const double log_term = layer_log_term_thm1(inputs, k_prime);
  const auto& w = inputs.arch.widths();
  std::vector<std::int64_t> out;
  for (std::size_t i = 1; i < w.size(); ++i) {
    out.push_back(guarded_ceil(16.0 * k_prime * (to_double(w[i] * w[i - 1]) + log_term)));
  }
  return out;
}

std::vector<std::int64_t> layer_samples_recycle(const BoundInputs& inputs, double eps_w) {
  inputs.validate();
  const double k_prime = sampling_k_prime(eps_w, inputs.w_max);
  const double n_f = to_double(inputs.arch.weight_count());
  const double log_term = std::log(2.0 * k_prime * n_f / inputs.delta);
  const auto& w = inputs.arch.widths();
  std::vector<std::int64_t> out;
  for (std::size_t i = 1; i < w.size(); ++i) {
    const double wide = to_double(std::max(w[i], w[i - 1]));
    out.push_back(guarded_ceil(2.0 * k_prime * (to_double(w[i] * w[i - 1]) + 4.0 * wide * log_term)));
  }
  return out;
}

std::vector<std::int64_t> layer_samples_combined(std::span<const std::int64_t> a,
                                                 std::span<const std::int64_t> b) {
  if (a.size() != b.size()) throw DimensionError("sample count lists differ in length");
  std::vector<std::int64_t> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = std::min(a[i], b[i]);
  return out;
}

double weight_count_ratio(const Architecture& arch, std::span<const std::int64_t> M) {
  if (M.size() != arch.depth()) throw DimensionError("one sample count per layer expected");
  const auto& w = arch.widths();
  double n_g = 0.0;
  for (std::size_t i = 1; i < w.size(); ++i) {
    n_g += to_double(w[i - 1] + w[i]) * static_cast<double>(M[i - 1]);
  }
  return n_g / to_double(arch.weight_count());
}

double weight_count_ratio_bound(const BoundInputs& inputs, double eps_w) {
  inputs.validate();
  const double k_prime = sampling_k_prime(eps_w, inputs.w_max);
  const auto& w = inputs.arch.widths();
  double fan_sum = 0.0;
  for (std::size_t i = 1; i < w.size(); ++i) fan_sum += to_double(w[i - 1] + w[i]);
  const double slack = (16.0 * k_prime * layer_log_term_thm1(inputs, k_prime) + 1.0) * fan_sum /
                       to_double(inputs.arch.weight_count());
  return 32.0 * to_double(inputs.arch.n_max()) * k_prime + slack;
}

std::uint64_t malach_per_weight(const BoundInputs& inputs) {
  inputs.validate();
  const long double l = inputs.arch.depth();
  const long double n = inputs.arch.n_max();
  const long double eps = inputs.eps;
  const long double value =
      64.0L * l * l * n * n * n * std::log(2.0L * n * n * l / inputs.delta) / (eps * eps);
  const long double guarded = std::ceil(value - 1e-9L - 8 * std::numeric_limits<long double>::epsilon() * value);
  if (!(guarded < 1.8e19L)) throw ResourceError("prior-work count exceeds 64 bits");
  return static_cast<std::uint64_t>(guarded);
}

std::vector<std::uint64_t> malach_layer_samples(const BoundInputs& inputs) {
  const std::uint64_t per_weight = malach_per_weight(inputs);
  const std::uint64_t n = inputs.arch.n_max();
  if (per_weight > std::numeric_limits<std::uint64_t>::max() / (n * n)) {
    throw ResourceError("prior-work layer count exceeds 64 bits");
  }
  return std::vector<std::uint64_t>(inputs.arch.depth(), per_weight * n * n);
}

BoundReport make_bound_report(const BoundInputs& inputs) {
  BoundReport r;
  r.eps_w = epsilon_w(inputs);
  r.k_prime = sampling_k_prime(r.eps_w, inputs.w_max);
  r.k = sampling_k(r.eps_w, inputs.w_max);
  r.M_thm1 = layer_samples_thm1(inputs, r.eps_w);
  r.M_recycle = layer_samples_recycle(inputs, r.eps_w);
  r.M_combined = layer_samples_combined(r.M_thm1, r.M_recycle);
  r.ratio = weight_count_ratio(inputs.arch, r.M_combined);
  r.malach_M = malach_layer_samples(inputs);
  const double n2 = to_double(inputs.arch.n_max() * inputs.arch.n_max());
  r.per_weight_thm1 =
      static_cast<double>(*std::max_element(r.M_thm1.begin(), r.M_thm1.end())) / n2;
  return r;
}

std::string to_json(const BoundReport& report) {
  nlohmann::ordered_json j;
  j["eps_w"] = report.eps_w;
  j["k_prime"] = report.k_prime;
  j["k"] = report.k;
  j["M_thm1"] = report.M_thm1;
  j["M_recycle"] = report.M_recycle;
  j["M_combined"] = report.M_combined;
  j["ratio"] = report.ratio;
  j["malach_M"] = report.malach_M;
  j["per_weight_thm1"] = report.per_weight_thm1;
  return j.dump(2) + "\n";
}

namespace {

void check_sequences(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ParameterError("a and b must have the same length");
  if (a.empty()) throw ParameterError("empty sequence");
  for (std::size_t t = 0; t < a.size(); ++t) {
    if (!(a[t] >= 0.0) || !(b[t] >= 0.0)) throw ParameterError("sequence entries must be >= 0");
  }
}

}  // namespace

double sequence_bound(std::span<const double> a, std::span<const double> b, double x0, double tau) {
  check_sequences(a, b);
  if (!(tau > 0.0)) throw ParameterError("tau must be positive");
  if (!(x0 >= 0.0)) throw ParameterError("x0 must be >= 0");
  const double threshold = 1.0 + 1.0 / tau;
  const auto below = std::count_if(a.begin(), a.end(), [&](double v) { return v < threshold; });
  if (static_cast<double>(below) > tau) {
    throw ParameterError("tau = " + std::to_string(tau) + " is not feasible");
  }
  double c = 0.0;
  double product = 1.0;
  for (std::size_t t = 0; t < a.size(); ++t) {
    c = std::max(c, b[t] / std::max(1.0 / tau, a[t] - 1.0));
    if (a[t] >= threshold) product *= a[t];
  }
  return std::numbers::e * (x0 + c) * product;
}

double sequence_bound_simple(std::span<const double> a, std::span<const double> b) {
  check_sequences(a, b);
  double product = 1.0;
  for (double v : a) product *= std::max(1.0, v);
  const double b_max = *std::max_element(b.begin(), b.end());
  return std::numbers::e * to_double(a.size()) * b_max * product;
}

double feasible_tau(std::span<const double> a, double x) {
  if (!(x > 1.0)) throw ParameterError("feasible_tau needs x > 1");
  const auto below = std::count_if(a.begin(), a.end(), [&](double v) { return v < x; });
  return std::max(1.0 / (x - 1.0), static_cast<double>(below));
}

}  // namespace sltk
