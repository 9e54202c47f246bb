#include "sltk/network.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sltk/error.hpp"

namespace sltk {

double lipschitz(ActivationKind kind) noexcept {
  switch (kind) {
    case ActivationKind::Logistic:
      return 0.25;
    case ActivationKind::ReLU:
    case ActivationKind::Tanh:
    case ActivationKind::Identity:
      break;
  }
  return 1.0;
}

double activate(ActivationKind kind, double x) noexcept {
  switch (kind) {
    case ActivationKind::ReLU:
      return x > 0.0 ? x : 0.0;
    case ActivationKind::Tanh:
      return std::tanh(x);
    case ActivationKind::Logistic:
      return 1.0 / (1.0 + std::exp(-x));
    case ActivationKind::Identity:
      break;
  }
  return x;
}

std::string_view to_string(ActivationKind kind) noexcept {
  switch (kind) {
    case ActivationKind::ReLU:
      return "relu";
    case ActivationKind::Tanh:
      return "tanh";
    case ActivationKind::Logistic:
      return "logistic";
    case ActivationKind::Identity:
      break;
  }
  return "identity";
}

ActivationKind parse_activation(std::string_view name) {
  if (name == "relu") return ActivationKind::ReLU;
  if (name == "tanh") return ActivationKind::Tanh;
  if (name == "logistic") return ActivationKind::Logistic;
  if (name == "identity") return ActivationKind::Identity;
  throw ValidationError("unknown activation '" + std::string(name) + "'");
}

Architecture::Architecture(std::vector<std::size_t> widths, std::vector<ActivationKind> activations)
    : widths_(std::move(widths)), activations_(std::move(activations)) {
  if (activations_.empty()) throw ParameterError("architecture needs at least one layer");
  if (widths_.size() != activations_.size() + 1) {
    throw ParameterError("architecture with " + std::to_string(activations_.size()) +
                         " layers needs " + std::to_string(activations_.size() + 1) +
                         " widths, got " + std::to_string(widths_.size()));
  }
  if (std::ranges::any_of(widths_, [](std::size_t n) { return n == 0; })) {
    throw ParameterError("layer widths must be >= 1");
  }
}

Architecture Architecture::uniform(std::vector<std::size_t> widths, ActivationKind kind) {
  const std::size_t depth = widths.empty() ? 0 : widths.size() - 1;
  return Architecture(std::move(widths), std::vector<ActivationKind>(depth, kind));
}

std::size_t Architecture::n_max() const noexcept {
  return widths_.empty() ? 0 : *std::ranges::max_element(widths_);
}

std::size_t Architecture::weight_count() const noexcept {
  std::size_t total = 0;
  for (std::size_t i = 1; i < widths_.size(); ++i) total += widths_[i - 1] * widths_[i];
  return total;
}

double Architecture::lambda_max() const noexcept {
  double best = 0.0;
  for (auto kind : activations_) best = std::max(best, lipschitz(kind));
  return best;
}

bool Architecture::all_relu() const noexcept {
  return std::ranges::all_of(activations_,
                             [](ActivationKind k) { return k == ActivationKind::ReLU; });
}

TargetNetwork::TargetNetwork(Architecture arch, std::vector<Matrix> weights, double w_max)
    : arch_(std::move(arch)), weights_(std::move(weights)), w_max_(w_max) {
  if (!(w_max_ > 0.0) || !std::isfinite(w_max_)) throw ParameterError("w_max must be positive");
  if (weights_.size() != arch_.depth()) {
    throw DimensionError("expected " + std::to_string(arch_.depth()) + " weight matrices, got " +
                         std::to_string(weights_.size()));
  }
  for (std::size_t i = 1; i <= arch_.depth(); ++i) {
    const Matrix& w = weights_[i - 1];
    if (w.rows() != arch_.width(i) || w.cols() != arch_.width(i - 1)) {
      throw DimensionError("layer " + std::to_string(i) + " weights are " +
                           std::to_string(w.rows()) + "x" + std::to_string(w.cols()) +
                           ", expected " + std::to_string(arch_.width(i)) + "x" +
                           std::to_string(arch_.width(i - 1)));
    }
    for (double v : w.data()) {
      if (!std::isfinite(v) || std::abs(v) > w_max_) {
        throw RangeError("layer " + std::to_string(i) + " has weight " + std::to_string(v) +
                         " outside [-w_max, w_max]");
      }
    }
  }
}

InputDomain::InputDomain(std::size_t dim, std::vector<Vector> xs)
    : dimension(dim), samples(std::move(xs)) {
  for (const auto& x : samples) {
    if (x.size() != dimension) {
      throw DimensionError("input of length " + std::to_string(x.size()) +
                           " in a domain of dimension " + std::to_string(dimension));
    }
  }
}

std::vector<Vector> forward_trace(const TargetNetwork& net, std::span<const double> x) {
  const auto& arch = net.arch();
  if (x.size() != arch.width(0)) {
    throw DimensionError("input has length " + std::to_string(x.size()) + ", network expects " +
                         std::to_string(arch.width(0)));
  }
  std::vector<Vector> trace;
  trace.reserve(arch.depth() + 1);
  trace.emplace_back(x.begin(), x.end());
  for (std::size_t i = 1; i <= arch.depth(); ++i) {
    Vector y = multiply(net.layer(i), trace.back());
    const auto kind = arch.activation(i);
    for (double& v : y) v = activate(kind, v);
    trace.push_back(std::move(y));
  }
  return trace;
}

Vector forward(const TargetNetwork& net, std::span<const double> x) {
  auto trace = forward_trace(net, x);
  return std::move(trace.back());
}

double f_max(const TargetNetwork& net, const InputDomain& domain) {
  if (domain.samples.empty()) throw ParameterError("f_max needs a non-empty input domain");
  double best = 0.0;
  for (const auto& x : domain.samples) {
    const auto trace = forward_trace(net, x);
    // Entries 0..l-1: inputs and hidden layers, never the output.
    for (std::size_t i = 0; i + 1 < trace.size(); ++i) {
      for (double v : trace[i]) best = std::max(best, std::abs(v));
    }
  }
  return best;
}

double sup_error(const TargetNetwork& f, const TargetNetwork& g, const InputDomain& domain) {
  double worst = 0.0;
  for (const auto& x : domain.samples) {
    const Vector a = forward(f, x);
    const Vector b = forward(g, x);
    if (a.size() != b.size()) throw DimensionError("networks have different output widths");
    double acc = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) acc += (a[j] - b[j]) * (a[j] - b[j]);
    worst = std::max(worst, std::sqrt(acc));
  }
  return worst;
}

}  // namespace sltk
