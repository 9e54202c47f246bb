#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sltk/matrix.hpp"

// Networks in this library are fully connected and bias-free: every layer
// computes sigma_i(W_i * y) with no additive term.

namespace sltk {

enum class ActivationKind { ReLU, Tanh, Logistic, Identity };

/// Lipschitz factor of the activation: 1 for ReLU, tanh and identity,
/// 1/4 for the logistic sigmoid.
[[nodiscard]] double lipschitz(ActivationKind kind) noexcept;

[[nodiscard]] double activate(ActivationKind kind, double x) noexcept;

[[nodiscard]] std::string_view to_string(ActivationKind kind) noexcept;

/// Parses "relu", "tanh", "logistic" or "identity". Throws ValidationError.
[[nodiscard]] ActivationKind parse_activation(std::string_view name);

/// Layer count, width profile n_0..n_l and per-layer activations.
class Architecture {
 public:
  Architecture() = default;
  Architecture(std::vector<std::size_t> widths, std::vector<ActivationKind> activations);

  /// Uniform activation for every layer.
  static Architecture uniform(std::vector<std::size_t> widths, ActivationKind kind);

  [[nodiscard]] std::size_t depth() const noexcept { return activations_.size(); }
  [[nodiscard]] const std::vector<std::size_t>& widths() const noexcept { return widths_; }
  [[nodiscard]] std::size_t width(std::size_t i) const { return widths_.at(i); }
  [[nodiscard]] const std::vector<ActivationKind>& activations() const noexcept {
    return activations_;
  }
  /// Activation of layer i, 1-based like the widths (layer 1 is the first weight layer).
  [[nodiscard]] ActivationKind activation(std::size_t i) const { return activations_.at(i - 1); }

  [[nodiscard]] std::size_t n_max() const noexcept;
  /// Total number of connection weights, sum_i n_{i-1} n_i.
  [[nodiscard]] std::size_t weight_count() const noexcept;
  [[nodiscard]] double lambda_max() const noexcept;
  [[nodiscard]] bool all_relu() const noexcept;

  friend bool operator==(const Architecture&, const Architecture&) = default;

 private:
  std::vector<std::size_t> widths_;
  std::vector<ActivationKind> activations_;
};

/// A target network F: one n_i x n_{i-1} matrix per layer, entries in [-w_max, w_max].
class TargetNetwork {
 public:
  TargetNetwork() = default;
  TargetNetwork(Architecture arch, std::vector<Matrix> weights, double w_max);

  [[nodiscard]] const Architecture& arch() const noexcept { return arch_; }
  [[nodiscard]] const std::vector<Matrix>& weights() const noexcept { return weights_; }
  /// Weight matrix of layer i (1-based).
  [[nodiscard]] const Matrix& layer(std::size_t i) const { return weights_.at(i - 1); }
  [[nodiscard]] double w_max() const noexcept { return w_max_; }

 private:
  Architecture arch_;
  std::vector<Matrix> weights_;
  double w_max_ = 1.0;
};

/// Finite sample of the inputs of interest.
struct InputDomain {
  std::size_t dimension = 0;
  std::vector<Vector> samples;

  InputDomain() = default;
  InputDomain(std::size_t dim, std::vector<Vector> xs);
};

/// F_l(x). Throws DimensionError if x has the wrong length.
[[nodiscard]] Vector forward(const TargetNetwork& net, std::span<const double> x);

/// F_0(x) = x, F_1(x), ..., F_l(x).
[[nodiscard]] std::vector<Vector> forward_trace(const TargetNetwork& net, std::span<const double> x);

/// Largest |activation| over the inputs and every hidden layer (the output
/// layer is excluded), maximized over the domain.
[[nodiscard]] double f_max(const TargetNetwork& net, const InputDomain& domain);

/// sup over the domain of ||F(x) - G(x)||_2 for two networks on the same input space.
[[nodiscard]] double sup_error(const TargetNetwork& f, const TargetNetwork& g,
                               const InputDomain& domain);

}  // namespace sltk
