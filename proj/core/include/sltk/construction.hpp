#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "sltk/bounds.hpp"
#include "sltk/matrix.hpp"
#include "sltk/network.hpp"
#include "sltk/sampling.hpp"

// The large network G replaces every target layer i by two ReLU layers:
// an intermediate layer of M_i neurons fed by in_weights (M_i x n_{i-1})
// and the target-width layer fed by out_weights (n_i x M_i). Pruning keeps,
// for each target weight w*, a few intermediate neurons with one in- and one
// out-connection each. Neurons whose kept out-weight is positive form the
// "plus" side, the others the "minus" side, and since
// x = relu(x) - relu(-x) the two sides together carry w* for inputs of
// either sign.

namespace sltk {

enum class PruneMode { Batch, Recycle };

[[nodiscard]] std::string_view to_string(PruneMode mode) noexcept;
/// "thm1" or "recycle". Throws ValidationError.
[[nodiscard]] PruneMode parse_prune_mode(std::string_view name);

enum class Side { Plus, Minus };

[[nodiscard]] std::string_view to_string(Side side) noexcept;

struct BuildConfig {
  double eps = 0.1;
  double delta = 0.1;
  double w_max = 1.0;
  double f_max = 1.0;
  SpectralMode spectral;
  PruneMode mode = PruneMode::Batch;
  std::uint64_t seed = 0;
};

struct LargeNetwork {
  Architecture target_arch;
  PruneMode mode = PruneMode::Batch;
  std::vector<std::size_t> M;
  std::vector<Matrix> in_weights;
  std::vector<Matrix> out_weights;
  RangeSpec range;
  std::uint64_t seed = 0;
  double w_max = 1.0;
  double eps = 0.0;
  double delta = 0.0;
  double eps_w = 0.0;
};

/// Binary matrix stored one byte per entry, row-major.
class Mask {
 public:
  Mask() = default;
  Mask(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), bits_(rows * cols, 0) {}

  [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
  [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
  [[nodiscard]] bool operator()(std::size_t r, std::size_t c) const noexcept {
    return bits_[r * cols_ + c] != 0;
  }
  void set(std::size_t r, std::size_t c, bool on = true) noexcept {
    bits_[r * cols_ + c] = on ? 1 : 0;
  }
  [[nodiscard]] std::size_t count() const noexcept;
  [[nodiscard]] std::span<const std::uint8_t> bytes() const noexcept { return bits_; }

  friend bool operator==(const Mask&, const Mask&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::uint8_t> bits_;
};

/// One kept intermediate neuron. Indices are 0-based; `layer` is 1-based.
struct Assignment {
  std::size_t layer = 0;
  std::size_t j1 = 0;  // target output index
  std::size_t j2 = 0;  // target input index
  Side side = Side::Plus;
  int interval = 0;    // decomposition interval of the product weight
  std::size_t neuron = 0;

  friend bool operator==(const Assignment&, const Assignment&) = default;
};

struct PruneResult {
  std::vector<Mask> in_mask;
  std::vector<Mask> out_mask;
  std::vector<Assignment> assignments;
  std::vector<Matrix> virtual_plus;
  std::vector<Matrix> virtual_minus;
  /// Intermediate neurons drawn per layer (scan length for batch pruning,
  /// fresh neurons taken into the pool for recycling).
  std::vector<std::size_t> neurons_consumed;
};

struct VerifyReport {
  double sup_error = 0.0;
  double eps_target = 0.0;
  std::size_t num_inputs = 0;
  std::vector<double> per_layer_spectral;
};

/// Per-layer ReLU neuron counts of G in recycle mode:
/// max{n_i, n_{i-1}} m + 2 (k - 1) n_i n_{i-1}, m = ceil(8 k' ln(k'/delta_w)),
/// delta_w = delta / (2 N_F).
[[nodiscard]] std::vector<std::int64_t> recycle_layer_neurons(const Architecture& arch,
                                                              double eps_w, double delta,
                                                              double w_max);

/// Pool size m of the recycling scheme.
[[nodiscard]] std::int64_t recycle_pool_size(const Architecture& arch, double eps_w, double delta,
                                             double w_max);

/// Sizes of G without sampling it: eps_w, weight ranges and per-layer
/// neuron counts (batch counts in batch mode, recycle_layer_neurons otherwise).
struct LargePlan {
  double eps_w = 0.0;
  RangeSpec range;
  std::vector<std::int64_t> M;
};

[[nodiscard]] LargePlan plan_large(const Architecture& arch, const BuildConfig& cfg);

/// Samples G for the given target architecture. eps_w comes from the bounds
/// module with the configured spectral mode and F_max. Weight (z, j) of the
/// in-matrix of layer i uses counter z n_{i-1} + j of stream (seed, "in", i);
/// out-weight (j, z) uses counter j M_i + z of stream (seed, "out", i).
/// Throws UnsupportedError for non-ReLU architectures and ResourceError if
/// a layer would exceed 5e7 weights.
[[nodiscard]] LargeNetwork build_large(const Architecture& arch, const BuildConfig& cfg);

struct ProductCategory {
  std::optional<Side> side;
  std::optional<int> interval;
};

/// Sign pattern and magnitude interval of the product out_w * in_w for a
/// target weight of sign w_star_sign (+1 or -1). Plus: out_w > 0 and
/// sgn(in_w) = w_star_sign. Minus: out_w < 0 and sgn(in_w) = -w_star_sign.
/// The interval is interval_index(|out_w in_w| / (beta'/gamma), gamma, k).
[[nodiscard]] ProductCategory categorize_product(double out_w, double in_w, int w_star_sign,
                                                 const RangeSpec& range, double gamma, int k);

/// Batch pruning: per layer, fills one slot per (weight, side, interval)
/// by scanning neurons in index order and giving each to the first open slot
/// it fits (weights in row-major order), then runs the decomposition per
/// weight and side. Weights with |w*| <= eps_w/2 stay empty.
/// Throws PruningFailure if a slot stays open.
[[nodiscard]] PruneResult prune_batch(const LargeNetwork& g, const TargetNetwork& f);

/// Recycling pruning: a pool of m neurons is refreshed for every step of the
/// outer loop over the wider side; inner step d handles the weight at
/// (idx_out, idx_in) = ((d + j + 1) mod n_i, d) (0-based, roles swapped when
/// n_{i-1} > n_i) and only reads those two entries of each pool neuron.
/// Neurons used by either side leave the pool and are replaced with fresh
/// ones before the next inner step. Throws PruningFailure on missing
/// interval coverage or when the layer runs out of fresh neurons.
[[nodiscard]] PruneResult prune_recycle(const LargeNetwork& g, const TargetNetwork& f);

/// Dispatches on g.mode.
[[nodiscard]] PruneResult prune(const LargeNetwork& g, const TargetNetwork& f);

/// Rebuilds assignments and virtual weights from masks. Every neuron with
/// any kept connection must keep exactly one in- and one out-connection.
[[nodiscard]] PruneResult prune_result_from_masks(const LargeNetwork& g, std::vector<Mask> in_mask,
                                                  std::vector<Mask> out_mask,
                                                  std::vector<std::size_t> neurons_consumed);

/// Sparse view of the masked 2l-layer network for repeated evaluation.
class PrunedNetwork {
 public:
  PrunedNetwork(const LargeNetwork& g, const PruneResult& p);

  [[nodiscard]] Vector evaluate(std::span<const double> x) const;
  [[nodiscard]] std::size_t kept_neurons() const noexcept;

 private:
  struct Edge {
    std::size_t index;
    double weight;
  };
  struct Neuron {
    std::vector<Edge> ins;
    std::vector<Edge> outs;
  };
  std::vector<std::size_t> widths_;
  std::vector<std::vector<Neuron>> layers_;
};

/// Forward pass of the masked large network. Throws DimensionError on a
/// wrong input length or masks that do not match g.
[[nodiscard]] Vector evaluate_pruned(const LargeNetwork& g, const PruneResult& p,
                                     std::span<const double> x);

/// Response of the kept paths between input j2 and output j1 of layer
/// `layer` (1-based) to the scalar y, before the target-layer activation.
[[nodiscard]] double pruned_path_response(const LargeNetwork& g, const PruneResult& p,
                                          std::size_t layer, std::size_t j1, std::size_t j2,
                                          double y);

/// sup over the domain of ||F(x) - G_hat(x)||_2, plus the spectral norm of
/// the entrywise max(|w_hat+|, |w_hat-|) matrix of every layer.
[[nodiscard]] VerifyReport verify_sup_error(const TargetNetwork& f, const LargeNetwork& g,
                                            const PruneResult& p, const InputDomain& domain,
                                            double eps);

/// Spectral norms of |W*_i|, an upper bound on the pruned matrices' norms.
[[nodiscard]] std::vector<double> dominating_spectral_norms(const TargetNetwork& f);

}  // namespace sltk
