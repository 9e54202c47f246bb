#include "sltk/construction.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "sltk/decomposition.hpp"
#include "sltk/error.hpp"
#include "sltk/numeric.hpp"
#include "sltk/random.hpp"

namespace sltk {

namespace {

constexpr double kMaxLayerWeights = 5e7;

double product_scale(const RangeSpec& range, double gamma) { return range.beta_prime / gamma; }

int sign_of(double v) { return v > 0.0 ? 1 : (v < 0.0 ? -1 : 0); }

std::string slot_name(Side side, int interval) {
  return std::string(to_string(side)) + " interval " + std::to_string(interval);
}

// Decomposition settings shared by both pruning modes: accuracy eps_w/2 per side.
GrdParams pruning_params(const LargeNetwork& g) { return GrdParams::make(g.eps_w / 2.0, g.w_max); }

void check_compatible(const LargeNetwork& g, const TargetNetwork& f, PruneMode mode) {
  if (!(g.target_arch == f.arch())) {
    throw DimensionError("large network was built for a different architecture");
  }
  if (g.mode != mode) {
    throw ParameterError("large network was built for mode " + std::string(to_string(g.mode)));
  }
  if (f.w_max() > g.w_max) {
    throw ParameterError("target w_max exceeds the w_max the large network was built for");
  }
}

struct LayerMasks {
  std::vector<Mask> in;
  std::vector<Mask> out;
};

LayerMasks empty_masks(const LargeNetwork& g) {
  LayerMasks masks;
  for (std::size_t i = 0; i < g.M.size(); ++i) {
    masks.in.emplace_back(g.in_weights[i].rows(), g.in_weights[i].cols());
    masks.out.emplace_back(g.out_weights[i].rows(), g.out_weights[i].cols());
  }
  return masks;
}

void keep(LayerMasks& masks, std::size_t layer, std::size_t z, std::size_t j1, std::size_t j2) {
  masks.in[layer - 1].set(z, j2);
  masks.out[layer - 1].set(j1, z);
}

}  // namespace

std::string_view to_string(PruneMode mode) noexcept {
  return mode == PruneMode::Batch ? "thm1" : "recycle";
}

PruneMode parse_prune_mode(std::string_view name) {
  if (name == "thm1") return PruneMode::Batch;
  if (name == "recycle") return PruneMode::Recycle;
  throw ValidationError("unknown prune mode '" + std::string(name) + "'");
}

std::string_view to_string(Side side) noexcept { return side == Side::Plus ? "plus" : "minus"; }

std::size_t Mask::count() const noexcept {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

std::int64_t recycle_pool_size(const Architecture& arch, double eps_w, double delta, double w_max) {
  if (!(delta > 0.0 && delta < 1.0)) throw ParameterError("delta must lie in (0, 1)");
  const double k_prime = sampling_k_prime(eps_w, w_max);
  const double delta_w = delta / (2.0 * static_cast<double>(arch.weight_count()));
  return std::max<std::int64_t>(1, guarded_ceil(8.0 * k_prime * std::log(k_prime / delta_w)));
}

std::vector<std::int64_t> recycle_layer_neurons(const Architecture& arch, double eps_w, double delta,
                                                double w_max) {
  const std::int64_t m = recycle_pool_size(arch, eps_w, delta, w_max);
  const std::int64_t k = sampling_k(eps_w, w_max);
  const auto& w = arch.widths();
  std::vector<std::int64_t> out;
  for (std::size_t i = 1; i < w.size(); ++i) {
    const auto wide = static_cast<std::int64_t>(std::max(w[i], w[i - 1]));
    const auto pairs = static_cast<std::int64_t>(w[i] * w[i - 1]);
    out.push_back(wide * m + 2 * std::max<std::int64_t>(k - 1, 0) * pairs);
  }
  return out;
}

LargePlan plan_large(const Architecture& arch, const BuildConfig& cfg) {
  const BoundInputs inputs{arch, cfg.eps, cfg.delta, cfg.w_max, cfg.f_max, cfg.spectral};
  LargePlan plan;
  plan.eps_w = epsilon_w(inputs);
  plan.range = ranges_for_accuracy(plan.eps_w, cfg.w_max);
  plan.M = cfg.mode == PruneMode::Batch ? layer_samples_thm1(inputs, plan.eps_w)
                                        : recycle_layer_neurons(arch, plan.eps_w, cfg.delta, cfg.w_max);
  return plan;
}

LargeNetwork build_large(const Architecture& arch, const BuildConfig& cfg) {
  if (!arch.all_relu()) throw UnsupportedError("the large network construction needs ReLU layers");
  const LargePlan plan = plan_large(arch, cfg);

  LargeNetwork g;
  g.target_arch = arch;
  g.mode = cfg.mode;
  g.seed = cfg.seed;
  g.w_max = cfg.w_max;
  g.eps = cfg.eps;
  g.delta = cfg.delta;
  g.eps_w = plan.eps_w;
  g.range = plan.range;

  const auto& counts = plan.M;
  const SignedHyperbolicDist dist(g.range.weight_dist());
  for (std::size_t i = 1; i <= arch.depth(); ++i) {
    const std::size_t n_in = arch.width(i - 1);
    const std::size_t n_out = arch.width(i);
    const auto m_i = counts[i - 1];
    if (static_cast<double>(m_i) * static_cast<double>(n_in + n_out) > kMaxLayerWeights) {
      throw ResourceError("layer " + std::to_string(i) + " would need " + std::to_string(m_i) +
                          " intermediate neurons");
    }
    const auto m = static_cast<std::size_t>(m_i);
    g.M.push_back(m);

    const Stream in_stream(cfg.seed, "in", i);
    Matrix in(m, n_in);
    for (std::size_t z = 0; z < m; ++z) {
      for (std::size_t j = 0; j < n_in; ++j) {
        const std::uint64_t c = z * n_in + j;
        in(z, j) = sample_signed(dist, in_stream.uniform(c), in_stream.coin(c));
      }
    }
    const Stream out_stream(cfg.seed, "out", i);
    Matrix out(n_out, m);
    for (std::size_t j = 0; j < n_out; ++j) {
      for (std::size_t z = 0; z < m; ++z) {
        const std::uint64_t c = j * m + z;
        out(j, z) = sample_signed(dist, out_stream.uniform(c), out_stream.coin(c));
      }
    }
    g.in_weights.push_back(std::move(in));
    g.out_weights.push_back(std::move(out));
  }
  return g;
}

ProductCategory categorize_product(double out_w, double in_w, int w_star_sign,
                                   const RangeSpec& range, double gamma, int k) {
  ProductCategory cat;
  const int in_sign = sign_of(in_w);
  if (out_w == 0.0 || in_sign == 0 || w_star_sign == 0) return cat;
  if (out_w > 0.0 && in_sign == w_star_sign) {
    cat.side = Side::Plus;
  } else if (out_w < 0.0 && in_sign == -w_star_sign) {
    cat.side = Side::Minus;
  } else {
    return cat;
  }
  cat.interval = interval_index(std::abs(out_w * in_w) / product_scale(range, gamma), gamma, k);
  return cat;
}

PruneResult prune_batch(const LargeNetwork& g, const TargetNetwork& f) {
  check_compatible(g, f, PruneMode::Batch);
  const GrdParams params = pruning_params(g);
  const double scale = product_scale(g.range, params.gamma);
  const auto k = static_cast<std::size_t>(params.k);
  const double skip = g.eps_w / 2.0;

  LayerMasks masks = empty_masks(g);
  std::vector<std::size_t> consumed;

  for (std::size_t i = 1; i <= g.target_arch.depth(); ++i) {
    const Matrix& target = f.layer(i);
    const Matrix& a = g.in_weights[i - 1];
    const Matrix& b = g.out_weights[i - 1];
    const std::size_t m = g.M[i - 1];

    struct Pair {
      std::size_t j1, j2;
      int sign;
    };
    std::vector<Pair> pairs;
    for (std::size_t j1 = 0; j1 < target.rows(); ++j1) {
      for (std::size_t j2 = 0; j2 < target.cols(); ++j2) {
        if (std::abs(target(j1, j2)) > skip) pairs.push_back({j1, j2, sign_of(target(j1, j2))});
      }
    }

    std::vector<std::optional<std::size_t>> slots(pairs.size() * 2 * k);
    std::size_t open = slots.size();
    std::size_t scanned = 0;
    for (std::size_t z = 0; z < m && open > 0; ++z) {
      scanned = z + 1;
      for (std::size_t p = 0; p < pairs.size(); ++p) {
        const auto cat = categorize_product(b(pairs[p].j1, z), a(z, pairs[p].j2), pairs[p].sign,
                                            g.range, params.gamma, params.k);
        if (!cat.side || !cat.interval) continue;
        const std::size_t side = *cat.side == Side::Plus ? 0 : 1;
        auto& slot = slots[(p * 2 + side) * k + static_cast<std::size_t>(*cat.interval - 1)];
        if (!slot) {
          slot = z;
          --open;
          break;
        }
      }
    }
    for (std::size_t s = 0; open > 0 && s < slots.size(); ++s) {
      if (slots[s]) continue;
      const Pair& pair = pairs[s / (2 * k)];
      const Side side = (s / k) % 2 == 0 ? Side::Plus : Side::Minus;
      const int interval = static_cast<int>(s % k) + 1;
      throw PruningFailure(i, pair.j1, pair.j2, slot_name(side, interval),
                           "layer " + std::to_string(i) + ": no neuron for weight (" +
                               std::to_string(pair.j1) + ", " + std::to_string(pair.j2) + "), " +
                               slot_name(side, interval));
    }

    std::vector<double> samples(k);
    for (std::size_t p = 0; p < pairs.size(); ++p) {
      const auto [j1, j2, sign] = pairs[p];
      const double w = std::min(1.0, std::abs(target(j1, j2)) / scale);
      for (std::size_t side = 0; side < 2; ++side) {
        const std::size_t base = (p * 2 + side) * k;
        for (std::size_t s = 0; s < k; ++s) {
          const std::size_t z = *slots[base + s];
          samples[s] = std::abs(b(j1, z) * a(z, j2)) / scale;
        }
        const auto result = grd_decompose(w, samples, params);
        for (std::size_t s = 0; s < k; ++s) {
          if (result.mask[s]) keep(masks, i, *slots[base + s], j1, j2);
        }
      }
    }
    consumed.push_back(scanned);
  }
  return prune_result_from_masks(g, std::move(masks.in), std::move(masks.out), std::move(consumed));
}

PruneResult prune_recycle(const LargeNetwork& g, const TargetNetwork& f) {
  check_compatible(g, f, PruneMode::Recycle);
  const GrdParams params = pruning_params(g);
  const double scale = product_scale(g.range, params.gamma);
  const double skip = g.eps_w / 2.0;
  const auto pool_size =
      static_cast<std::size_t>(recycle_pool_size(g.target_arch, g.eps_w, g.delta, g.w_max));

  LayerMasks masks = empty_masks(g);
  std::vector<std::size_t> consumed;

  for (std::size_t i = 1; i <= g.target_arch.depth(); ++i) {
    const Matrix& target = f.layer(i);
    const Matrix& a = g.in_weights[i - 1];
    const Matrix& b = g.out_weights[i - 1];
    const std::size_t m = g.M[i - 1];
    const std::size_t n_in = target.cols();
    const std::size_t n_out = target.rows();
    const bool swapped = n_in > n_out;
    const std::size_t outer = std::max(n_in, n_out);
    const std::size_t inner = std::min(n_in, n_out);

    std::vector<std::uint8_t> seen_in(m * n_in, 0);
    std::vector<std::uint8_t> seen_out(n_out * m, 0);
    std::size_t next = 0;
    std::vector<std::size_t> pool;

    for (std::size_t j = 0; j < outer; ++j) {
      for (std::size_t d = 0; d < inner; ++d) {
        const std::size_t idx_in = swapped ? (d + j + 1) % n_in : d;
        const std::size_t idx_out = swapped ? d : (d + j + 1) % n_out;
        auto take = [&] {
          if (next >= m) {
            throw PruningFailure(i, idx_out, idx_in, "pool",
                                 "layer " + std::to_string(i) + " ran out of fresh neurons");
          }
          return next++;
        };
        if (d == 0) pool.clear();
        while (pool.size() < pool_size) pool.push_back(take());

        const double w_star = target(idx_out, idx_in);
        if (std::abs(w_star) <= skip) continue;
        const int sign = sign_of(w_star);
        const double w = std::min(1.0, std::abs(w_star) / scale);

        std::vector<std::uint8_t> used(pool.size(), 0);
        for (const Side side : {Side::Plus, Side::Minus}) {
          std::vector<double> samples;
          std::vector<std::size_t> owner;
          for (std::size_t q = 0; q < pool.size(); ++q) {
            const std::size_t z = pool[q];
            const auto cat =
                categorize_product(b(idx_out, z), a(z, idx_in), sign, g.range, params.gamma, params.k);
            if (cat.side != side) continue;
            samples.push_back(std::abs(b(idx_out, z) * a(z, idx_in)) / scale);
            owner.push_back(q);
          }
          DecompositionResult result;
          try {
            result = grd_decompose(w, samples, params);
          } catch (const CoverageError& e) {
            throw PruningFailure(i, idx_out, idx_in, slot_name(side, e.interval()),
                                 "layer " + std::to_string(i) + ": no sample for weight (" +
                                     std::to_string(idx_out) + ", " + std::to_string(idx_in) +
                                     "), " + slot_name(side, e.interval()));
          }
          for (std::size_t s = 0; s < samples.size(); ++s) {
            if (result.mask[s]) used[owner[s]] = 1;
          }
        }

        std::vector<std::size_t> survivors;
        for (std::size_t q = 0; q < pool.size(); ++q) {
          const std::size_t z = pool[q];
          auto& in_flag = seen_in[z * n_in + idx_in];
          auto& out_flag = seen_out[idx_out * m + z];
          if (in_flag || out_flag) {
            throw std::logic_error("recycling read a weight entry twice");
          }
          in_flag = 1;
          out_flag = 1;
          if (used[q]) {
            keep(masks, i, z, idx_out, idx_in);
          } else {
            survivors.push_back(z);
          }
        }
        pool = std::move(survivors);
      }
    }
    consumed.push_back(next);
  }
  return prune_result_from_masks(g, std::move(masks.in), std::move(masks.out), std::move(consumed));
}

PruneResult prune(const LargeNetwork& g, const TargetNetwork& f) {
  return g.mode == PruneMode::Batch ? prune_batch(g, f) : prune_recycle(g, f);
}

PruneResult prune_result_from_masks(const LargeNetwork& g, std::vector<Mask> in_mask,
                                    std::vector<Mask> out_mask,
                                    std::vector<std::size_t> neurons_consumed) {
  const std::size_t depth = g.target_arch.depth();
  if (in_mask.size() != depth || out_mask.size() != depth) {
    throw DimensionError("one in-mask and one out-mask per layer expected");
  }
  const GrdParams params = pruning_params(g);
  const double scale = product_scale(g.range, params.gamma);

  PruneResult p;
  for (std::size_t i = 1; i <= depth; ++i) {
    const Matrix& a = g.in_weights[i - 1];
    const Matrix& b = g.out_weights[i - 1];
    const Mask& in = in_mask[i - 1];
    const Mask& out = out_mask[i - 1];
    if (in.rows() != a.rows() || in.cols() != a.cols() || out.rows() != b.rows() ||
        out.cols() != b.cols()) {
      throw DimensionError("mask shape does not match layer " + std::to_string(i));
    }
    Matrix plus(b.rows(), a.cols());
    Matrix minus(b.rows(), a.cols());
    for (std::size_t z = 0; z < a.rows(); ++z) {
      std::size_t n_in = 0;
      std::size_t n_out = 0;
      std::size_t j1 = 0;
      std::size_t j2 = 0;
      for (std::size_t c = 0; c < in.cols(); ++c) {
        if (in(z, c)) ++n_in, j2 = c;
      }
      for (std::size_t r = 0; r < out.rows(); ++r) {
        if (out(r, z)) ++n_out, j1 = r;
      }
      if (n_in == 0 && n_out == 0) continue;
      if (n_in != 1 || n_out != 1) {
        throw ValidationError("layer " + std::to_string(i) + " neuron " + std::to_string(z) +
                              " keeps " + std::to_string(n_in) + " in- and " +
                              std::to_string(n_out) + " out-connections");
      }
      const double product = b(j1, z) * a(z, j2);
      const Side side = b(j1, z) > 0.0 ? Side::Plus : Side::Minus;
      const auto interval = interval_index(std::abs(product) / scale, params.gamma, params.k);
      p.assignments.push_back({i, j1, j2, side, interval.value_or(0), z});
      (side == Side::Plus ? plus : minus)(j1, j2) += product;
    }
    p.virtual_plus.push_back(std::move(plus));
    p.virtual_minus.push_back(std::move(minus));
  }
  p.in_mask = std::move(in_mask);
  p.out_mask = std::move(out_mask);
  p.neurons_consumed = std::move(neurons_consumed);
  return p;
}

PrunedNetwork::PrunedNetwork(const LargeNetwork& g, const PruneResult& p)
    : widths_(g.target_arch.widths()) {
  const std::size_t depth = g.target_arch.depth();
  if (p.in_mask.size() != depth || p.out_mask.size() != depth) {
    throw DimensionError("prune result does not match the large network depth");
  }
  for (std::size_t i = 0; i < depth; ++i) {
    const Matrix& a = g.in_weights[i];
    const Matrix& b = g.out_weights[i];
    const Mask& in = p.in_mask[i];
    const Mask& out = p.out_mask[i];
    if (in.rows() != a.rows() || in.cols() != a.cols() || out.rows() != b.rows() ||
        out.cols() != b.cols()) {
      throw DimensionError("mask shape does not match layer " + std::to_string(i + 1));
    }
    std::vector<Neuron> neurons;
    for (std::size_t z = 0; z < a.rows(); ++z) {
      Neuron n;
      for (std::size_t c = 0; c < a.cols(); ++c) {
        if (in(z, c)) n.ins.push_back({c, a(z, c)});
      }
      for (std::size_t r = 0; r < b.rows(); ++r) {
        if (out(r, z)) n.outs.push_back({r, b(r, z)});
      }
      if (!n.ins.empty() && !n.outs.empty()) neurons.push_back(std::move(n));
    }
    layers_.push_back(std::move(neurons));
  }
}

Vector PrunedNetwork::evaluate(std::span<const double> x) const {
  if (x.size() != widths_.front()) {
    throw DimensionError("input has length " + std::to_string(x.size()) + ", expected " +
                         std::to_string(widths_.front()));
  }
  Vector y(x.begin(), x.end());
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    Vector next(widths_[i + 1], 0.0);
    for (const Neuron& n : layers_[i]) {
      double pre = 0.0;
      for (const Edge& e : n.ins) pre += e.weight * y[e.index];
      if (pre <= 0.0) continue;
      for (const Edge& e : n.outs) next[e.index] += e.weight * pre;
    }
    for (double& v : next) v = std::max(v, 0.0);
    y = std::move(next);
  }
  return y;
}

std::size_t PrunedNetwork::kept_neurons() const noexcept {
  std::size_t total = 0;
  for (const auto& layer : layers_) total += layer.size();
  return total;
}

Vector evaluate_pruned(const LargeNetwork& g, const PruneResult& p, std::span<const double> x) {
  return PrunedNetwork(g, p).evaluate(x);
}

double pruned_path_response(const LargeNetwork& g, const PruneResult& p, std::size_t layer,
                            std::size_t j1, std::size_t j2, double y) {
  if (layer < 1 || layer > g.target_arch.depth()) throw DimensionError("layer out of range");
  const Matrix& a = g.in_weights[layer - 1];
  const Matrix& b = g.out_weights[layer - 1];
  if (j1 >= b.rows() || j2 >= a.cols()) throw DimensionError("weight index out of range");
  const Mask& in = p.in_mask.at(layer - 1);
  const Mask& out = p.out_mask.at(layer - 1);
  double total = 0.0;
  for (std::size_t z = 0; z < a.rows(); ++z) {
    if (in(z, j2) && out(j1, z)) total += b(j1, z) * std::max(0.0, a(z, j2) * y);
  }
  return total;
}

VerifyReport verify_sup_error(const TargetNetwork& f, const LargeNetwork& g, const PruneResult& p,
                              const InputDomain& domain, double eps) {
  const PrunedNetwork pruned(g, p);
  VerifyReport report;
  report.eps_target = eps;
  report.num_inputs = domain.samples.size();
  for (const Vector& x : domain.samples) {
    const Vector want = forward(f, x);
    const Vector got = pruned.evaluate(x);
    Vector diff(want.size());
    for (std::size_t j = 0; j < want.size(); ++j) diff[j] = want[j] - got[j];
    report.sup_error = std::max(report.sup_error, l2_norm(diff));
  }
  for (std::size_t i = 0; i < p.virtual_plus.size(); ++i) {
    const Matrix& plus = p.virtual_plus[i];
    const Matrix& minus = p.virtual_minus[i];
    Matrix combined(plus.rows(), plus.cols());
    for (std::size_t r = 0; r < plus.rows(); ++r) {
      for (std::size_t c = 0; c < plus.cols(); ++c) {
        combined(r, c) = std::max(std::abs(plus(r, c)), std::abs(minus(r, c)));
      }
    }
    report.per_layer_spectral.push_back(spectral_norm(combined));
  }
  return report;
}

std::vector<double> dominating_spectral_norms(const TargetNetwork& f) {
  std::vector<double> norms;
  for (const Matrix& w : f.weights()) norms.push_back(spectral_norm(abs(w)));
  return norms;
}

}  // namespace sltk
