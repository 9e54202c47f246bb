#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "sltk/error.hpp"
#include "sltk/network.hpp"
#include "sltk/network_json.hpp"
#include "test_util.hpp"

namespace sltk {
namespace {

TargetNetwork single_layer(std::vector<double> w, std::size_t rows, std::size_t cols,
                           ActivationKind kind = ActivationKind::ReLU, double w_max = 10.0) {
  return {Architecture::uniform({cols, rows}, kind), {Matrix(rows, cols, std::move(w))}, w_max};
}

TEST(Activation, LipschitzFactors) {
  EXPECT_EQ(lipschitz(ActivationKind::ReLU), 1.0);
  EXPECT_EQ(lipschitz(ActivationKind::Tanh), 1.0);
  EXPECT_EQ(lipschitz(ActivationKind::Logistic), 0.25);
  EXPECT_EQ(lipschitz(ActivationKind::Identity), 1.0);
}

TEST(Activation, ParseNames) {
  EXPECT_EQ(parse_activation("tanh"), ActivationKind::Tanh);
  EXPECT_EQ(parse_activation("logistic"), ActivationKind::Logistic);
  EXPECT_THROW((void)parse_activation("gelu"), ValidationError);
}

TEST(Architecture, CountsAndValidation) {
  const auto arch = Architecture::uniform({3, 4, 2}, ActivationKind::ReLU);
  EXPECT_EQ(arch.depth(), 2u);
  EXPECT_EQ(arch.n_max(), 4u);
  EXPECT_EQ(arch.weight_count(), 3u * 4u + 4u * 2u);
  EXPECT_THROW(Architecture({3, 0, 2}, {ActivationKind::ReLU, ActivationKind::ReLU}), Error);
  EXPECT_THROW(Architecture({3, 4}, {ActivationKind::ReLU, ActivationKind::ReLU}), Error);
}

TEST(TargetNetwork, RejectsWeightsAboveBound) {
  EXPECT_THROW(single_layer({2.0}, 1, 1, ActivationKind::ReLU, 1.0), RangeError);
  EXPECT_THROW(TargetNetwork(Architecture::uniform({2, 1}, ActivationKind::ReLU),
                             {Matrix(2, 1)}, 1.0),
               DimensionError);
}

TEST(Forward, ReluCancels) {
  const auto net = single_layer({1.0, -1.0}, 1, 2);
  const Vector x{1.0, 1.0};
  EXPECT_EQ(forward(net, x), Vector{0.0});
}

TEST(Forward, PositivePreactivationPasses) {
  const auto net = single_layer({2.0}, 1, 1);
  const Vector x{3.0};
  EXPECT_EQ(forward(net, x), Vector{6.0});
}

TEST(Forward, WrongInputLength) {
  const auto net = single_layer({2.0}, 1, 1);
  const Vector x{1.0, 2.0};
  EXPECT_THROW((void)forward(net, x), DimensionError);
  EXPECT_THROW((void)forward_trace(net, x), DimensionError);
}

TEST(Forward, MatchesNaiveLoops) {
  std::mt19937_64 rng(7);
  const std::vector<ActivationKind> acts{ActivationKind::ReLU, ActivationKind::Tanh,
                                         ActivationKind::Logistic};
  const Architecture arch({4, 4, 4, 4}, acts);
  for (int trial = 0; trial < 20; ++trial) {
    const auto net = testing::random_network(rng, arch);
    const Vector x = testing::random_vector(rng, 4);
    std::vector<double> y(x);
    for (std::size_t l = 0; l < 3; ++l) {
      std::vector<double> z(4, 0.0);
      for (std::size_t r = 0; r < 4; ++r) {
        double s = 0.0;
        for (std::size_t c = 0; c < 4; ++c) s += net.weights()[l](r, c) * y[c];
        if (l == 0) z[r] = s > 0 ? s : 0.0;
        if (l == 1) z[r] = std::tanh(s);
        if (l == 2) z[r] = 1.0 / (1.0 + std::exp(-s));
      }
      y = z;
    }
    const Vector got = forward(net, x);
    for (std::size_t j = 0; j < 4; ++j) EXPECT_NEAR(got[j], y[j], 1e-12);
  }
}

TEST(ForwardTrace, IdentityLayer) {
  const auto net = single_layer({1.0}, 1, 1, ActivationKind::Identity);
  const Vector x{5.0};
  const auto trace = forward_trace(net, x);
  ASSERT_EQ(trace.size(), 2u);
  EXPECT_EQ(trace[0], Vector{5.0});
  EXPECT_EQ(trace[1], Vector{5.0});
}

TEST(ForwardTrace, ReluClipsNegative) {
  const TargetNetwork net(Architecture::uniform({1, 1, 1}, ActivationKind::ReLU),
                          {Matrix(1, 1, {1.0}), Matrix(1, 1, {-1.0})}, 1.0);
  const Vector x{1.0};
  const auto trace = forward_trace(net, x);
  ASSERT_EQ(trace.size(), 3u);
  EXPECT_EQ(trace[0], Vector{1.0});
  EXPECT_EQ(trace[1], Vector{1.0});
  EXPECT_EQ(trace[2], Vector{0.0});
}

TEST(ForwardTrace, LastEntryIsForward) {
  std::mt19937_64 rng(11);
  const auto arch = Architecture::uniform({3, 5, 4, 2}, ActivationKind::ReLU);
  for (int trial = 0; trial < 20; ++trial) {
    const auto net = testing::random_network(rng, arch);
    const Vector x = testing::random_vector(rng, 3);
    EXPECT_EQ(forward_trace(net, x).back(), forward(net, x));
  }
}

TEST(Forward, PositivelyHomogeneousForRelu) {
  std::mt19937_64 rng(12);
  const auto arch = Architecture::uniform({3, 6, 6, 2}, ActivationKind::ReLU);
  std::uniform_real_distribution<double> scale(0.0, 5.0);
  for (int trial = 0; trial < 50; ++trial) {
    const auto net = testing::random_network(rng, arch);
    const Vector x = testing::random_vector(rng, 3);
    const double a = scale(rng);
    Vector ax(x);
    for (double& v : ax) v *= a;
    const Vector y = forward(net, x);
    const Vector ay = forward(net, ax);
    for (std::size_t j = 0; j < y.size(); ++j) EXPECT_NEAR(ay[j], a * y[j], 1e-12 * (1 + a));
  }
}

TEST(FMax, OnlyInputsWithZeroWeights) {
  const TargetNetwork net(Architecture::uniform({2, 2}, ActivationKind::ReLU), {Matrix(2, 2)}, 1.0);
  EXPECT_EQ(f_max(net, InputDomain(2, {{1.0, -2.0}})), 2.0);
}

TEST(FMax, ExcludesOutputLayer) {
  const auto net = single_layer({3.0}, 1, 1);
  EXPECT_EQ(f_max(net, InputDomain(1, {{1.0}})), 1.0);
}

TEST(FMax, IncludesHiddenLayers) {
  const TargetNetwork net(Architecture::uniform({1, 1, 1}, ActivationKind::ReLU),
                          {Matrix(1, 1, {2.0}), Matrix(1, 1, {1.0})}, 2.0);
  EXPECT_EQ(f_max(net, InputDomain(1, {{1.0}})), 2.0);
}

TEST(FMax, EmptyDomainThrows) {
  const auto net = single_layer({3.0}, 1, 1);
  EXPECT_THROW((void)f_max(net, InputDomain(1, {})), ParameterError);
}

TEST(FMax, MonotoneInDomain) {
  std::mt19937_64 rng(13);
  const auto arch = Architecture::uniform({3, 5, 2}, ActivationKind::ReLU);
  const auto net = testing::random_network(rng, arch);
  InputDomain domain(3, {});
  double last = 0.0;
  for (int k = 0; k < 50; ++k) {
    domain.samples.push_back(testing::random_vector(rng, 3, -2.0, 2.0));
    const double now = f_max(net, domain);
    EXPECT_GE(now, last);
    last = now;
  }
}

TEST(SpectralNorm, Identity) {
  Matrix id(3, 3);
  for (std::size_t i = 0; i < 3; ++i) id(i, i) = 1.0;
  EXPECT_NEAR(spectral_norm(id), 1.0, 1e-9);
}

TEST(SpectralNorm, SingleNonzero) {
  EXPECT_NEAR(spectral_norm(Matrix(2, 2, {0.0, 2.0, 0.0, 0.0})), 2.0, 1e-9);
}

TEST(SpectralNorm, ZeroMatrix) { EXPECT_EQ(spectral_norm(Matrix(3, 2)), 0.0); }

TEST(SpectralNorm, StartVectorOrthogonalToRowSpace) {
  EXPECT_NEAR(spectral_norm(Matrix(1, 2, {1.0, -1.0})), std::sqrt(2.0), 1e-9);
}

TEST(SpectralNorm, MatchesClosedForm2x2) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    const Matrix m = testing::random_matrix(rng, 2, 2);
    const double a = m(0, 0), b = m(0, 1), c = m(1, 0), d = m(1, 1);
    // Eigenvalues of M^T M: (t +- sqrt(t^2 - 4 det^2)) / 2 with t = ||M||_F^2.
    const double t = a * a + b * b + c * c + d * d;
    const double det = a * d - b * c;
    const double disc = std::sqrt(std::max(0.0, t * t - 4.0 * det * det));
    const double want = std::sqrt((t + disc) / 2.0);
    EXPECT_NEAR(spectral_norm(m), want, 1e-8 * want) << "trial " << trial;
  }
}

TEST(SpectralNorm, SandwichedByMaxNorm) {
  std::mt19937_64 rng(19);
  std::uniform_int_distribution<std::size_t> dim(1, 12);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = dim(rng), m = dim(rng);
    const Matrix a = testing::random_matrix(rng, n, m, -3.0, 3.0);
    const double s = spectral_norm(a);
    const double mx = max_norm(a);
    EXPECT_LE(mx, s * (1 + 1e-9));
    EXPECT_LE(s, std::sqrt(static_cast<double>(n * m)) * mx * (1 + 1e-9));
  }
}

TEST(SupError, IdenticalNetworks) {
  std::mt19937_64 rng(23);
  const auto net = testing::random_network(rng, Architecture::uniform({3, 4, 2}, ActivationKind::ReLU));
  InputDomain domain(3, {testing::random_vector(rng, 3), testing::random_vector(rng, 3)});
  EXPECT_EQ(sup_error(net, net, domain), 0.0);
}

TEST(NetworkJson, RoundTrip) {
  std::mt19937_64 rng(29);
  const Architecture arch({3, 4, 2}, {ActivationKind::Tanh, ActivationKind::Logistic});
  const auto net = testing::random_network(rng, arch, 0.5);
  const auto back = parse_network_json(to_network_json(net));
  EXPECT_EQ(back.arch(), net.arch());
  EXPECT_EQ(back.w_max(), net.w_max());
  EXPECT_EQ(back.weights(), net.weights());
}

TEST(NetworkJson, StrictValidation) {
  const std::string good =
      R"({"w_max": 1, "layers": [{"rows": 1, "cols": 2, "activation": "relu", "weights": [0.5, -0.5]}]})";
  EXPECT_NO_THROW((void)parse_network_json(good));
  const char* bad[] = {
      R"({"w_max": 1, "layers": [], "extra": 0})",
      R"({"w_max": 1, "layers": [{"rows": 1, "cols": 2, "activation": "relu", "weights": [0.5]}]})",
      R"({"w_max": 1, "layers": [{"rows": 1, "cols": 2, "activation": "gelu", "weights": [0.5, 1]}]})",
      R"({"w_max": 1, "layers": [{"rows": 1, "cols": 2, "activation": "relu", "weights": [0.5, 2]}]})",
      R"({"w_max": 1, "layers": [{"rows": 1, "cols": 2, "activation": "relu", "weights": [0, 0], "bias": 1}]})",
      R"({"w_max": 1, "layers": [{"rows": 1, "cols": 2, "activation": "relu", "weights": [0, 0]},
                                 {"rows": 1, "cols": 3, "activation": "relu", "weights": [0, 0, 0]}]})",
      R"({"layers": []})",
      R"(not json)",
  };
  for (const char* text : bad) EXPECT_THROW((void)parse_network_json(text), ValidationError) << text;
}

}  // namespace
}  // namespace sltk
