#include <gtest/gtest.h>

#include <filesystem>
#include <random>

#include "sltk/container.hpp"
#include "sltk/error.hpp"
#include "test_util.hpp"

namespace sltk {
namespace {

struct Fixture {
  TargetNetwork f;
  LargeNetwork g;
  PruneResult p;
};

Fixture make_fixture(PruneMode mode, const Architecture& arch) {
  std::mt19937_64 rng(12);
  Fixture fx;
  fx.f = testing::random_network(rng, arch);
  BuildConfig cfg;
  cfg.eps = 0.2;
  cfg.mode = mode;
  cfg.seed = 22;
  fx.g = build_large(arch, cfg);
  fx.p = prune(fx.g, fx.f);
  return fx;
}

void expect_same_network(const LargeNetwork& a, const LargeNetwork& b) {
  EXPECT_EQ(a.target_arch, b.target_arch);
  EXPECT_EQ(a.mode, b.mode);
  EXPECT_EQ(a.M, b.M);
  EXPECT_EQ(a.in_weights, b.in_weights);
  EXPECT_EQ(a.out_weights, b.out_weights);
  EXPECT_EQ(a.seed, b.seed);
  EXPECT_EQ(a.w_max, b.w_max);
  EXPECT_EQ(a.eps, b.eps);
  EXPECT_EQ(a.delta, b.delta);
  EXPECT_EQ(a.eps_w, b.eps_w);
  EXPECT_EQ(a.range.alpha, b.range.alpha);
  EXPECT_EQ(a.range.beta, b.range.beta);
}

class ContainerRoundTrip : public ::testing::TestWithParam<PruneMode> {};

TEST_P(ContainerRoundTrip, WithAndWithoutMasks) {
  const auto fx = make_fixture(GetParam(), Architecture::uniform({3, 4, 2}, ActivationKind::ReLU));
  const std::string bare = encode_container(fx.g);
  const auto a = decode_container(bare);
  expect_same_network(a.network, fx.g);
  EXPECT_FALSE(a.prune.has_value());
  EXPECT_EQ(encode_container(a.network), bare);

  const std::string full = encode_container(fx.g, &fx.p);
  const auto b = decode_container(full);
  expect_same_network(b.network, fx.g);
  ASSERT_TRUE(b.prune.has_value());
  EXPECT_EQ(b.prune->in_mask, fx.p.in_mask);
  EXPECT_EQ(b.prune->out_mask, fx.p.out_mask);
  EXPECT_EQ(b.prune->neurons_consumed, fx.p.neurons_consumed);
  EXPECT_EQ(b.prune->virtual_plus, fx.p.virtual_plus);
  EXPECT_EQ(b.prune->virtual_minus, fx.p.virtual_minus);
  EXPECT_EQ(b.prune->assignments.size(), fx.p.assignments.size());
  EXPECT_EQ(encode_container(b.network, &*b.prune), full);
}

INSTANTIATE_TEST_SUITE_P(BothModes, ContainerRoundTrip,
                         ::testing::Values(PruneMode::Batch, PruneMode::Recycle));

TEST(Container, HeaderLayout) {
  const auto fx = make_fixture(PruneMode::Batch, Architecture::uniform({2, 1}, ActivationKind::ReLU));
  const std::string bytes = encode_container(fx.g);
  ASSERT_GE(bytes.size(), 12u);
  EXPECT_EQ(bytes.substr(0, 4), "LFG1");
  EXPECT_EQ(static_cast<unsigned char>(bytes[4]), 1u);
  EXPECT_EQ(static_cast<unsigned char>(bytes[8]), 1u);
  // header: magic, version, l, 2 widths, 1 M, mode, flags, seed, 4 doubles
  const std::size_t header = 4 + 4 + 4 + 8 + 4 + 4 + 4 + 8 + 32;
  EXPECT_EQ(bytes.size(), header + 8 * (fx.g.M[0] * 2 + fx.g.M[0]));
}

TEST(Container, RejectsBadInput) {
  const auto fx = make_fixture(PruneMode::Batch, Architecture::uniform({2, 2}, ActivationKind::ReLU));
  const std::string bytes = encode_container(fx.g, &fx.p);

  std::string bad = bytes;
  bad[0] = 'X';
  EXPECT_THROW((void)decode_container(bad), ValidationError);
  EXPECT_THROW((void)decode_container(bytes.substr(0, bytes.size() - 1)), ValidationError);
  EXPECT_THROW((void)decode_container(bytes.substr(0, 10)), ValidationError);
  EXPECT_THROW((void)decode_container(bytes + "x"), ValidationError);
  EXPECT_THROW((void)decode_container(""), ValidationError);
}

TEST(Container, FileRoundTrip) {
  const auto fx = make_fixture(PruneMode::Recycle, Architecture::uniform({2, 3}, ActivationKind::ReLU));
  const auto path = std::filesystem::temp_directory_path() / "sltk_container_test.lfg";
  write_container(path, fx.g, &fx.p);
  const auto back = read_container(path);
  expect_same_network(back.network, fx.g);
  ASSERT_TRUE(back.prune.has_value());
  EXPECT_EQ(back.prune->in_mask, fx.p.in_mask);
  std::filesystem::remove(path);
  EXPECT_THROW((void)read_container(path), Error);
}

}  // namespace
}  // namespace sltk
