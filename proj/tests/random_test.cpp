#include <gtest/gtest.h>

#include <set>

#include "sltk/random.hpp"

namespace sltk {
namespace {

using Block = std::array<std::uint32_t, 4>;

// Known-answer vectors published with the Random123 reference implementation.
TEST(Philox, KnownAnswerZero) {
  EXPECT_EQ(philox4x32({0, 0, 0, 0}, {0, 0}),
            (Block{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
}

TEST(Philox, KnownAnswerAllOnes) {
  EXPECT_EQ(philox4x32({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}),
            (Block{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
}

TEST(Philox, KnownAnswerPi) {
  EXPECT_EQ(philox4x32({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}),
            (Block{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(Stream, PureFunctionOfCounter) {
  const Stream a(42, "in", 1);
  const Stream b(42, "in", 1);
  for (std::uint64_t c = 0; c < 100; ++c) {
    EXPECT_EQ(a.uniform(c), b.uniform(c));
    EXPECT_EQ(a.coin(c), b.coin(c));
  }
}

TEST(Stream, DistinctTagsAndIndicesGiveDistinctIds) {
  std::set<std::uint64_t> ids;
  for (std::uint64_t seed : {0ull, 1ull, 2ull}) {
    for (const char* tag : {"in", "out", "inputs"}) {
      for (std::uint64_t i = 0; i < 10; ++i) ids.insert(stream_id(seed, tag, i));
    }
  }
  EXPECT_EQ(ids.size(), 90u);
}

TEST(Stream, UniformInUnitInterval) {
  const Stream s(3, "test");
  double sum = 0.0;
  constexpr int kN = 100000;
  for (int c = 0; c < kN; ++c) {
    const double u = s.uniform(static_cast<std::uint64_t>(c));
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  // Mean of 1e5 uniforms has standard deviation ~9e-4.
  EXPECT_NEAR(sum / kN, 0.5, 0.005);
}

TEST(StreamCursor, BelowStaysInRange) {
  StreamCursor cur(Stream(5, "below"));
  std::vector<int> hits(7, 0);
  for (int i = 0; i < 70000; ++i) {
    const auto v = cur.below(7);
    ASSERT_LT(v, 7u);
    ++hits[v];
  }
  for (int h : hits) EXPECT_NEAR(h, 10000, 500);
  EXPECT_EQ(cur.position(), 70000u);
}

}  // namespace
}  // namespace sltk
