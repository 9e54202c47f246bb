#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace sltk {

/// Philox4x32-10 block function (Salmon et al., Random123). Pure function of
/// (counter, key); no state.
[[nodiscard]] std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                                      std::array<std::uint32_t, 2> key) noexcept;

[[nodiscard]] std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// 64-bit FNV-1a.
[[nodiscard]] std::uint64_t fnv1a(std::string_view text) noexcept;

/// Stream-splitting convention: stream id = hash(master seed, module tag, index).
/// Distinct (tag, index) pairs give independent streams, so layers can be
/// sampled in any order or in parallel without changing any draw.
[[nodiscard]] std::uint64_t stream_id(std::uint64_t seed, std::string_view tag,
                                      std::uint64_t index) noexcept;

/// A counter-addressed random stream. Every draw is a pure function of
/// (stream id, counter).
class Stream {
 public:
  constexpr explicit Stream(std::uint64_t id) noexcept : id_(id) {}
  Stream(std::uint64_t seed, std::string_view tag, std::uint64_t index = 0) noexcept
      : id_(stream_id(seed, tag, index)) {}

  [[nodiscard]] std::uint64_t id() const noexcept { return id_; }

  [[nodiscard]] std::array<std::uint32_t, 4> block(std::uint64_t counter) const noexcept;

  /// Uniform in [0, 1) with 53 random bits (words 0 and 1 of the block).
  [[nodiscard]] double uniform(std::uint64_t counter) const noexcept;

  /// Fair coin from word 2 of the same block as uniform(counter).
  [[nodiscard]] int coin(std::uint64_t counter) const noexcept;

 private:
  std::uint64_t id_;
};

/// Sequential reader over a Stream for Monte Carlo loops.
class StreamCursor {
 public:
  explicit StreamCursor(Stream stream, std::uint64_t start = 0) noexcept
      : stream_(stream), next_(start) {}

  double uniform() noexcept { return stream_.uniform(next_++); }
  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }
  int coin() noexcept { return stream_.coin(next_++); }
  /// Uniform integer in [0, n) by multiply-shift on 32 bits (n < 2^32).
  std::uint32_t below(std::uint32_t n) noexcept;

  [[nodiscard]] std::uint64_t position() const noexcept { return next_; }

 private:
  Stream stream_;
  std::uint64_t next_;
};

}  // namespace sltk
