#include "sltk/random.hpp"

namespace sltk {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                        std::array<std::uint32_t, 2> key) noexcept {
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, ctr[0], hi0, lo0);
    mulhilo(kMul1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  }
  return ctr;
}

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view text) noexcept {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001B3ull;
  }
  return h;
}

std::uint64_t stream_id(std::uint64_t seed, std::string_view tag, std::uint64_t index) noexcept {
  return splitmix64(splitmix64(splitmix64(seed) ^ fnv1a(tag)) ^ index);
}

std::array<std::uint32_t, 4> Stream::block(std::uint64_t counter) const noexcept {
  return philox4x32({static_cast<std::uint32_t>(counter), static_cast<std::uint32_t>(counter >> 32),
                     0u, 0u},
                    {static_cast<std::uint32_t>(id_), static_cast<std::uint32_t>(id_ >> 32)});
}

double Stream::uniform(std::uint64_t counter) const noexcept {
  const auto b = block(counter);
  const std::uint64_t bits = (static_cast<std::uint64_t>(b[0]) << 32) | b[1];
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

int Stream::coin(std::uint64_t counter) const noexcept {
  return static_cast<int>(block(counter)[2] & 1u);
}

std::uint32_t StreamCursor::below(std::uint32_t n) noexcept {
  const auto b = stream_.block(next_++);
  return static_cast<std::uint32_t>((static_cast<std::uint64_t>(b[0]) * n) >> 32);
}

}  // namespace sltk
