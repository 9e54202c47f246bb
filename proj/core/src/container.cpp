#include "sltk/container.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <limits>

#include "sltk/error.hpp"
#include "sltk/io_util.hpp"

namespace sltk {

namespace {

constexpr char kMagic[4] = {'L', 'F', 'G', '1'};
constexpr std::uint32_t kVersion = 1;
constexpr std::uint32_t kHasMasks = 1;

template <typename T>
T to_little(T v) {
  if constexpr (std::endian::native == std::endian::big) {
    auto bytes = std::bit_cast<std::array<unsigned char, sizeof(T)>>(v);
    std::reverse(bytes.begin(), bytes.end());
    return std::bit_cast<T>(bytes);
  }
  return v;
}

class Writer {
 public:
  void u32(std::uint32_t v) { raw(to_little(v)); }
  void u64(std::uint64_t v) { raw(to_little(v)); }
  void f64(double v) { raw(to_little(std::bit_cast<std::uint64_t>(v))); }
  void bytes(const void* p, std::size_t n) { out_.append(static_cast<const char*>(p), n); }
  std::string take() { return std::move(out_); }

 private:
  template <typename T>
  void raw(T v) {
    bytes(&v, sizeof v);
  }
  std::string out_;
};

class Reader {
 public:
  explicit Reader(std::string_view in) : in_(in) {}

  std::uint32_t u32() { return to_little(raw<std::uint32_t>()); }
  std::uint64_t u64() { return to_little(raw<std::uint64_t>()); }
  double f64() { return std::bit_cast<double>(to_little(raw<std::uint64_t>())); }
  std::string_view bytes(std::size_t n) {
    need(n);
    auto s = in_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  [[nodiscard]] bool done() const noexcept { return pos_ == in_.size(); }

 private:
  void need(std::size_t n) const {
    if (in_.size() - pos_ < n) throw ValidationError("container is truncated");
  }
  template <typename T>
  T raw() {
    T v;
    std::memcpy(&v, bytes(sizeof v).data(), sizeof v);
    return v;
  }
  std::string_view in_;
  std::size_t pos_ = 0;
};

std::uint32_t narrow32(std::size_t v) {
  if (v > std::numeric_limits<std::uint32_t>::max()) {
    throw ResourceError("value does not fit the 32-bit container header");
  }
  return static_cast<std::uint32_t>(v);
}

void write_mask(Writer& w, const Mask& m) {
  const auto bits = m.bytes();
  std::string packed((bits.size() + 7) / 8, '\0');
  for (std::size_t b = 0; b < bits.size(); ++b) {
    if (bits[b]) packed[b / 8] = static_cast<char>(packed[b / 8] | (1 << (b % 8)));
  }
  w.bytes(packed.data(), packed.size());
}

Mask read_mask(Reader& r, std::size_t rows, std::size_t cols) {
  Mask m(rows, cols);
  const auto packed = r.bytes((rows * cols + 7) / 8);
  for (std::size_t b = 0; b < rows * cols; ++b) {
    if (static_cast<unsigned char>(packed[b / 8]) & (1u << (b % 8))) m.set(b / cols, b % cols);
  }
  return m;
}

Matrix read_matrix(Reader& r, std::size_t rows, std::size_t cols) {
  Matrix m(rows, cols);
  for (double& v : m.data()) v = r.f64();
  return m;
}

}  // namespace

std::string encode_container(const LargeNetwork& g, const PruneResult* p) {
  Writer w;
  w.bytes(kMagic, sizeof kMagic);
  w.u32(kVersion);
  const auto& arch = g.target_arch;
  w.u32(narrow32(arch.depth()));
  for (std::size_t n : arch.widths()) w.u32(narrow32(n));
  for (std::size_t m : g.M) w.u32(narrow32(m));
  w.u32(g.mode == PruneMode::Batch ? 0 : 1);
  w.u32(p ? kHasMasks : 0);
  w.u64(g.seed);
  w.f64(g.w_max);
  w.f64(g.eps);
  w.f64(g.delta);
  w.f64(g.eps_w);
  for (std::size_t i = 0; i < arch.depth(); ++i) {
    for (double v : g.in_weights[i].data()) w.f64(v);
    for (double v : g.out_weights[i].data()) w.f64(v);
  }
  if (p) {
    if (p->in_mask.size() != arch.depth() || p->out_mask.size() != arch.depth() ||
        p->neurons_consumed.size() != arch.depth()) {
      throw DimensionError("prune result does not match the large network depth");
    }
    for (std::size_t i = 0; i < arch.depth(); ++i) {
      write_mask(w, p->in_mask[i]);
      write_mask(w, p->out_mask[i]);
    }
    for (std::size_t c : p->neurons_consumed) w.u64(c);
  }
  return w.take();
}

ContainerContents decode_container(std::string_view bytes) {
  Reader r(bytes);
  if (r.bytes(sizeof kMagic) != std::string_view(kMagic, sizeof kMagic)) {
    throw ValidationError("not an LFG1 container");
  }
  if (const auto version = r.u32(); version != kVersion) {
    throw ValidationError("unsupported container version " + std::to_string(version));
  }
  const std::size_t depth = r.u32();
  if (depth == 0 || depth > 4096) throw ValidationError("bad layer count in container");
  std::vector<std::size_t> widths(depth + 1);
  for (auto& n : widths) n = r.u32();
  std::vector<std::size_t> M(depth);
  for (auto& m : M) m = r.u32();
  const std::uint32_t mode = r.u32();
  if (mode > 1) throw ValidationError("bad prune mode in container");
  const std::uint32_t flags = r.u32();

  LargeNetwork g;
  try {
    g.target_arch = Architecture::uniform(widths, ActivationKind::ReLU);
  } catch (const Error& e) {
    throw ValidationError(std::string("container architecture: ") + e.what());
  }
  g.mode = mode == 0 ? PruneMode::Batch : PruneMode::Recycle;
  g.M = M;
  g.seed = r.u64();
  g.w_max = r.f64();
  g.eps = r.f64();
  g.delta = r.f64();
  g.eps_w = r.f64();
  try {
    g.range = ranges_for_accuracy(g.eps_w, g.w_max);
  } catch (const Error& e) {
    throw ValidationError(std::string("container parameters: ") + e.what());
  }
  for (std::size_t i = 0; i < depth; ++i) {
    const double cells = static_cast<double>(M[i]) * static_cast<double>(widths[i] + widths[i + 1]);
    if (cells * 8.0 > static_cast<double>(bytes.size())) throw ValidationError("container is truncated");
    g.in_weights.push_back(read_matrix(r, M[i], widths[i]));
    g.out_weights.push_back(read_matrix(r, widths[i + 1], M[i]));
  }

  ContainerContents contents;
  if (flags & kHasMasks) {
    std::vector<Mask> in_mask;
    std::vector<Mask> out_mask;
    for (std::size_t i = 0; i < depth; ++i) {
      in_mask.push_back(read_mask(r, M[i], widths[i]));
      out_mask.push_back(read_mask(r, widths[i + 1], M[i]));
    }
    std::vector<std::size_t> consumed(depth);
    for (auto& c : consumed) c = static_cast<std::size_t>(r.u64());
    contents.prune = prune_result_from_masks(g, std::move(in_mask), std::move(out_mask),
                                             std::move(consumed));
  }
  if (!r.done()) throw ValidationError("trailing bytes after container payload");
  contents.network = std::move(g);
  return contents;
}

void write_container(const std::filesystem::path& path, const LargeNetwork& g, const PruneResult* p) {
  write_text_file(path, encode_container(g, p));
}

ContainerContents read_container(const std::filesystem::path& path) {
  return decode_container(read_text_file(path));
}

}  // namespace sltk
