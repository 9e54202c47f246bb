#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sltk/bounds.hpp"
#include "sltk/construction.hpp"
#include "sltk/network.hpp"

namespace sltk {

// ---------------------------------------------------------------------------
// Sub-sum gap analysis

enum class SubsumMode { UniformSorted, HyperbolicSubsums, UniformSubsums };

[[nodiscard]] std::string_view to_string(SubsumMode mode) noexcept;
/// "uniform_sorted_1000", "hyperbolic_subsums_15" or "uniform_subsums_15".
[[nodiscard]] SubsumMode parse_subsum_mode(std::string_view name);

struct SubsumConfig {
  SubsumMode mode = SubsumMode::HyperbolicSubsums;
  std::size_t count = 15;
  std::uint64_t seed = 1;
  /// Hyperbolic mode only; default 1.5 / 1.5^count, which makes k' = count.
  std::optional<double> eps;

  [[nodiscard]] double hyperbolic_eps() const;
};

inline constexpr std::size_t kMaxSubsumCount = 24;

/// Sorted values and the gap from each to the next (0 for the last).
struct SubsumTable {
  std::vector<double> values;
  std::vector<double> gaps;
};

/// The raw draws: uniform on [0,1], or hyperbolic on [4 eps/9, 2/3].
[[nodiscard]] std::vector<double> subsum_samples(const SubsumConfig& cfg);

/// All 2^n subset sums, sorted. Throws ResourceError for n > kMaxSubsumCount.
[[nodiscard]] std::vector<double> sorted_subset_sums(const std::vector<double>& samples);

[[nodiscard]] SubsumTable gap_table(std::vector<double> sorted_values);

/// Throws ResourceError if a subsum mode asks for more than kMaxSubsumCount samples.
[[nodiscard]] SubsumTable subsum_analysis(const SubsumConfig& cfg);

/// Header `value,gap`, 17 significant digits, LF endings.
[[nodiscard]] std::string to_csv(const SubsumTable& table);

/// Largest distance between consecutive values, clipped to [lo, hi]: for
/// every consecutive pair (x, y) that overlaps [lo, hi], min(y, hi) - max(x, lo).
[[nodiscard]] double max_gap_within(const SubsumTable& table, double lo, double hi);

/// Lower end of the range hyperbolic sub-sums cover densely: the larger of the
/// smallest sample and the sum of all samples below eps.
[[nodiscard]] double covered_range_start(const std::vector<double>& samples, double eps);

// ---------------------------------------------------------------------------
// Reproduction of the headline sample counts

struct ReproRow {
  std::string name;
  double computed = 0.0;
  double reference = 0.0;
  bool upper_bound_only = false;
  bool pass = false;
};

/// Per-weight counts M_i/n_max^2 at n_max = 100, l = 10, eps = delta = 0.01,
/// w_max = 1, F_max = 1 for both bounds and both spectral modes, plus the
/// prior-work per-weight count. Counts must lie within 2% of the reference;
/// the prior-work row must stay at or below its reference.
[[nodiscard]] std::vector<ReproRow> repro_examples();

[[nodiscard]] std::string repro_to_json(const std::vector<ReproRow>& rows);

// ---------------------------------------------------------------------------
// End-to-end runs

/// `count` inputs uniform on [-1, 1]^dimension from stream (seed, "inputs", 0).
[[nodiscard]] InputDomain sample_domain(std::size_t dimension, std::size_t count,
                                        std::uint64_t seed);

struct RunManifest {
  std::string command;
  std::map<std::string, std::string> parameters;
  std::uint64_t seed = 0;
  std::string tool_version;
  /// File name (relative to the output directory) and SHA-256 digest.
  std::vector<std::pair<std::string, std::string>> outputs;
};

[[nodiscard]] std::string to_json(const RunManifest& manifest);

/// Hashes each file in `names` under `dir`, then writes manifest.json there.
RunManifest write_manifest(const std::filesystem::path& dir, std::string command,
                           std::map<std::string, std::string> parameters, std::uint64_t seed,
                           const std::vector<std::string>& names);

struct RunConfig {
  double eps = 0.2;
  double delta = 0.1;
  std::optional<double> w_max;  // defaults to the target's w_max
  std::uint64_t seed = 1;
  PruneMode mode = PruneMode::Batch;
  SpectralMode::Kind spectral = SpectralMode::Kind::Explicit;
  std::size_t num_inputs = 1000;
};

/// Build configuration for a target: F_max over `domain`, explicit spectral
/// norms taken from |W*_i|.
[[nodiscard]] BuildConfig make_build_config(const TargetNetwork& f, const InputDomain& domain,
                                            const RunConfig& cfg);

struct RunOutcome {
  LargeNetwork large;
  std::optional<PruneResult> prune;
  std::optional<VerifyReport> verify;
  /// Set when pruning failed.
  std::optional<std::string> failure;

  [[nodiscard]] bool ok() const noexcept { return verify.has_value(); }
};

/// build_large -> prune -> verify_sup_error on sample_domain(n_0, num_inputs, seed).
/// A pruning failure is reported in the outcome, not thrown.
[[nodiscard]] RunOutcome run_pipeline(const TargetNetwork& f, const RunConfig& cfg);

/// JSON report of a run (status, errors, sizes, verification numbers).
[[nodiscard]] std::string run_report_json(const RunOutcome& outcome, const RunConfig& cfg);

/// run_pipeline on the network file, then writes report.json, large.lfg and
/// manifest.json into out_dir. Output bytes depend only on the inputs.
RunOutcome run_end_to_end(const std::filesystem::path& arch_file, const RunConfig& cfg,
                          const std::filesystem::path& out_dir);

/// Parameters of a run as manifest strings.
[[nodiscard]] std::map<std::string, std::string> run_parameters(const RunConfig& cfg);

/// printf("%.17g").
[[nodiscard]] std::string format_double(double v);

/// Shortest text that parses back to the same double.
[[nodiscard]] std::string format_shortest(double v);

}  // namespace sltk
