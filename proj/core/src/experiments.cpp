#include "sltk/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>

#include "json.hpp"
#include "sltk/container.hpp"
#include "sltk/digest.hpp"
#include "sltk/error.hpp"
#include "sltk/io_util.hpp"
#include "sltk/network_json.hpp"
#include "sltk/random.hpp"
#include "sltk/sampling.hpp"
#include "sltk/version.hpp"

namespace sltk {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_shortest(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, res.ptr};
}

std::string_view to_string(SubsumMode mode) noexcept {
  switch (mode) {
    case SubsumMode::UniformSorted: return "uniform_sorted_1000";
    case SubsumMode::HyperbolicSubsums: return "hyperbolic_subsums_15";
    case SubsumMode::UniformSubsums: return "uniform_subsums_15";
  }
  return "unknown";
}

SubsumMode parse_subsum_mode(std::string_view name) {
  for (auto mode : {SubsumMode::UniformSorted, SubsumMode::HyperbolicSubsums,
                    SubsumMode::UniformSubsums}) {
    if (name == to_string(mode)) return mode;
  }
  throw ValidationError("unknown subsum mode '" + std::string(name) + "'");
}

double SubsumConfig::hyperbolic_eps() const {
  return eps.value_or(1.5 / std::pow(1.5, static_cast<double>(count)));
}

std::vector<double> subsum_samples(const SubsumConfig& cfg) {
  StreamCursor cursor(Stream(cfg.seed, "subsums", 0));
  std::vector<double> out(cfg.count);
  if (cfg.mode == SubsumMode::HyperbolicSubsums) {
    const HyperbolicDist dist(4.0 * cfg.hyperbolic_eps() / 9.0, 2.0 / 3.0);
    for (double& v : out) v = sample_pos(dist, cursor.uniform());
  } else {
    for (double& v : out) v = cursor.uniform();
  }
  return out;
}

std::vector<double> sorted_subset_sums(const std::vector<double>& samples) {
  if (samples.size() > kMaxSubsumCount) {
    throw ResourceError("subset-sum enumeration limited to " + std::to_string(kMaxSubsumCount) +
                        " samples");
  }
  std::vector<double> sums{0.0};
  sums.reserve(std::size_t{1} << samples.size());
  for (double v : samples) {
    const std::size_t half = sums.size();
    for (std::size_t s = 0; s < half; ++s) sums.push_back(sums[s] + v);
  }
  std::sort(sums.begin(), sums.end());
  return sums;
}

SubsumTable gap_table(std::vector<double> sorted_values) {
  SubsumTable t;
  t.gaps.assign(sorted_values.size(), 0.0);
  for (std::size_t i = 0; i + 1 < sorted_values.size(); ++i) {
    t.gaps[i] = sorted_values[i + 1] - sorted_values[i];
  }
  t.values = std::move(sorted_values);
  return t;
}

SubsumTable subsum_analysis(const SubsumConfig& cfg) {
  if (cfg.mode != SubsumMode::UniformSorted && cfg.count > kMaxSubsumCount) {
    throw ResourceError("count " + std::to_string(cfg.count) + " exceeds the enumeration limit of " +
                        std::to_string(kMaxSubsumCount));
  }
  if (cfg.count > 100'000'000) throw ResourceError("sample count too large");
  auto samples = subsum_samples(cfg);
  if (cfg.mode == SubsumMode::UniformSorted) {
    std::sort(samples.begin(), samples.end());
    return gap_table(std::move(samples));
  }
  return gap_table(sorted_subset_sums(samples));
}

std::string to_csv(const SubsumTable& table) {
  std::string out = "value,gap\n";
  for (std::size_t i = 0; i < table.values.size(); ++i) {
    out += format_double(table.values[i]);
    out += ',';
    out += format_double(table.gaps[i]);
    out += '\n';
  }
  return out;
}

double max_gap_within(const SubsumTable& table, double lo, double hi) {
  double best = 0.0;
  const auto& v = table.values;
  for (std::size_t i = 0; i + 1 < v.size(); ++i) {
    if (v[i + 1] < lo || v[i] > hi) continue;
    best = std::max(best, std::min(v[i + 1], hi) - std::max(v[i], lo));
  }
  return best;
}

double covered_range_start(const std::vector<double>& samples, double eps) {
  if (samples.empty()) return 0.0;
  double small = 0.0;
  for (double v : samples) {
    if (v < eps) small += v;
  }
  return std::max(*std::min_element(samples.begin(), samples.end()), small);
}

std::vector<ReproRow> repro_examples() {
  const std::vector<std::size_t> widths(11, 100);
  BoundInputs inputs{Architecture::uniform(widths, ActivationKind::ReLU), 0.01, 0.01, 1.0, 1.0, {}};
  const double n2 = 100.0 * 100.0;

  std::vector<ReproRow> rows;
  auto add = [&](std::string name, double computed, double reference) {
    ReproRow row{std::move(name), computed, reference, false, false};
    row.pass = std::abs(computed - reference) <= 0.02 * reference;
    rows.push_back(std::move(row));
  };
  for (const auto& [suffix, mode] : {std::pair{"unit", SpectralMode::assume_unit()},
                                     std::pair{"worst", SpectralMode::worst_case()}}) {
    inputs.spectral = mode;
    const double eps_w = epsilon_w(inputs);
    const auto thm1 = layer_samples_thm1(inputs, eps_w);
    const auto recycle = layer_samples_recycle(inputs, eps_w);
    const bool unit = std::string_view(suffix) == "unit";
    add(std::string("thm1-") + suffix, static_cast<double>(thm1.front()) / n2, unit ? 630.0 : 2450.0);
    add(std::string("recycle-") + suffix, static_cast<double>(recycle.front()) / n2,
        unit ? 144.0 : 574.0);
  }
  std::stable_partition(rows.begin(), rows.end(),
                        [](const ReproRow& r) { return r.name.starts_with("thm1"); });

  inputs.spectral = SpectralMode::assume_unit();
  ReproRow prior{"prior-work", static_cast<double>(malach_per_weight(inputs)), 2e15, true, false};
  prior.pass = prior.computed <= prior.reference;
  rows.push_back(std::move(prior));
  return rows;
}

std::string repro_to_json(const std::vector<ReproRow>& rows) {
  nlohmann::ordered_json j = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    j.push_back({{"name", r.name},
                 {"computed", r.computed},
                 {"reference", r.reference},
                 {"check", r.upper_bound_only ? "at_most" : "within_2_percent"},
                 {"pass", r.pass}});
  }
  return j.dump(2) + "\n";
}

InputDomain sample_domain(std::size_t dimension, std::size_t count, std::uint64_t seed) {
  StreamCursor cursor(Stream(seed, "inputs", 0));
  std::vector<Vector> xs(count, Vector(dimension));
  for (auto& x : xs) {
    for (double& v : x) v = cursor.uniform(-1.0, 1.0);
  }
  return {dimension, std::move(xs)};
}

std::string to_json(const RunManifest& manifest) {
  nlohmann::ordered_json j;
  j["command"] = manifest.command;
  j["parameters"] = manifest.parameters;
  j["seed"] = manifest.seed;
  j["tool_version"] = manifest.tool_version;
  nlohmann::ordered_json outputs = nlohmann::ordered_json::object();
  for (const auto& [name, digest] : manifest.outputs) outputs[name] = {{"sha256", digest}};
  j["outputs"] = outputs;
  return j.dump(2) + "\n";
}

RunManifest write_manifest(const std::filesystem::path& dir, std::string command,
                           std::map<std::string, std::string> parameters, std::uint64_t seed,
                           const std::vector<std::string>& names) {
  RunManifest m{std::move(command), std::move(parameters), seed, std::string(kToolVersion), {}};
  for (const auto& name : names) m.outputs.emplace_back(name, sha256_file(dir / name));
  write_text_file(dir / "manifest.json", to_json(m));
  return m;
}

BuildConfig make_build_config(const TargetNetwork& f, const InputDomain& domain,
                              const RunConfig& cfg) {
  BuildConfig b;
  b.eps = cfg.eps;
  b.delta = cfg.delta;
  b.w_max = cfg.w_max.value_or(f.w_max());
  b.f_max = f_max(f, domain);
  switch (cfg.spectral) {
    case SpectralMode::Kind::AssumeUnit: b.spectral = SpectralMode::assume_unit(); break;
    case SpectralMode::Kind::WorstCase: b.spectral = SpectralMode::worst_case(); break;
    case SpectralMode::Kind::Explicit:
      b.spectral = SpectralMode::explicit_norms(dominating_spectral_norms(f));
      break;
  }
  b.mode = cfg.mode;
  b.seed = cfg.seed;
  return b;
}

RunOutcome run_pipeline(const TargetNetwork& f, const RunConfig& cfg) {
  const InputDomain domain = sample_domain(f.arch().width(0), cfg.num_inputs, cfg.seed);
  RunOutcome outcome;
  outcome.large = build_large(f.arch(), make_build_config(f, domain, cfg));
  try {
    outcome.prune = prune(outcome.large, f);
  } catch (const PruningFailure& e) {
    outcome.failure = e.what();
    return outcome;
  }
  outcome.verify = verify_sup_error(f, outcome.large, *outcome.prune, domain, cfg.eps);
  return outcome;
}

std::map<std::string, std::string> run_parameters(const RunConfig& cfg) {
  std::map<std::string, std::string> p;
  p["eps"] = format_shortest(cfg.eps);
  p["delta"] = format_shortest(cfg.delta);
  if (cfg.w_max) p["w_max"] = format_shortest(*cfg.w_max);
  p["mode"] = std::string(to_string(cfg.mode));
  p["spectral"] = to_string(cfg.spectral);
  p["inputs"] = std::to_string(cfg.num_inputs);
  return p;
}

std::string run_report_json(const RunOutcome& outcome, const RunConfig& cfg) {
  const LargeNetwork& g = outcome.large;
  nlohmann::ordered_json j;
  j["status"] = outcome.ok() ? "ok" : "pruning_failure";
  if (outcome.failure) j["failure"] = *outcome.failure;
  j["mode"] = to_string(g.mode);
  j["seed"] = cfg.seed;
  j["eps"] = cfg.eps;
  j["delta"] = cfg.delta;
  j["w_max"] = g.w_max;
  j["eps_w"] = g.eps_w;
  j["alpha"] = g.range.alpha;
  j["beta"] = g.range.beta;
  j["M"] = g.M;
  if (outcome.prune) {
    j["neurons_consumed"] = outcome.prune->neurons_consumed;
    j["kept_neurons"] = outcome.prune->assignments.size();
  }
  if (outcome.verify) {
    const VerifyReport& v = *outcome.verify;
    j["sup_error"] = v.sup_error;
    j["eps_target"] = v.eps_target;
    j["num_inputs"] = v.num_inputs;
    j["per_layer_spectral"] = v.per_layer_spectral;
    j["within_target"] = v.sup_error <= v.eps_target;
  }
  return j.dump(2) + "\n";
}

RunOutcome run_end_to_end(const std::filesystem::path& arch_file, const RunConfig& cfg,
                          const std::filesystem::path& out_dir) {
  const TargetNetwork f = read_network_json(arch_file);
  RunOutcome outcome = run_pipeline(f, cfg);
  std::filesystem::create_directories(out_dir);
  write_text_file(out_dir / "report.json", run_report_json(outcome, cfg));
  write_container(out_dir / "large.lfg", outcome.large,
                  outcome.prune ? &*outcome.prune : nullptr);
  auto params = run_parameters(cfg);
  params["arch"] = arch_file.filename().string();
  params["target_sha256"] = sha256_file(arch_file);
  write_manifest(out_dir, "run", std::move(params), cfg.seed, {"report.json", "large.lfg"});
  return outcome;
}

}  // namespace sltk
