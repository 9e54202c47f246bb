// sltk: build, prune and verify strong-lottery-ticket constructions.
//
// Exit codes: 0 success, 1 pruning failure, 2 invalid input, 3 internal error.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "sltk/bounds.hpp"
#include "sltk/construction.hpp"
#include "sltk/container.hpp"
#include "sltk/error.hpp"
#include "sltk/experiments.hpp"
#include "sltk/io_util.hpp"
#include "sltk/network_json.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitPruningFailure = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitInternal = 3;

struct Options {
  std::string arch;
  std::string large;
  double eps = 0.2;
  double delta = 0.1;
  std::optional<double> w_max;
  double f_max = 1.0;
  std::uint64_t seed = 1;
  std::string mode = "thm1";
  std::string spectral = "explicit";
  std::string out;
  std::size_t inputs = 1000;
  std::string subsum_mode = "hyperbolic_subsums_15";
  std::size_t count = 15;
  std::optional<double> subsum_eps;
};

sltk::SpectralMode::Kind parse_spectral(const std::string& name) {
  if (name == "unit") return sltk::SpectralMode::Kind::AssumeUnit;
  if (name == "worst") return sltk::SpectralMode::Kind::WorstCase;
  if (name == "explicit") return sltk::SpectralMode::Kind::Explicit;
  throw sltk::ValidationError("unknown spectral mode '" + name + "'");
}

sltk::RunConfig run_config(const Options& o) {
  sltk::RunConfig cfg;
  cfg.eps = o.eps;
  cfg.delta = o.delta;
  cfg.w_max = o.w_max;
  cfg.seed = o.seed;
  cfg.mode = sltk::parse_prune_mode(o.mode);
  cfg.spectral = parse_spectral(o.spectral);
  cfg.num_inputs = o.inputs;
  return cfg;
}

// Writes `text` to out/name (plus a manifest) or to stdout when no --out is given.
void emit(const Options& o, const std::string& command, const std::string& name,
          const std::string& text, std::map<std::string, std::string> params) {
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  const fs::path dir(o.out);
  fs::create_directories(dir);
  sltk::write_text_file(dir / name, text);
  (void)sltk::write_manifest(dir, command, std::move(params), o.seed, {name});
}

std::string verify_json(const sltk::VerifyReport& v) {
  nlohmann::ordered_json j;
  j["sup_error"] = v.sup_error;
  j["eps_target"] = v.eps_target;
  j["num_inputs"] = v.num_inputs;
  j["per_layer_spectral"] = v.per_layer_spectral;
  j["within_target"] = v.sup_error <= v.eps_target;
  return j.dump(2) + "\n";
}

int cmd_bounds(const Options& o) {
  const auto f = sltk::read_network_json(o.arch);
  sltk::BoundInputs in{f.arch(), o.eps, o.delta, o.w_max.value_or(f.w_max()), o.f_max, {}};
  switch (parse_spectral(o.spectral)) {
    case sltk::SpectralMode::Kind::AssumeUnit: in.spectral = sltk::SpectralMode::assume_unit(); break;
    case sltk::SpectralMode::Kind::WorstCase: in.spectral = sltk::SpectralMode::worst_case(); break;
    case sltk::SpectralMode::Kind::Explicit:
      in.spectral = sltk::SpectralMode::explicit_norms(sltk::dominating_spectral_norms(f));
      break;
  }
  const auto report = sltk::make_bound_report(in);
  emit(o, "bounds", "bounds.json", sltk::to_json(report),
       {{"eps", sltk::format_shortest(o.eps)},
        {"delta", sltk::format_shortest(o.delta)},
        {"w_max", sltk::format_shortest(in.w_max)},
        {"f_max", sltk::format_shortest(o.f_max)},
        {"spectral", o.spectral},
        {"arch", fs::path(o.arch).filename().string()}});
  return 0;
}

int cmd_build(const Options& o) {
  const auto f = sltk::read_network_json(o.arch);
  const auto cfg = run_config(o);
  const auto domain = sltk::sample_domain(f.arch().width(0), cfg.num_inputs, cfg.seed);
  const auto g = sltk::build_large(f.arch(), sltk::make_build_config(f, domain, cfg));
  if (o.out.empty()) throw sltk::ValidationError("build needs --out");
  const fs::path dir(o.out);
  fs::create_directories(dir);
  sltk::write_container(dir / "large.lfg", g);
  (void)sltk::write_manifest(dir, "build", sltk::run_parameters(cfg), cfg.seed, {"large.lfg"});
  return 0;
}

int cmd_prune(const Options& o) {
  const auto f = sltk::read_network_json(o.arch);
  const auto contents = sltk::read_container(o.large);
  if (o.out.empty()) throw sltk::ValidationError("prune needs --out");
  const auto p = sltk::prune(contents.network, f);
  const fs::path dir(o.out);
  fs::create_directories(dir);
  sltk::write_container(dir / "pruned.lfg", contents.network, &p);
  (void)sltk::write_manifest(dir, "prune", {{"large", fs::path(o.large).filename().string()}},
                             contents.network.seed, {"pruned.lfg"});
  return 0;
}

int cmd_verify(const Options& o) {
  const auto f = sltk::read_network_json(o.arch);
  const auto contents = sltk::read_container(o.large);
  if (!contents.prune) throw sltk::ValidationError("container holds no masks; run prune first");
  const auto domain = sltk::sample_domain(f.arch().width(0), o.inputs, o.seed);
  const auto report = sltk::verify_sup_error(f, contents.network, *contents.prune, domain, o.eps);
  emit(o, "verify", "verify.json", verify_json(report),
       {{"eps", sltk::format_shortest(o.eps)}, {"inputs", std::to_string(o.inputs)}});
  return 0;
}

int cmd_run(const Options& o) {
  if (o.out.empty()) throw sltk::ValidationError("run needs --out");
  const auto cfg = run_config(o);
  const auto outcome = sltk::run_end_to_end(o.arch, cfg, o.out);
  std::cout << sltk::run_report_json(outcome, cfg);
  return outcome.ok() ? 0 : kExitPruningFailure;
}

int cmd_subsums(const Options& o) {
  sltk::SubsumConfig cfg;
  cfg.mode = sltk::parse_subsum_mode(o.subsum_mode);
  cfg.count = o.count;
  cfg.seed = o.seed;
  cfg.eps = o.subsum_eps;
  const auto table = sltk::subsum_analysis(cfg);
  std::map<std::string, std::string> params{{"mode", o.subsum_mode},
                                            {"count", std::to_string(o.count)}};
  if (cfg.mode == sltk::SubsumMode::HyperbolicSubsums) {
    params["eps"] = sltk::format_shortest(cfg.hyperbolic_eps());
  }
  emit(o, "subsums", "subsums.csv", sltk::to_csv(table), std::move(params));
  return 0;
}

int cmd_repro(const Options& o) {
  const auto rows = sltk::repro_examples();
  bool all = true;
  for (const auto& r : rows) {
    std::printf("%-14s computed %-14.6g reference %-10.6g %s\n", r.name.c_str(), r.computed,
                r.reference, r.pass ? "pass" : "FAIL");
    all = all && r.pass;
  }
  if (!o.out.empty()) emit(o, "repro", "repro.json", sltk::repro_to_json(rows), {});
  return all ? 0 : kExitInternal;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Strong lottery ticket construction toolkit"};
  app.require_subcommand(1);
  Options o;

  auto add_target = [&](CLI::App* sub) {
    sub->add_option("--arch", o.arch, "Target network JSON")->required()->check(CLI::ExistingFile);
  };
  auto add_accuracy = [&](CLI::App* sub) {
    sub->add_option("--eps", o.eps, "Target accuracy")->capture_default_str();
    sub->add_option("--delta", o.delta, "Failure probability")->capture_default_str();
    sub->add_option("--wmax", o.w_max, "Weight bound (default: the target's w_max)");
  };
  auto add_seed = [&](CLI::App* sub) { sub->add_option("--seed", o.seed)->capture_default_str(); };
  auto add_out = [&](CLI::App* sub) { sub->add_option("--out", o.out, "Output directory"); };
  auto add_build = [&](CLI::App* sub) {
    add_target(sub);
    add_accuracy(sub);
    add_seed(sub);
    add_out(sub);
    sub->add_option("--mode", o.mode, "thm1 | recycle")->capture_default_str();
    sub->add_option("--spectral", o.spectral, "unit | worst | explicit")->capture_default_str();
    sub->add_option("--inputs", o.inputs, "Number of sampled inputs")->capture_default_str();
  };

  auto* bounds = app.add_subcommand("bounds", "Evaluate the sample-count bounds");
  add_target(bounds);
  add_accuracy(bounds);
  add_out(bounds);
  bounds->add_option("--spectral", o.spectral, "unit | worst | explicit")->capture_default_str();
  bounds->add_option("--fmax", o.f_max, "Largest hidden activation")->capture_default_str();

  auto* build = app.add_subcommand("build", "Sample the large network");
  add_build(build);

  auto* prune = app.add_subcommand("prune", "Prune a large network to the target");
  add_target(prune);
  add_out(prune);
  prune->add_option("--large", o.large, "Container from `build`")->required()->check(CLI::ExistingFile);

  auto* verify = app.add_subcommand("verify", "Measure the pruned network's error");
  add_target(verify);
  add_seed(verify);
  add_out(verify);
  verify->add_option("--large", o.large, "Container from `prune`")->required()->check(CLI::ExistingFile);
  verify->add_option("--eps", o.eps, "Target accuracy")->capture_default_str();
  verify->add_option("--inputs", o.inputs, "Number of sampled inputs")->capture_default_str();

  auto* run = app.add_subcommand("run", "Build, prune and verify in one go");
  add_build(run);

  auto* subsums = app.add_subcommand("subsums", "Gap table of sorted samples or subset sums");
  add_seed(subsums);
  add_out(subsums);
  subsums->add_option("--mode", o.subsum_mode,
                      "uniform_sorted_1000 | hyperbolic_subsums_15 | uniform_subsums_15")
      ->capture_default_str();
  subsums->add_option("--count", o.count, "Number of samples")->capture_default_str();
  subsums->add_option("--eps", o.subsum_eps, "Accuracy for the hyperbolic range");

  auto* repro = app.add_subcommand("repro", "Recompute the headline sample counts");
  add_out(repro);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInvalid;
  }

  try {
    if (*bounds) return cmd_bounds(o);
    if (*build) return cmd_build(o);
    if (*prune) return cmd_prune(o);
    if (*verify) return cmd_verify(o);
    if (*run) return cmd_run(o);
    if (*subsums) return cmd_subsums(o);
    if (*repro) return cmd_repro(o);
  } catch (const sltk::PruningFailure& e) {
    std::cerr << "pruning failed: " << e.what() << "\n";
    return kExitPruningFailure;
  } catch (const sltk::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitInternal;
}
