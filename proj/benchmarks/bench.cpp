#include <benchmark/benchmark.h>

#include "sltk/construction.hpp"
#include "sltk/decomposition.hpp"
#include "sltk/experiments.hpp"
#include "sltk/random.hpp"
#include "sltk/sampling.hpp"

namespace {

sltk::TargetNetwork make_target(std::size_t width, std::size_t depth) {
  std::vector<std::size_t> widths(depth + 1, width);
  const auto arch = sltk::Architecture::uniform(widths, sltk::ActivationKind::ReLU);
  sltk::StreamCursor cur(sltk::Stream(1, "bench-target"));
  std::vector<sltk::Matrix> ws;
  for (std::size_t i = 0; i < depth; ++i) {
    sltk::Matrix m(width, width);
    for (double& v : m.data()) v = cur.uniform(-1.0, 1.0);
    ws.push_back(std::move(m));
  }
  return {arch, ws, 1.0};
}

void BM_Forward(benchmark::State& state) {
  const auto f = make_target(static_cast<std::size_t>(state.range(0)), 4);
  const sltk::Vector x(f.arch().width(0), 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(sltk::forward(f, x));
}
BENCHMARK(BM_Forward)->Arg(16)->Arg(64)->Arg(256);

void BM_SpectralNorm(benchmark::State& state) {
  const auto f = make_target(static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(sltk::spectral_norm(f.layer(1)));
}
BENCHMARK(BM_SpectralNorm)->Arg(16)->Arg(64)->Arg(256);

void BM_GrdDecompose(benchmark::State& state) {
  const auto p = sltk::GrdParams::make(1e-3);
  const auto m = p.sample_count(0.05);
  const sltk::HyperbolicDist d(p.gamma * p.gamma * p.eps, p.gamma);
  sltk::StreamCursor cur(sltk::Stream(2, "bench-grd"));
  std::vector<double> samples;
  // keep drawing until every interval is covered
  for (;;) {
    samples.assign(m, 0.0);
    for (double& v : samples) v = sltk::sample_pos(d, cur.uniform());
    if (!sltk::bucket_samples(samples, p.gamma, p.k).first_gap()) break;
  }
  int step = 0;
  for (auto _ : state) {
    step = (step + 1) % 1001;
    benchmark::DoNotOptimize(sltk::grd_decompose(step / 1000.0, samples, p));
  }
}
BENCHMARK(BM_GrdDecompose);

void BM_BuildAndPrune(benchmark::State& state) {
  const auto f = make_target(4, 2);
  sltk::BuildConfig cfg;
  cfg.eps = 0.2;
  cfg.mode = state.range(0) == 0 ? sltk::PruneMode::Batch : sltk::PruneMode::Recycle;
  cfg.seed = 1;
  for (auto _ : state) {
    const auto g = sltk::build_large(f.arch(), cfg);
    benchmark::DoNotOptimize(sltk::prune(g, f));
  }
}
BENCHMARK(BM_BuildAndPrune)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_Subsums(benchmark::State& state) {
  sltk::SubsumConfig cfg{sltk::SubsumMode::HyperbolicSubsums,
                         static_cast<std::size_t>(state.range(0)), 1, std::nullopt};
  for (auto _ : state) benchmark::DoNotOptimize(sltk::subsum_analysis(cfg));
}
BENCHMARK(BM_Subsums)->Arg(10)->Arg(15)->Arg(20)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
