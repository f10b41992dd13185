#include <benchmark/benchmark.h>

#include "doalab/harness.hpp"
#include "oracles.hpp"

using namespace doalab;

namespace {

ScatterEstimate scene_estimate(std::size_t sensors) {
  RandomStream rng(3);
  const ArrayGeometry geom{sensors, 1.0};
  const NoiseParams noise{1.8, gamma_for_gsnr(1.0, -2.0, 1.8)};
  return sample_covariance(synthesize_snapshots(geom, {{50.0, 60.0, 110.0}, {}}, 100, noise, rng));
}

void BM_StructuredGeneralizedPair(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  const ScatterAnalysis r(scene_estimate(m), {m, 1.0});
  const CVector a = steering_vector({m, 1.0}, 57.0);
  for (auto _ : state) benchmark::DoNotOptimize(r.min_generalized_eigpair(a, 0.05));
}
BENCHMARK(BM_StructuredGeneralizedPair)->Arg(10)->Arg(32)->Arg(64);

void BM_DenseGeneralizedPair(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  const CMatrix r = scene_estimate(m).matrix;
  const CVector a = steering_vector({m, 1.0}, 57.0);
  for (auto _ : state) benchmark::DoNotOptimize(oracle::dense_min_generalized(r, a, 0.05));
}
BENCHMARK(BM_DenseGeneralizedPair)->Arg(10)->Arg(32)->Arg(64);

void BM_Spectrum(benchmark::State& state) {
  const ScatterAnalysis r(scene_estimate(10), {10, 1.0});
  const ScanGrid grid;
  const BetaBounds b = beta_bounds(r, grid, 3);
  const auto mode = static_cast<int>(state.range(0));
  for (auto _ : state) {
    switch (mode) {
      case 0:
        benchmark::DoNotOptimize(music_spectrum(r, grid, 3));
        break;
      case 1:
        benchmark::DoNotOptimize(capon_spectrum(r, grid));
        break;
      default:
        benchmark::DoNotOptimize(music_like_spectrum(r, grid, BetaMode::Directional, b));
    }
  }
}
BENCHMARK(BM_Spectrum)->Arg(0)->Arg(1)->Arg(2);

void BM_SweepTrial(benchmark::State& state) {
  ExperimentConfig c;
  c.alphas = {1.8};
  c.gsnr_db = {-2.0};
  std::size_t t = 0;
  for (auto _ : state) {
    const SnapshotMatrix x = synthesize_trial(c, 1.8, -2.0, t++);
    benchmark::DoNotOptimize(compute_spectra(c, x));
  }
}
BENCHMARK(BM_SweepTrial);

}  // namespace

BENCHMARK_MAIN();
