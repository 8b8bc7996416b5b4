#include <benchmark/benchmark.h>

#include <algorithm>
#include <map>
#include <vector>

#include "warp/eval.hpp"
#include "warp/profiler.hpp"
#include "warp/spectral.hpp"
#include "warp/stl.hpp"
#include "warp/synth.hpp"
#include "warp/wavelet.hpp"

namespace {

using namespace warp;

const synth::SynthDataset& dataset(std::size_t weeks) {
  static std::map<std::size_t, synth::SynthDataset> cache;
  auto it = cache.find(weeks);
  if (it == cache.end()) {
    auto spec = synth::SynthSpec::defaults();
    spec.weeks = std::max<std::size_t>(weeks, 9);
    spec.seed = 1;
    auto data = synth::generate(spec);
    data.observed = data.observed.slice(0, weeks * kMinutesPerWeek);
    it = cache.emplace(weeks, std::move(data)).first;
  }
  return it->second;
}

void BM_Cwt(benchmark::State& state) {
  const auto x = dataset(static_cast<std::size_t>(state.range(0))).observed.dense();
  wavelet::WaveletParams params;
  params.n_scales = static_cast<std::size_t>(state.range(1));
  for (auto _ : state) {
    auto sc = wavelet::cwt(std::span<const double>(x), params);
    benchmark::DoNotOptimize(sc.coefficients(0, 0));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(x.size()) * state.range(1));
}
BENCHMARK(BM_Cwt)->Args({1, 140})->Args({4, 140})->Args({12, 140})->Unit(benchmark::kMillisecond);

void BM_Decompose(benchmark::State& state) {
  const auto& series = dataset(static_cast<std::size_t>(state.range(0))).observed;
  const wavelet::WaveletParams params;
  for (auto _ : state) {
    auto dec = wavelet::decompose(series, params);
    benchmark::DoNotOptimize(dec.indicator.data());
  }
}
BENCHMARK(BM_Decompose)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);

void BM_StlDaily(benchmark::State& state) {
  const auto x = dataset(static_cast<std::size_t>(state.range(0))).observed.dense();
  const auto params = seasonal::StlParams::for_period(kMinutesPerDay);
  for (auto _ : state) {
    auto r = seasonal::stl(x, params);
    benchmark::DoNotOptimize(r.seasonal.data());
  }
}
BENCHMARK(BM_StlDaily)->Arg(1)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_SpectralEwma(benchmark::State& state) {
  const auto weeks = split_weeks(dataset(8).observed);
  const spectral::SpectralParams params;
  for (auto _ : state) {
    auto w = spectral::spectral_ewma_predict(weeks, params);
    benchmark::DoNotOptimize(w[0]);
  }
}
BENCHMARK(BM_SpectralEwma)->Unit(benchmark::kMillisecond);

void BM_WarpPredict(benchmark::State& state) {
  const auto& training = dataset(8).observed;
  const profiler::ForecastConfig config;
  for (auto _ : state) {
    auto p = profiler::warp_predict(training, config);
    benchmark::DoNotOptimize(p.combined[0]);
  }
}
BENCHMARK(BM_WarpPredict)->Unit(benchmark::kSecond)->Iterations(1);

void BM_Report(benchmark::State& state) {
  const auto& data = dataset(9);
  const auto weeks = split_weeks(data.observed);
  const auto predicted = profiler::simple_segmentation(std::span<const WeekGrid>(weeks.data(), 8));
  PartialWeekGrid actual;
  for (std::size_t m = 0; m < kMinutesPerWeek; ++m) actual[m] = weeks[8][m];
  const auto scored = eval::ScoredMinutes::from(predicted, actual);
  for (auto _ : state) {
    auto r = eval::make_report("bench", "ss", 0, scored);
    benchmark::DoNotOptimize(r.mare);
  }
}
BENCHMARK(BM_Report);

}  // namespace

BENCHMARK_MAIN();
