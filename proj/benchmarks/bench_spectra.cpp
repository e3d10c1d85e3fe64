#include <benchmark/benchmark.h>

#include "speclab/baker.hpp"
#include "speclab/channels.hpp"
#include "speclab/ensembles.hpp"
#include "speclab/spectral.hpp"

using namespace speclab;

static void BM_HaarUnitary(benchmark::State& state) {
  Rng rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(haar_unitary(state.range(0), rng));
}
BENCHMARK(BM_HaarUnitary)->Arg(16)->Arg(64)->Arg(256);

static void BM_Superoperator(benchmark::State& state) {
  Rng rng(2);
  const KrausSet k = environmental_channel(state.range(0), 8, rng);
  for (auto _ : state) benchmark::DoNotOptimize(superoperator_from_kraus(k));
}
BENCHMARK(BM_Superoperator)->Arg(8)->Arg(16)->Arg(32);

static void BM_BlochForm(benchmark::State& state) {
  Rng rng(3);
  const Superoperator s = superoperator_from_kraus(environmental_channel(state.range(0), 8, rng));
  for (auto _ : state) benchmark::DoNotOptimize(bloch_form(s));
}
BENCHMARK(BM_BlochForm)->Arg(8)->Arg(16);

static void BM_SpectrumBloch(benchmark::State& state) {
  Rng rng(4);
  const Superoperator s = superoperator_from_kraus(environmental_channel(state.range(0), 8, rng));
  for (auto _ : state) benchmark::DoNotOptimize(spectrum_report(s, true));
}
BENCHMARK(BM_SpectrumBloch)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

static void BM_SpectrumComplex(benchmark::State& state) {
  Rng rng(5);
  const Superoperator s = superoperator_from_kraus(environmental_channel(state.range(0), 8, rng));
  for (auto _ : state) benchmark::DoNotOptimize(spectrum_report(s, false));
}
BENCHMARK(BM_SpectrumComplex)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

static void BM_BakerChannel(benchmark::State& state) {
  const BakerParams p{state.range(0), 4, 8, 2, 0.25, ShiftMode::top};
  for (auto _ : state) benchmark::DoNotOptimize(sloppy_baker_channel(p));
}
BENCHMARK(BM_BakerChannel)->Arg(32)->Arg(64);

BENCHMARK_MAIN();
