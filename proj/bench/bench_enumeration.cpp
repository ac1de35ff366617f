#include "conetorsion/cone_frustum_spectra.hpp"

#include <benchmark/benchmark.h>

namespace {

void BM_cone_circle(benchmark::State& state, ct::Execution ex) {
  auto s = ct::make_circle(1.0, 1e4);
  const double lambda = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(ct::cone_spectrum(s, 1, 1.0, lambda, ex));
}

void BM_cone_torus(benchmark::State& state, ct::Execution ex) {
  auto s = ct::make_flat_torus(1.0, 1.0, 1e4);
  const double lambda = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(ct::cone_spectrum(s, 1, 1.0, lambda, ex));
}

void BM_frustum_circle(benchmark::State& state, ct::Execution ex) {
  auto s = ct::make_circle(1.0, 1e4);
  const double lambda = static_cast<double>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(ct::frustum_spectrum(s, 1, ct::FrustumBC::Absolute, 0.5, 1.0, lambda, ex));
}

}  // namespace

BENCHMARK_CAPTURE(BM_cone_circle, serial, ct::Execution::Serial)->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_cone_circle, parallel, ct::Execution::Parallel)->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_cone_torus, serial, ct::Execution::Serial)->Arg(500)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_cone_torus, parallel, ct::Execution::Parallel)->Arg(500)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_frustum_circle, serial, ct::Execution::Serial)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_frustum_circle, parallel, ct::Execution::Parallel)->Arg(1000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
