#include <benchmark/benchmark.h>

#include <cmath>

#include "rgc/analytics.hpp"
#include "rgc/complexes.hpp"
#include "rgc/pointprocess.hpp"

namespace {

using rgc::Window;

void BM_SamplePoisson(benchmark::State& state) {
  const double t = static_cast<double>(state.range(0));
  std::uint64_t trial = 0;
  for (auto _ : state) benchmark::DoNotOptimize(rgc::sample_poisson(Window::unit_interval(), t, 1, trial++));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * t));
}
BENCHMARK(BM_SamplePoisson)->Arg(1'000)->Arg(100'000)->Arg(1'000'000);

// Dimension at rho = (ln t)^2 on the unit interval.
void BM_VrDimensionLine(benchmark::State& state) {
  const double t = static_cast<double>(state.range(0));
  const auto pts = rgc::sample_poisson(Window::unit_interval(), t, 2, 0);
  const double r = std::pow(std::log(t), 2.0) / t;
  for (auto _ : state) benchmark::DoNotOptimize(rgc::complexes::vr_dimension(pts, r));
}
BENCHMARK(BM_VrDimensionLine)->Arg(10'000)->Arg(100'000);

void BM_Cech1d(benchmark::State& state) {
  const double t = static_cast<double>(state.range(0));
  const auto pts = rgc::sample_poisson(Window::unit_interval(), t, 3, 0);
  const double r = std::pow(std::log(t), 2.0) / t;
  for (auto _ : state) benchmark::DoNotOptimize(rgc::complexes::cech_dimension_1d(pts, r));
}
BENCHMARK(BM_Cech1d)->Arg(10'000)->Arg(100'000)->Arg(1'000'000);

void BM_VrDimensionPlane(benchmark::State& state) {
  const double t = static_cast<double>(state.range(0));
  const auto pts = rgc::sample_poisson(Window::unit_cube(2), t, 4, 0);
  const double r = std::sqrt(5.0 / t);
  for (auto _ : state) benchmark::DoNotOptimize(rgc::complexes::vr_dimension(pts, r));
}
BENCHMARK(BM_VrDimensionPlane)->Arg(1'000)->Arg(10'000);

void BM_PkExact(benchmark::State& state) {
  const double rho = static_cast<double>(state.range(0));
  const auto k = static_cast<long long>(std::ceil(rho * 1.3));
  for (auto _ : state) benchmark::DoNotOptimize(rgc::analytics::pk_exact(rho, k));
}
BENCHMARK(BM_PkExact)->Arg(5)->Arg(100)->Arg(10'000);

}  // namespace

BENCHMARK_MAIN();
