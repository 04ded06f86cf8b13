#include <benchmark/benchmark.h>

#include <vector>

#include "mollow/experiment.hpp"
#include "mollow/liouvillian.hpp"
#include "mollow/propagate.hpp"
#include "mollow/spectrum.hpp"
#include "mollow/steady_state.hpp"

namespace {

using namespace mollow;

SystemParams params(int n_max) {
  SystemParams p = SystemParams::device_defaults();
  p.n_max = n_max;
  return p;
}

void BM_BuildLiouvillian(benchmark::State& state) {
  const SystemParams p = params(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(build_system_liouvillian(p));
}
BENCHMARK(BM_BuildLiouvillian)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_SteadyState(benchmark::State& state) {
  const Liouvillian L = build_system_liouvillian(params(static_cast<int>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(steady_state(L));
}
BENCHMARK(BM_SteadyState)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_ResolventPoint(benchmark::State& state) {
  const SystemParams p = params(static_cast<int>(state.range(0)));
  const Liouvillian L = build_system_liouvillian(p);
  const DensityMatrix rho = steady_state(L);
  const std::vector<double> grid = {p.omega_a + kTwoPi * 100.0 * kMHz};
  for (auto _ : state) benchmark::DoNotOptimize(spectrum_resolvent(L, rho, p, grid));
}
BENCHMARK(BM_ResolventPoint)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_PropagateStep(benchmark::State& state) {
  const SystemParams p = params(static_cast<int>(state.range(0)));
  const Liouvillian L = build_system_liouvillian(p);
  const Propagator prop(L, 1.0 / p.kappa);
  Vector v = DensityMatrix::product_basis_state(p.n_max, 0, 0).vectorized();
  for (auto _ : state) {
    prop.advance(v);
    benchmark::DoNotOptimize(v.data());
  }
}
BENCHMARK(BM_PropagateStep)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_TimeDomainSpectrum(benchmark::State& state) {
  const SystemParams p = params(static_cast<int>(state.range(0)));
  const Liouvillian L = build_system_liouvillian(p);
  const DensityMatrix rho = steady_state(L);
  const auto grid = default_frequency_grid(p);
  for (auto _ : state) {
    benchmark::DoNotOptimize(compute_spectrum(L, rho, p, grid, {.method = SpectrumMethod::time_domain}));
  }
}
BENCHMARK(BM_TimeDomainSpectrum)->Arg(16)->Arg(32)->Unit(benchmark::kSecond)->Iterations(1);

}  // namespace

BENCHMARK_MAIN();
