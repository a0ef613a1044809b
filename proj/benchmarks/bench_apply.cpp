#include <benchmark/benchmark.h>

#include "monoevo/catalog.hpp"
#include "monoevo/checks.hpp"
#include "monoevo/galerkin.hpp"

namespace {

using namespace monoevo;

constexpr double kPi = 3.14159265358979323846;

void BM_ApplyNSE(benchmark::State& state) {
  const auto n = static_cast<int>(state.range(0));
  const Basis basis = build_fourier_basis(Domain::torus(2, 2 * kPi), n, true);
  const auto problem = navier_stokes_2d(NSEParams{0.1, {}}, basis);
  const FieldSampler sampler(basis);
  const Field u = sampler.draw(3);
  for (auto _ : state) benchmark::DoNotOptimize(apply(problem, 0.0, u));
  state.SetLabel(std::to_string(basis.size()) + " modes");
}
BENCHMARK(BM_ApplyNSE)->Arg(4)->Arg(8)->Arg(16);

void BM_ApplyBurgers(benchmark::State& state) {
  const Basis basis = build_sine_basis(kPi, static_cast<int>(state.range(0)));
  BurgersRDParams p;
  p.F = ScalarFunction::parse("quadratic:1");
  const auto problem = burgers_rd_1d(p, basis);
  const Field u = FieldSampler(basis).draw(1);
  for (auto _ : state) benchmark::DoNotOptimize(apply(problem, 0.0, u));
}
BENCHMARK(BM_ApplyBurgers)->Arg(16)->Arg(64)->Arg(256);

void BM_HeatSolve(benchmark::State& state) {
  const Basis basis = build_sine_basis(kPi, 32);
  BurgersRDParams p;
  auto problem = burgers_rd_1d(p, basis);
  problem.initial = Field::mode(basis, 0);
  SolverConfig cfg;
  cfg.dt = 1e-2;
  for (auto _ : state) benchmark::DoNotOptimize(solve(problem, cfg));
}
BENCHMARK(BM_HeatSolve);

}  // namespace

BENCHMARK_MAIN();
