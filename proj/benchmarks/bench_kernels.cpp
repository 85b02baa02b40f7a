#include <hjb/auxiliary.hpp>
#include <hjb/hamiltonian.hpp>
#include <hjb/presets.hpp>
#include <hjb/riccati.hpp>
#include <hjb/scheme.hpp>

#include <benchmark/benchmark.h>

using namespace hjb;

namespace {

Vec vec1(double a) {
  Vec v(1);
  v << a;
  return v;
}

Mat mat1(double a) {
  Mat m(1, 1);
  m << a;
  return m;
}

void BM_LegendrePower(benchmark::State& state) {
  const Vec q = vec1(1.7);
  for (auto _ : state) benchmark::DoNotOptimize(legendre_power(0.8, 2.5, q));
}
BENCHMARK(BM_LegendrePower);

// Closed form versus grid search on the eq3 Hamiltonian.
void BM_Hamiltonian(benchmark::State& state) {
  const ProblemSpec s = make_preset("eq3_lq");
  HamiltonianOptions opts;
  opts.allow_analytic = state.range(0) != 0;
  for (auto _ : state) benchmark::DoNotOptimize(hamiltonian_eval(s, vec1(0.3), 0.0, vec1(0.7), mat1(0.4), opts));
}
BENCHMARK(BM_Hamiltonian)->Arg(1)->Arg(0);

void BM_Step(benchmark::State& state) {
  const ProblemSpec s = make_preset(state.range(1) != 0 ? "eq3_lq" : "power_model");
  const Grid g = Grid::uniform(1, 2.0, static_cast<int>(state.range(0)), s.horizon);
  const GridFunction u = GridFunction::sample(g, s.initial);
  const double dt = cfl_dt(s, g, u);
  for (auto _ : state) benchmark::DoNotOptimize(step_explicit(s, g, u, dt, BoundaryCondition::frozen()));
  state.SetItemsProcessed(state.iterations() * g.size());
}
BENCHMARK(BM_Step)->Args({101, 0})->Args({401, 0})->Args({51, 1});

void BM_Riccati(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(riccati_solve({2.0, 0.4, 8.0}, 1e-3).tau);
}
BENCHMARK(BM_Riccati)->Unit(benchmark::kMillisecond);

void BM_AuxiliaryKernel(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(auxiliary_phi(10.0, 12.0, 0.5));
}
BENCHMARK(BM_AuxiliaryKernel);

void BM_AuxiliaryFd(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(auxiliary_fd_profile(10.0, 0.5, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_AuxiliaryFd)->Arg(4001)->Arg(16001)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
