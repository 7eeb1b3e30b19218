#include <benchmark/benchmark.h>

#include <array>

#include "diverge/ctm_sim.hpp"
#include "diverge/oracle.hpp"
#include "diverge/riemann_diverge.hpp"

using namespace diverge;

namespace {

const std::array<FundamentalDiagram, 3>& diagrams() {
  static const std::array<FundamentalDiagram, 3> fds{FundamentalDiagram::del_castillo_mainline(),
                                                     FundamentalDiagram::del_castillo_mainline(),
                                                     FundamentalDiagram::del_castillo_ramp()};
  return fds;
}

DivergeModel model_for(int k) {
  switch (k) {
    case 0: return DivergeModel::daganzo_fifo({0.7, 0.3});
    case 1: return DivergeModel::lebacque({0.7, 0.3});
    case 2: return DivergeModel::supply_proportional();
    case 3: return DivergeModel::priority_based({0.6, 0.4});
    default: return DivergeModel::partial_evacuation({0.3, 0.2}, {0.45, 0.55});
  }
}

}  // namespace

static void BM_SolveFluxes(benchmark::State& state) {
  const DivergeModel m = model_for(static_cast<int>(state.range(0)));
  const RiemannInput in = RiemannInput::from_densities(diagrams(), {1.0, 1.0, 0.1});
  for (auto _ : state) benchmark::DoNotOptimize(solve_fluxes(m, in));
}
BENCHMARK(BM_SolveFluxes)->DenseRange(0, 4);

static void BM_Solve(benchmark::State& state) {
  const DivergeModel m = model_for(static_cast<int>(state.range(0)));
  const RiemannInput in = RiemannInput::from_densities(diagrams(), {1.0, 1.0, 0.1});
  for (auto _ : state) benchmark::DoNotOptimize(solve(m, in));
}
BENCHMARK(BM_Solve)->DenseRange(0, 4);

static void BM_Oracle(benchmark::State& state) {
  const DivergeModel m = model_for(static_cast<int>(state.range(0)));
  const auto& fds = diagrams();
  const std::array<double, 3> cap{fds[0].capacity(), fds[1].capacity(), fds[2].capacity()};
  for (auto _ : state) {
    benchmark::DoNotOptimize(brute_force_fluxes(m, 0.8 * cap[0], 0.5 * cap[1], 0.6 * cap[2], cap));
  }
}
BENCHMARK(BM_Oracle)->DenseRange(0, 4);

static void BM_CtmStep(benchmark::State& state) {
  SimConfig c;
  c.cells_per_link = static_cast<int>(state.range(0));
  c.time_steps = 40L * c.cells_per_link;
  c.validate();
  SimState s = initial_state(c);
  for (auto _ : state) {
    s = step(s, c);
    if (s.step_index >= c.time_steps) s = initial_state(c);
  }
  state.SetItemsProcessed(state.iterations() * 3 * c.cells_per_link);
}
BENCHMARK(BM_CtmStep)->RangeMultiplier(2)->Range(40, 640);

static void BM_ReferenceRun(benchmark::State& state) {
  SimConfig c;
  c.cells_per_link = static_cast<int>(state.range(0));
  c.time_steps = 40L * c.cells_per_link;
  c.field_interval = c.time_steps;
  for (auto _ : state) benchmark::DoNotOptimize(run(c));
}
BENCHMARK(BM_ReferenceRun)->Arg(40)->Arg(160)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
