#include <benchmark/benchmark.h>

#include "prwos/estimators.hpp"
#include "prwos/reference_solver.hpp"
#include "prwos/variance_reduction.hpp"
#include "prwos/walk.hpp"

namespace {

using namespace prwos;

ForwardModel cem_model(double inclusion, bool layered) {
  std::optional<Circle> sigma;
  ConductivityField cf;
  if (layered) {
    sigma = Circle({0, 0}, 0.9);
    cf.outer = Parameter::fixed(1.5);
    cf.interface_radius = Parameter::fixed(0.9);
  }
  SceneGeometry g(Circle({0, 0}, 1.0), Circle({0, 0}, inclusion), sigma, 1e-6);
  return ForwardModel(g, cf, CemBoundary{ElectrodeLayout::standard_eight(), VoltagePattern::alternating(8), 0.1});
}

void BM_PhiloxUniform(benchmark::State& state) {
  Stream s(StreamKey{1, 0, 0, 0});
  double acc = 0.0;
  for (auto _ : state) {
    acc += s.uniform();
  }
  benchmark::DoNotOptimize(acc);
}
BENCHMARK(BM_PhiloxUniform);

void BM_UncenteredExit(benchmark::State& state) {
  const Circle disk({0, 0}, 1.0);
  Stream s(StreamKey{2, 0, 0, 0});
  for (auto _ : state) {
    benchmark::DoNotOptimize(sphere_exit_uncentered(disk, {0.5, 0.1}, s));
  }
}
BENCHMARK(BM_UncenteredExit);

// One electrode-to-absorption trajectory; h = state.range(0) / 1000.
void BM_Trajectory(benchmark::State& state, bool layered) {
  const auto m = cem_model(0.3, layered);
  const auto& cem = require_cem(m.bc());
  const auto medium = nominal_medium(m.conductivity());
  WalkParams p;
  p.h = static_cast<double>(state.range(0)) / 1000.0;
  const auto geom = m.geometry().with_eps(1e-6);
  std::uint64_t path = 0;
  std::uint64_t steps = 0;
  for (auto _ : state) {
    Stream rng(StreamKey{3, path++, 0, 0});
    const Point x0 = cem.layout.sample_on_electrode(2, rng);
    const auto out = simulate(x0, geom, m.bc(), medium, p, ScoreKind::U0, rng);
    steps += out.steps;
  }
  state.counters["steps"] = benchmark::Counter(static_cast<double>(steps), benchmark::Counter::kAvgIterations);
}
BENCHMARK_CAPTURE(BM_Trajectory, unit, false)->Arg(100)->Arg(20)->Arg(4)->Unit(benchmark::kMicrosecond);
BENCHMARK_CAPTURE(BM_Trajectory, layered, true)->Arg(100)->Arg(20)->Arg(4)->Unit(benchmark::kMicrosecond);

void BM_SolveCem(benchmark::State& state) {
  const auto m = cem_model(0.3, false);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_cem(m, static_cast<int>(state.range(0))).currents.J[2]);
  }
}
BENCHMARK(BM_SolveCem)->Arg(64)->Arg(128)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_CurrentsBlock(benchmark::State& state) {
  const auto m = cem_model(0.3, false);
  WalkParams p;
  p.h = 0.02;
  RunOptions o;
  o.seed = 4;
  for (auto _ : state) {
    benchmark::DoNotOptimize(estimate_currents(m, p, {1, 64}, o).J[2]);
  }
}
BENCHMARK(BM_CurrentsBlock)->Unit(benchmark::kMillisecond);

void BM_CurrentsBlockVR(benchmark::State& state) {
  const auto m = cem_model(0.3, false);
  const auto provider = make_reference_provider(m, 256);
  WalkParams p;
  p.h = 0.02;
  RunOptions o;
  o.seed = 4;
  for (auto _ : state) {
    benchmark::DoNotOptimize(estimate_currents_vr(m, p, {1, 64}, provider, o).J[2]);
  }
}
BENCHMARK(BM_CurrentsBlockVR)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
