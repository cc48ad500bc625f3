#include <benchmark/benchmark.h>

#include "mixpos/geometry.hpp"
#include "mixpos/mixed.hpp"
#include "mixpos/simulator.hpp"
#include "mixpos/solver.hpp"

namespace {

using namespace mixpos;

SynthesisResult make_epoch(const FracPolicy& policy) {
  SimScenario scenario = make_nominal_scenario();
  scenario.rng_seed = 7;
  const Eigen::Vector3d pos = geodetic_to_ecef({30.0, 114.0, 0.0});
  return synthesize_epoch(scenario, pos, 0.0, policy);
}

void BM_SolveFullDual(benchmark::State& state) {
  const auto sim = make_epoch(all_full_policy());
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        solve_full(sim.epoch.observations, UnknownLayout::DualConstellation));
  }
}
BENCHMARK(BM_SolveFullDual);

void BM_MixedSolve(benchmark::State& state) {
  const auto sim = make_epoch(default_frac_policy());
  for (auto _ : state) {
    benchmark::DoNotOptimize(mixed_solve(sim.epoch));
  }
}
BENCHMARK(BM_MixedSolve);

void BM_Gdop(benchmark::State& state) {
  const auto sim = make_epoch(all_full_policy());
  const Eigen::Vector3d user = geodetic_to_ecef({30.0, 114.0, 0.0});
  std::vector<Eigen::Vector3d> los;
  for (const auto& obs : sim.epoch.observations) {
    los.push_back(los_unit_vector(obs.sat_pos, user));
  }
  const LosSet set(los);
  for (auto _ : state) {
    benchmark::DoNotOptimize(gdop(set));
  }
}
BENCHMARK(BM_Gdop);

void BM_Propagate(benchmark::State& state) {
  const SimScenario scenario = make_nominal_scenario();
  const auto& el = scenario.constellation_a.satellites.front().elements;
  double t = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(propagate(el, t));
    t += 30.0;
  }
}
BENCHMARK(BM_Propagate);

void BM_GridScanCoarse(benchmark::State& state) {
  const SimScenario scenario = make_nominal_scenario();
  for (auto _ : state) {
    benchmark::DoNotOptimize(grid_scan(scenario, 0.0, 10.0, GateConfig{}));
  }
}
BENCHMARK(BM_GridScanCoarse);

}  // namespace

BENCHMARK_MAIN();
