// SPDX-License-Identifier: Apache-2.0

// Hot paths: building a three-time process state from its dilation,
// contracting a full measurement plan into a probability table, one K3
// evaluation, and the dephasing projection. Sizes match the shipped
// two-qubit model, so regressions here show up directly in sweep times.

#include <benchmark/benchmark.h>

#include <numbers>

#include "lgps/lg.hpp"
#include "lgps/process.hpp"
#include "lgps/scenarios.hpp"
#include "lgps/structure.hpp"

namespace {

constexpr double kPi = std::numbers::pi;

lgps::scenarios::TwoQubitModel model() {
  lgps::scenarios::TwoQubitModel m;
  m.omega = 1.0;
  m.tau1 = kPi / 2.0;
  m.tau2 = kPi / 2.0;
  m.rho0 = {0.3, 0.7, lgps::Complex(0.1, 0.05)};
  m.k = 0;
  return m;
}

void BM_BuildProcessState(benchmark::State& state) {
  const auto scenario = lgps::scenarios::build_two_qubit_scenario(model());
  for (auto _ : state) {
    benchmark::DoNotOptimize(lgps::process::build_process_state(scenario));
  }
}
BENCHMARK(BM_BuildProcessState);

void BM_JointProbability(benchmark::State& state) {
  const auto ps = lgps::process::build_process_state(
      lgps::scenarios::build_two_qubit_scenario(model()));
  const auto plan = lgps::scenarios::two_qubit_measurement_plan(0.3, 0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(lgps::lg::joint_probability(ps, plan));
  }
}
BENCHMARK(BM_JointProbability);

void BM_K3(benchmark::State& state) {
  const auto ps = lgps::process::build_process_state(
      lgps::scenarios::build_two_qubit_scenario(model()));
  const auto plan = lgps::scenarios::two_qubit_measurement_plan(0.3, 0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(lgps::lg::k3(ps, plan));
  }
}
BENCHMARK(BM_K3);

void BM_QCProjection(benchmark::State& state) {
  const auto ps = lgps::process::build_process_state(
      lgps::scenarios::build_two_qubit_scenario(model()));
  const auto plan = lgps::scenarios::two_qubit_measurement_plan(0.3, 0);
  const auto& first = std::get<lgps::process::Projective>(plan[0]);
  const auto& second = std::get<lgps::process::Projective>(plan[1]);
  const lgps::structure::Bases bases{first.basis, second.basis};
  using lgps::structure::Condition;
  for (auto _ : state) {
    benchmark::DoNotOptimize(lgps::structure::qc_projection(
        ps, {Condition::C1A, Condition::C2A}, bases));
  }
}
BENCHMARK(BM_QCProjection);

}  // namespace

BENCHMARK_MAIN();
