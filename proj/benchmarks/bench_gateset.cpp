// Copyright 2026 The qcal authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include "qcal/gateset.hpp"
#include "qcal/platform.hpp"

namespace {

void CliffordClosure(benchmark::State& state) {
  for (auto _ : state) {
    qcal::GateSet gs = qcal::clifford_group();
    benchmark::DoNotOptimize(gs.elements.data());
  }
}
BENCHMARK(CliffordClosure);

void SampleCircuits(benchmark::State& state) {
  qcal::CircuitEnsembleSpec spec;
  spec.gate_set = qcal::clifford_group();
  spec.depths = {1, 2, 5, 10, 20, 50, 100, 200};
  spec.circuits_per_depth = static_cast<int>(state.range(0));
  spec.seed = 7;
  for (auto _ : state) {
    auto circuits = qcal::sample_circuits(spec);
    benchmark::DoNotOptimize(circuits.data());
  }
}
BENCHMARK(SampleCircuits)->Arg(30)->Arg(100);

void StandardRbEndToEnd(benchmark::State& state) {
  auto platform = qcal::load_platform("sim_1q", std::nullopt, 3);
  qcal::CircuitEnsembleSpec spec;
  spec.gate_set = qcal::clifford_group();
  spec.depths = {1, 2, 5, 10, 20, 50, 100, 200};
  spec.circuits_per_depth = static_cast<int>(state.range(0));
  spec.shots_per_circuit = 256;
  spec.seed = 7;
  for (auto _ : state) {
    auto result = qcal::run_standard_rb(*platform, 0, spec);
    benchmark::DoNotOptimize(result.avg_gate_fidelity);
  }
}
BENCHMARK(StandardRbEndToEnd)->Arg(10)->Arg(30);

}  // namespace
