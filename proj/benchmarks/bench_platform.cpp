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

#include "qcal/platform.hpp"

namespace {

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> out;
  for (int i = 0; i < n; ++i)
    out.push_back(lo + (hi - lo) * i / static_cast<double>(n - 1));
  return out;
}

void ResonatorSweepShots(benchmark::State& state) {
  auto platform = qcal::load_platform("sim_1q", std::nullopt, 1);
  qcal::ResonatorSweep sweep;
  sweep.freqs = {linspace(6.99e9, 7.01e9, 101)};
  sweep.nshots = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto data = platform->execute({{0}, sweep});
    benchmark::DoNotOptimize(data.data());
  }
}
BENCHMARK(ResonatorSweepShots)->Arg(256)->Arg(1024)->Arg(4096);

void SingleShotAcquisition(benchmark::State& state) {
  auto platform = qcal::load_platform("sim_1q", std::nullopt, 1);
  qcal::SingleShot shot;
  shot.nshots = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto data = platform->execute({{0}, shot});
    benchmark::DoNotOptimize(data.data());
  }
}
BENCHMARK(SingleShotAcquisition)->Arg(1024)->Arg(5000);

void MultiplexedRamsey(benchmark::State& state) {
  auto platform = qcal::load_platform("sim_5q", std::nullopt, 1);
  qcal::Ramsey ramsey;
  ramsey.delays = linspace(0, 8e-5, 161);
  ramsey.nshots = 1024;
  std::vector<int> qubits;
  for (int q = 0; q < state.range(0); ++q) qubits.push_back(q);
  for (auto _ : state) {
    auto data = platform->execute({qubits, ramsey});
    benchmark::DoNotOptimize(data.data());
  }
}
BENCHMARK(MultiplexedRamsey)->Arg(1)->Arg(5);

}  // namespace
