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

#include <cmath>
#include <random>
#include <vector>

#include "qcal/fitting.hpp"

namespace {

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> out;
  for (int i = 0; i < n; ++i)
    out.push_back(lo + (hi - lo) * i / static_cast<double>(n - 1));
  return out;
}

void FitLorentzian(benchmark::State& state) {
  std::mt19937 gen(1);
  std::normal_distribution<double> noise(0.0, 0.01);
  std::vector<double> x = linspace(6.99e9, 7.01e9, state.range(0)), y;
  for (double xi : x) {
    double hw = 0.5e6;
    y.push_back(1.0 - 0.8 * hw * hw / ((xi - 7.0e9) * (xi - 7.0e9) + hw * hw) +
                noise(gen));
  }
  for (auto _ : state) {
    qcal::FitResult fit = qcal::fit_lorentzian(x, y, qcal::PeakSign::dip);
    benchmark::DoNotOptimize(fit.values.data());
  }
}
BENCHMARK(FitLorentzian)->Arg(101)->Arg(401);

void FitDampedOscillation(benchmark::State& state) {
  std::mt19937 gen(2);
  std::normal_distribution<double> noise(0.0, 0.015);
  std::vector<double> x = linspace(0, 8e-5, state.range(0)), y;
  for (double dt : x)
    y.push_back(0.5 * (1 + std::cos(2 * M_PI * 5e5 * dt) * std::exp(-dt / 3e-5)) +
                noise(gen));
  for (auto _ : state) {
    qcal::FitResult fit = qcal::fit_oscillation(x, y, true);
    benchmark::DoNotOptimize(fit.values.data());
  }
}
BENCHMARK(FitDampedOscillation)->Arg(161);

void TrainClassifier(benchmark::State& state) {
  std::mt19937 gen(3);
  std::normal_distribution<double> d(0.0, 1.0);
  std::vector<qcal::IqPoint> g, e;
  for (int i = 0; i < state.range(0); ++i) {
    g.push_back({d(gen), d(gen)});
    e.push_back({4.0 + d(gen), d(gen)});
  }
  for (auto _ : state) {
    qcal::FitResult fit = qcal::train_classifier(g, e);
    benchmark::DoNotOptimize(fit.values.data());
  }
}
BENCHMARK(TrainClassifier)->Arg(5000)->Arg(20000);

}  // namespace
