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

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qcal/experiment.hpp"
#include "qcal/fitting.hpp"
#include "qcal/platform.hpp"

namespace qcal {

/// Finite set of single-qubit unitaries closed under composition modulo
/// global phase, with precomputed composition and inverse tables. The
/// identity sits at index 0.
struct GateSet {
  std::string name;
  std::vector<Unitary2> elements;
  std::vector<std::vector<int>> compose_table;
  std::vector<int> inverse_table;
  std::vector<double> sampling;  // per-element weights, uniform by default
  bool abelian = false;
  /// For abelian sets: one +/-1 character vector per irrep, trivial first.
  std::vector<std::vector<double>> characters;

  int size() const { return static_cast<int>(elements.size()); }
  int compose(int a, int b) const { return compose_table[a][b]; }
  int inverse(int a) const { return inverse_table[a]; }

  /// Index of the product of a gate sequence applied left to right.
  int compose_sequence(std::span<const int> gates) const {
    int total = 0;
    for (int g : gates) total = compose_table[g][total];
    return total;
  }
};

/// The 24-element single-qubit Clifford group, built as the closure of
/// {H, S} under multiplication modulo global phase.
GateSet clifford_group();

/// {I, X, Y, Z} modulo phase (order 4, abelian).
GateSet pauli_gateset();

/// {I, X} (order 2, abelian).
GateSet xid_gateset();

struct Circuit {
  int depth = 0;            // number of randomly sampled gates
  std::vector<int> gates;   // depth entries, plus the inverse when appended
};

struct CircuitEnsembleSpec {
  GateSet gate_set;
  std::vector<int> depths;  // strictly increasing, >= 0
  int circuits_per_depth = 30;
  int shots_per_circuit = 256;
  bool append_inverse = true;
  std::uint64_t seed = 0;
};

/// Draws the random circuit ensemble; deterministic under the spec seed.
std::vector<Circuit> sample_circuits(const CircuitEnsembleSpec& spec);

/// One executed circuit with its outcome counts.
struct CircuitRecord {
  int depth = 0;
  std::vector<int> gates;
  long count0 = 0;
  long count1 = 0;

  double survival() const {
    return static_cast<double>(count0) / (count0 + count1);
  }
};

/// Executes each circuit as one GateSequence call on the platform.
std::vector<CircuitRecord> run_circuits(Platform& platform, int qubit,
                                        const GateSet& gates,
                                        const std::vector<Circuit>& circuits,
                                        int shots_per_circuit);

/// Per-depth aggregation of a per-circuit statistic; permutation-invariant
/// within each depth group.
struct DepthAggregate {
  std::vector<double> depths;
  std::vector<double> means;
  std::vector<double> sems;    // standard error of the mean per depth
  std::vector<int> counts;
};

DepthAggregate aggregate_by_depth(
    const std::vector<CircuitRecord>& records,
    const std::function<double(const CircuitRecord&)>& per_circuit);

/// Character-weighted per-circuit statistic for one irrep:
/// chi(g_total) * (count0/n - 1/2) * 2.
double filtered_statistic(const GateSet& gates,
                          std::span<const double> character,
                          const CircuitRecord& record);

struct StandardRbResult {
  FitResult fit;                       // A*p^m + B
  double avg_gate_fidelity = 0.0;
  DepthAggregate aggregate;
  std::vector<CircuitRecord> records;
};

/// Standard randomized benchmarking: inverse-appended circuits, ground
/// state return probability, A*p^m + B decay fit.
StandardRbResult run_standard_rb(Platform& platform, int qubit,
                                 const CircuitEnsembleSpec& spec);

/// Estimation stage of standard RB alone (per-circuit survival ->
/// depth means -> decay fit), so synthetic records can bypass the platform.
FitResult standard_rb_estimate(const std::vector<CircuitRecord>& records,
                               DepthAggregate* aggregate_out = nullptr);

struct IrrepResult {
  std::string name;                 // "lambda0", "lambda1", ...
  std::vector<double> character;
  bool trivial = false;
  bool has_signal = false;
  DepthAggregate aggregate;
  std::optional<FitResult> fit;     // A*p^m, only when fitted
  std::string error;                // set when the fit diverged
};

struct FilteredRbResult {
  std::vector<IrrepResult> irreps;
  std::vector<CircuitRecord> records;
};

/// Filtered RB on an abelian gate set: no inverse appended; per irrep the
/// character-weighted statistic is aggregated by depth and fitted to
/// A*p^m. The trivial irrep is reported but never fitted; irreps without
/// signal are flagged instead of fitted.
FilteredRbResult run_filtered_rb(Platform& platform, int qubit,
                                 const CircuitEnsembleSpec& spec);

/// Estimation stage of filtered RB alone, reusable on records built
/// from exact probabilities.
std::vector<IrrepResult> filtered_rb_estimate(
    const GateSet& gates, const std::vector<CircuitRecord>& records);

}  // namespace qcal
