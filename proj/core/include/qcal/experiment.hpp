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

#include <complex>
#include <cstdint>
#include <variant>
#include <vector>

namespace qcal {

/// 2x2 complex unitary, row major.
struct Unitary2 {
  std::complex<double> u00, u01, u10, u11;

  Unitary2 operator*(const Unitary2& o) const {
    return {u00 * o.u00 + u01 * o.u10, u00 * o.u01 + u01 * o.u11,
            u10 * o.u00 + u11 * o.u10, u10 * o.u01 + u11 * o.u11};
  }
  Unitary2 adjoint() const {
    return {std::conj(u00), std::conj(u10), std::conj(u01), std::conj(u11)};
  }
};

/// Equal modulo global phase: |tr(U^dag V)| == 2 within tol.
inline bool same_up_to_phase(const Unitary2& a, const Unitary2& b,
                             double tol = 1e-9) {
  std::complex<double> tr = std::conj(a.u00) * b.u00 + std::conj(a.u10) * b.u10 +
                            std::conj(a.u01) * b.u01 + std::conj(a.u11) * b.u11;
  return std::abs(std::abs(tr) - 2.0) < tol;
}

// -------------------------------------------------------------------------
// Experiment requests understood by every platform.

/// Readout-frequency sweep around the resonator; IQ response per point.
/// Multiplexed readout drives each resonator on its own tone, so the sweep
/// carries one frequency list per target qubit.
struct ResonatorSweep {
  std::vector<std::vector<double>> freqs;  // Hz, strictly increasing, per target
  int nshots = 1024;
  int prepared_state = 0;  // 0 or 1; shifts the dip by the dispersive term
};

/// Drive-frequency sweep; excited-state probability per point.
struct QubitDriveSweep {
  std::vector<std::vector<double>> drive_freqs;  // Hz, per target qubit
  double drive_amplitude = 0.1;
  double drive_duration = 1e-7;  // s
  int nshots = 1024;
};

/// Drive-amplitude sweep at fixed duration.
struct RabiAmplitude {
  std::vector<double> amplitudes;  // strictly increasing
  double duration = 4e-8;          // s
  int nshots = 1024;
};

/// Excite, wait, measure.
struct T1Delay {
  std::vector<double> delays;  // s, strictly increasing
  int nshots = 1024;
};

/// Two half rotations separated by a variable delay, with a programmed
/// detuning added to the drive.
struct Ramsey {
  std::vector<double> delays;  // s, strictly increasing
  double detuning = 5e5;       // Hz
  int nshots = 1024;
};

/// nshots ground-state preparations and nshots pi-pulse preparations,
/// each measured as a single IQ point.
struct SingleShot {
  int nshots = 5000;
};

/// Per-qubit gate sequence over a shared gate vocabulary, executed on the
/// device and measured in the computational basis.
struct GateSequence {
  std::vector<Unitary2> gates;              // shared vocabulary
  std::vector<std::vector<int>> sequences;  // one index list per target qubit
  int nshots = 256;
};

using ExperimentKind = std::variant<ResonatorSweep, QubitDriveSweep,
                                    RabiAmplitude, T1Delay, Ramsey, SingleShot,
                                    GateSequence>;

/// An experiment request plus the qubits it targets. Multiple targets mean
/// simultaneous (multiplexed) acquisition: one call, one dataset per qubit.
struct ExperimentSpec {
  std::vector<int> qubits;
  ExperimentKind kind;
};

}  // namespace qcal
