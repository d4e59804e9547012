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
#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "qcal/platform.hpp"

namespace qcal::detail {

/// Hidden ground truth for one simulated transmon. The calibration pipeline
/// must recover these values without reading them.
struct TrueQubitParams {
  double resonator_frequency = 7.0e9;       // Hz
  double resonator_linewidth = 1.0e6;       // kappa, Hz
  double dispersive_shift = 0.5e6;          // full state-1 dip shift, Hz
  double qubit_frequency = 5.0e9;           // Hz
  double pi_pulse_amplitude = 0.4;          // dimensionless
  double pi_pulse_duration = 4.0e-8;        // s
  double t1 = 5.0e-5;                       // s
  double t2 = 3.0e-5;                       // s
  double iq_center_ground_i = 0.75;
  double iq_center_ground_q = -0.30;
  double iq_center_excited_i = 1.05;
  double iq_center_excited_q = 0.10;
  double iq_sigma = 0.125;                  // isotropic blob spread
  double readout_baseline = 1.0;            // off-resonant |S|
  double readout_dip_depth = 0.8;           // on-resonant magnitude drop
  double depolarizing_parameter = 0.99;     // per-gate channel parameter
  double readout_flip_probability = 0.01;   // discrete-shot misassignment
  double initial_readout_detuning = 3.0e6;  // guess = truth + this
  double initial_drive_detuning = -5.0e6;
  double initial_pi_amplitude_guess = 0.25;
};

/// Built-in staggered defaults for qubit index k (sim_1q uses k = 0).
TrueQubitParams default_qubit_params(int k);

std::unique_ptr<Platform> make_sim_platform(
    const std::string& name, int default_num_qubits,
    const std::optional<std::filesystem::path>& parameter_file,
    std::uint64_t seed);

}  // namespace qcal::detail
