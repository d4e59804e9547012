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

#include <optional>
#include <string>
#include <vector>

namespace qcal {

/// One tunable device parameter plus the flag telling whether a calibration
/// routine has established it (as opposed to being an initial guess).
struct CalValue {
  double value = 0.0;
  bool calibrated = false;
};

/// Per-qubit parameter store. Values are SI: frequencies in Hz, durations
/// and decay times in seconds, amplitudes dimensionless in (0,1].
struct QubitCalibration {
  CalValue readout_frequency;
  CalValue drive_frequency;
  CalValue pi_pulse_amplitude;
  CalValue pi_pulse_duration;
  CalValue t1;
  CalValue t2;
  CalValue iq_angle;
  CalValue threshold;
  CalValue assignment_fidelity;
};

/// Partial update produced by a protocol; only set fields are applied and
/// every applied field becomes flagged as calibrated.
struct CalibrationUpdate {
  std::optional<double> readout_frequency;
  std::optional<double> drive_frequency;
  std::optional<double> pi_pulse_amplitude;
  std::optional<double> pi_pulse_duration;
  std::optional<double> t1;
  std::optional<double> t2;
  std::optional<double> iq_angle;
  std::optional<double> threshold;
  std::optional<double> assignment_fidelity;

  bool empty() const {
    return !readout_frequency && !drive_frequency && !pi_pulse_amplitude &&
           !pi_pulse_duration && !t1 && !t2 && !iq_angle && !threshold &&
           !assignment_fidelity;
  }
};

/// Stable field order used by serialization and reports.
inline const std::vector<std::string>& calibration_field_names() {
  static const std::vector<std::string> names = {
      "readout_frequency", "drive_frequency",      "pi_pulse_amplitude",
      "pi_pulse_duration", "t1",                   "t2",
      "iq_angle",          "threshold",            "assignment_fidelity"};
  return names;
}

inline CalValue* calibration_field(QubitCalibration& c, const std::string& n) {
  if (n == "readout_frequency") return &c.readout_frequency;
  if (n == "drive_frequency") return &c.drive_frequency;
  if (n == "pi_pulse_amplitude") return &c.pi_pulse_amplitude;
  if (n == "pi_pulse_duration") return &c.pi_pulse_duration;
  if (n == "t1") return &c.t1;
  if (n == "t2") return &c.t2;
  if (n == "iq_angle") return &c.iq_angle;
  if (n == "threshold") return &c.threshold;
  if (n == "assignment_fidelity") return &c.assignment_fidelity;
  return nullptr;
}

inline const CalValue* calibration_field(const QubitCalibration& c,
                                         const std::string& n) {
  return calibration_field(const_cast<QubitCalibration&>(c), n);
}

inline std::optional<double>* update_field(CalibrationUpdate& u,
                                           const std::string& n) {
  if (n == "readout_frequency") return &u.readout_frequency;
  if (n == "drive_frequency") return &u.drive_frequency;
  if (n == "pi_pulse_amplitude") return &u.pi_pulse_amplitude;
  if (n == "pi_pulse_duration") return &u.pi_pulse_duration;
  if (n == "t1") return &u.t1;
  if (n == "t2") return &u.t2;
  if (n == "iq_angle") return &u.iq_angle;
  if (n == "threshold") return &u.threshold;
  if (n == "assignment_fidelity") return &u.assignment_fidelity;
  return nullptr;
}

}  // namespace qcal
