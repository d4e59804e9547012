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
#include <vector>

#include "qcal/calibration.hpp"
#include "qcal/dataset.hpp"
#include "qcal/experiment.hpp"

namespace qcal {

/// Device abstraction every calibration routine talks to. One instance is
/// owned by one executor at a time; no concurrent calls on one instance.
class Platform {
 public:
  virtual ~Platform() = default;

  virtual const std::string& name() const = 0;
  virtual int num_qubits() const = 0;
  virtual std::uint64_t seed() const = 0;

  virtual const QubitCalibration& calibration(int qubit) const = 0;

  /// Applies a partial update; updated fields are flagged calibrated and
  /// used by subsequent execute() calls. Throws InvariantViolation when a
  /// field constraint would be broken (e.g. t2 > 2*t1).
  virtual void update_calibration(int qubit, const CalibrationUpdate& u) = 0;

  /// Runs one experiment, returning one dataset per target qubit in the
  /// order of spec.qubits. Deterministic under (seed, call sequence).
  virtual std::vector<DataSet> execute(const ExperimentSpec& spec) = 0;
};

/// Registered platform names ("sim_1q" and "sim_5q" ship by default).
std::vector<std::string> available_platforms();

/// Instantiates a platform. @p parameter_file overrides the built-in device
/// parameters (JSON, schema documented in the README; unknown keys are
/// rejected with ParameterFileError). Throws UnknownPlatform for
/// unregistered names.
std::unique_ptr<Platform> load_platform(
    const std::string& name,
    const std::optional<std::filesystem::path>& parameter_file,
    std::uint64_t seed);

}  // namespace qcal
