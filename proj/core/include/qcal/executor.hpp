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
#include <map>
#include <string>
#include <vector>

#include "qcal/platform.hpp"
#include "qcal/runcard.hpp"

namespace qcal {

enum class RunPolicy { halt, continue_ };

inline const char* to_string(RunPolicy p) {
  return p == RunPolicy::halt ? "halt" : "continue";
}

struct ActionRecord {
  int index = 0;
  std::string action;
  int qubit = 0;
  std::string dataset_file;  // relative to the output directory
  std::string fit_file;
  std::string status;  // "succeeded" | "failed" | "skipped"
  std::string message;
};

struct RunOutput {
  std::filesystem::path output_dir;
  std::vector<ActionRecord> records;
  std::map<int, QubitCalibration> final_calibration;
  bool all_succeeded = false;
};

struct RunOptions {
  bool force = false;
  RunPolicy policy = RunPolicy::halt;
  std::uint64_t seed = 0;  // recorded in metadata; the platform is pre-seeded
};

/// Executes the plan sequentially against the platform. After each
/// successful analysis the fitted parameters are applied to the platform
/// before the next action runs. Every dataset row is appended and flushed
/// as acquired; fit results land next to the data. Layout:
///
///   output_dir/meta.json
///   output_dir/calibration.json
///   output_dir/data/<index>-<action>/<qubit>/{data.csv|data.json, fit.json}
///
/// On a failure RunPolicy::halt records the remaining actions as skipped;
/// RunPolicy::continue_ keeps going.
RunOutput run_plan(const ValidatedPlan& plan, Platform& platform,
                   const std::filesystem::path& output_dir,
                   const RunOptions& options = {});

}  // namespace qcal
