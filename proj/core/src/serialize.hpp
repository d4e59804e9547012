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

#include <filesystem>
#include <string>

#include <json.hpp>

#include "qcal/calibration.hpp"
#include "qcal/fitting.hpp"
#include "qcal/params.hpp"

namespace qcal::detail {

using ordered_json = nlohmann::ordered_json;

ordered_json fit_to_json(const FitResult& fit);
ordered_json calibration_to_json(const QubitCalibration& cal);
ordered_json param_to_json(const ParamValue& v);

void write_text_atomic(const std::filesystem::path& path,
                       const std::string& text);
std::string read_text(const std::filesystem::path& path);

}  // namespace qcal::detail
