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

#include "qcal/platform.hpp"

#include "qcal/errors.hpp"
#include "sim_platform.hpp"

namespace qcal {

std::vector<std::string> available_platforms() { return {"sim_1q", "sim_5q"}; }

std::unique_ptr<Platform> load_platform(
    const std::string& name,
    const std::optional<std::filesystem::path>& parameter_file,
    std::uint64_t seed) {
  if (name == "sim_1q")
    return detail::make_sim_platform(name, 1, parameter_file, seed);
  if (name == "sim_5q")
    return detail::make_sim_platform(name, 5, parameter_file, seed);
  std::string known;
  for (const auto& n : available_platforms())
    known += (known.empty() ? "" : ", ") + n;
  throw UnknownPlatform("'" + name + "' (available: " + known + ")");
}

}  // namespace qcal
