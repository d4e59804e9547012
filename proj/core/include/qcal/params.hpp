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
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "qcal/errors.hpp"

namespace qcal {

/// Scalar or list value of a runcard action parameter. Integers and
/// floating point numbers are kept distinct so documents round-trip
/// type-stable.
using ParamValue = std::variant<std::int64_t, double, std::string,
                                std::vector<std::int64_t>,
                                std::vector<double>>;

using ParamMap = std::map<std::string, ParamValue>;

/// Numeric read that accepts either an integer or a double value.
inline double param_as_number(const ParamMap& params, const std::string& key) {
  auto it = params.find(key);
  if (it == params.end())
    throw ParameterError("missing parameter '" + key + "'");
  if (const auto* i = std::get_if<std::int64_t>(&it->second))
    return static_cast<double>(*i);
  if (const auto* d = std::get_if<double>(&it->second)) return *d;
  throw ParameterError("parameter '" + key + "' is not a number");
}

inline std::int64_t param_as_int(const ParamMap& params,
                                 const std::string& key) {
  auto it = params.find(key);
  if (it == params.end())
    throw ParameterError("missing parameter '" + key + "'");
  if (const auto* i = std::get_if<std::int64_t>(&it->second)) return *i;
  throw ParameterError("parameter '" + key + "' is not an integer");
}

inline std::string param_as_string(const ParamMap& params,
                                   const std::string& key) {
  auto it = params.find(key);
  if (it == params.end())
    throw ParameterError("missing parameter '" + key + "'");
  if (const auto* s = std::get_if<std::string>(&it->second)) return *s;
  throw ParameterError("parameter '" + key + "' is not a string");
}

inline std::vector<std::int64_t> param_as_int_list(const ParamMap& params,
                                                   const std::string& key) {
  auto it = params.find(key);
  if (it == params.end())
    throw ParameterError("missing parameter '" + key + "'");
  if (const auto* l = std::get_if<std::vector<std::int64_t>>(&it->second))
    return *l;
  if (const auto* i = std::get_if<std::int64_t>(&it->second)) return {*i};
  throw ParameterError("parameter '" + key + "' is not an integer list");
}

}  // namespace qcal
