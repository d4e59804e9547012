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

#include <string>
#include <vector>

#include "qcal/params.hpp"
#include "qcal/protocols.hpp"

namespace qcal {

enum class StorageFormat { csv, json };

inline const char* to_string(StorageFormat f) {
  return f == StorageFormat::csv ? "csv" : "json";
}

/// One queued calibration routine with its parameters.
struct Action {
  std::string name;
  ParamMap parameters;

  bool operator==(const Action&) const = default;
};

/// Parsed declarative pipeline: which platform and qubits to calibrate, the
/// storage format, and the ordered routine list.
struct Runcard {
  std::string platform;
  std::vector<int> qubits;
  StorageFormat format = StorageFormat::csv;
  std::vector<Action> actions;

  bool operator==(const Runcard&) const = default;
};

/// Parses the YAML runcard document (mappings, sequences and scalars only).
/// Top-level keys: platform (string), qubits (sequence of ints), format
/// ("csv"|"json"), actions (mapping protocol name -> parameter mapping,
/// order preserving). Numbers accept underscore separators and scientific
/// notation. Unknown top-level keys are rejected.
///
/// Throws SyntaxError (malformed document, with line number) or SchemaError
/// (missing or mistyped field, naming the field).
Runcard parse_runcard(const std::string& text);

/// Canonical document for a runcard; parse_runcard(serialize_runcard(r))
/// compares equal to r.
std::string serialize_runcard(const Runcard& runcard);

struct PlannedAction {
  std::string name;
  const Protocol* protocol = nullptr;
  ParamMap params;  // canonical: defaults applied, everything validated
};

/// Executable ordered plan; action order equals the document order.
struct ValidatedPlan {
  Runcard runcard;
  std::vector<PlannedAction> actions;
};

/// Resolves every action against the registry, validates parameters against
/// each protocol schema and checks qubit ids against the platform. Side
/// effect free. Throws UnknownProtocol (listing nearest registered names),
/// UnknownQubit or ParameterError.
ValidatedPlan validate_plan(const Runcard& runcard,
                            const ProtocolRegistry& registry,
                            const Platform& platform);

}  // namespace qcal
