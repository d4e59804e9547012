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
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qcal/fitting.hpp"
#include "qcal/params.hpp"
#include "qcal/platform.hpp"

namespace qcal {

enum class ParamType { integer, number, string, integer_list, number_list };

struct ParamSpec {
  std::string name;
  ParamType type = ParamType::number;
  ParamValue default_value;
  std::optional<double> min;   // inclusive unless exclusive_min
  std::optional<double> max;
  bool exclusive_min = false;
  std::string description;
};

struct PlotSpec {
  enum class Kind { xy, iq, rb } kind = Kind::xy;
  std::string x_column, y_column;
  std::string x_label, y_label;
};

struct ProtocolInfo {
  std::string name;
  std::string description;
  std::vector<ParamSpec> schema;
  std::vector<std::string> owned_fields;  // calibration fields it may update
  std::size_t min_fit_points = 8;         // rows needed for a provisional fit
  PlotSpec plot;
};

/// Run-scoped inputs a protocol needs beyond its parameters.
struct ProtocolContext {
  std::uint64_t seed = 0;
  int action_index = 0;
};

/// Receives rows as they are acquired so the executor can flush them to
/// disk with per-row granularity.
class RowSink {
 public:
  virtual ~RowSink() = default;
  virtual void begin_dataset(const DataSet& header) = 0;
  virtual void append_row(int qubit, const std::vector<Cell>& row) = 0;
};

/// Result of one protocol on one qubit.
struct QubitOutcome {
  int qubit = 0;
  DataSet data;
  std::optional<FitResult> fit;  // primary analysis result
  std::vector<std::pair<std::string, FitResult>> extra_fits;
  std::map<std::string, std::string> notes;
  /// Named numeric arrays for reporting (e.g. per-depth decay means).
  std::map<std::string, std::vector<double>> series;
  CalibrationUpdate update;  // applied by the executor on success
  bool succeeded = false;
  std::string error;
};

/// A calibration routine: couples acquisition (an ExperimentSpec built from
/// the current calibration and the action parameters), analysis (a fit) and
/// the calibration update it owns.
class Protocol {
 public:
  virtual ~Protocol() = default;

  virtual const ProtocolInfo& info() const = 0;

  /// Acquires and analyzes for all target qubits (one multiplexed platform
  /// call per acquisition where possible). Per-qubit analysis failures are
  /// reported in the outcome; acquisition errors propagate.
  virtual std::vector<QubitOutcome> run(Platform& platform,
                                        std::span<const int> qubits,
                                        const ParamMap& params,
                                        const ProtocolContext& ctx,
                                        RowSink* sink) const = 0;

  /// Analysis alone, from a complete or partial dataset. Used for live
  /// provisional fits while the data file is still growing. Throws the
  /// protocol's typed analysis errors.
  virtual FitResult analyze(const DataSet& data,
                            const ParamMap& params) const = 0;

  /// Cross-field parameter validation beyond per-field ranges; receives the
  /// canonical map. Throws ParameterError.
  virtual void check_params(const ParamMap&) const {}
};

class ProtocolRegistry {
 public:
  void add(std::unique_ptr<Protocol> protocol);
  const Protocol* find(const std::string& name) const;  // nullptr if absent
  std::vector<std::string> names() const;

  /// The shipped catalog: resonator_spectroscopy, qubit_spectroscopy,
  /// rabi_amplitude, ramsey, t1, single_shot_classification, standard_rb,
  /// filtered_rb.
  static const ProtocolRegistry& standard();

 private:
  std::vector<std::unique_ptr<Protocol>> protocols_;
};

/// Applies schema defaults and validates names, types and ranges; throws
/// ParameterError with a per-field message.
ParamMap canonical_params(const Protocol& protocol, const ParamMap& given);

}  // namespace qcal
