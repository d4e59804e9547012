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

#include <cstddef>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "qcal/errors.hpp"

namespace qcal {

/// One table cell: acquisition data is numeric except for serialized gate
/// sequences, which are stored as strings.
using Cell = std::variant<double, std::string>;

struct Column {
  std::string name;
  bool numeric = true;
  std::vector<double> values;        // used when numeric
  std::vector<std::string> strings;  // used otherwise

  std::size_t size() const { return numeric ? values.size() : strings.size(); }

  bool operator==(const Column&) const = default;
};

/// Tabular acquisition result for one qubit and one protocol.
struct DataSet {
  std::string protocol;
  int qubit = 0;
  std::vector<Column> columns;
  std::map<std::string, double> meta;

  std::size_t num_rows() const {
    return columns.empty() ? 0 : columns.front().size();
  }

  const Column* find_column(const std::string& name) const {
    for (const auto& c : columns)
      if (c.name == name) return &c;
    return nullptr;
  }

  /// Numeric column lookup; throws FormatError if absent or non-numeric.
  const std::vector<double>& numeric_column(const std::string& name) const {
    const Column* c = find_column(name);
    if (!c) throw FormatError("dataset has no column '" + name + "'");
    if (!c->numeric)
      throw FormatError("column '" + name + "' is not numeric");
    return c->values;
  }

  void add_numeric_column(const std::string& name) {
    columns.push_back(Column{name, true, {}, {}});
  }
  void add_string_column(const std::string& name) {
    columns.push_back(Column{name, false, {}, {}});
  }

  /// Appends one row; cell count must match the column count.
  void add_row(const std::vector<Cell>& cells) {
    if (cells.size() != columns.size())
      throw DimensionMismatch("row has " + std::to_string(cells.size()) +
                              " cells, dataset has " +
                              std::to_string(columns.size()) + " columns");
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (columns[i].numeric)
        columns[i].values.push_back(std::get<double>(cells[i]));
      else
        columns[i].strings.push_back(std::get<std::string>(cells[i]));
    }
  }

  std::vector<Cell> row(std::size_t r) const {
    std::vector<Cell> out;
    out.reserve(columns.size());
    for (const auto& c : columns) {
      if (c.numeric)
        out.emplace_back(c.values.at(r));
      else
        out.emplace_back(c.strings.at(r));
    }
    return out;
  }

  bool operator==(const DataSet&) const = default;
};

}  // namespace qcal
