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

#include "qcal/dataset.hpp"

namespace qcal {

enum class DataFormat { csv, json };

/// Writes a complete dataset. CSV: header row of column names, RFC 4180
/// quoting, shortest round-trip decimals. JSON: object with "columns"
/// (name -> array) and "meta". read_dataset(write_dataset(ds)) == ds.
void write_dataset(const DataSet& ds, DataFormat format,
                   const std::filesystem::path& path);

struct ReadResult {
  DataSet data;
  /// True when the file ended mid-row (live acquisition); complete rows are
  /// still returned.
  bool partial_row = false;
};

/// Reads a dataset; the format is chosen by the file extension. A truncated
/// CSV (as written during live acquisition) yields all complete rows plus
/// the partial-row indicator.
ReadResult read_dataset(const std::filesystem::path& path);

// String-level codecs (file-free, used by the tests and the live renderer).
std::string dataset_to_csv(const DataSet& ds);
ReadResult dataset_from_csv(const std::string& text);
std::string dataset_to_json(const DataSet& ds);
DataSet dataset_from_json(const std::string& text);

/// One CSV line for the header / a row, newline terminated (incremental
/// append path used by the executor).
std::string csv_header_line(const DataSet& ds);
std::string csv_row_line(const std::vector<Cell>& row);

}  // namespace qcal
