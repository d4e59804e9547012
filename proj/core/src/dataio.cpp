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

#include "qcal/dataio.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "util.hpp"

namespace qcal {
namespace {

using ordered_json = nlohmann::ordered_json;

bool needs_quoting(const std::string& s) {
  return s.find_first_of(",\"\r\n") != std::string::npos;
}

std::string csv_field(const std::string& s) {
  if (!needs_quoting(s)) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

bool full_parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  const char* b = s.data();
  const char* e = b + s.size();
  auto r = std::from_chars(b, e, out);
  return r.ec == std::errc{} && r.ptr == e;
}

// RFC 4180 record parser that tolerates a truncated final record.
struct CsvParse {
  std::vector<std::vector<std::string>> rows;
  bool partial = false;
};

CsvParse parse_csv_records(const std::string& text) {
  CsvParse out;
  std::vector<std::string> row;
  std::string field;
  bool in_quotes = false;
  bool row_has_content = false;
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < n && text[i + 1] == '"') {
          field += '"';
          i += 2;
          continue;
        }
        in_quotes = false;
        ++i;
        continue;
      }
      field += c;
      ++i;
      continue;
    }
    switch (c) {
      case '"':
        in_quotes = true;
        row_has_content = true;
        ++i;
        break;
      case ',':
        row.push_back(std::move(field));
        field.clear();
        row_has_content = true;
        ++i;
        break;
      case '\r':
        ++i;
        break;
      case '\n':
        row.push_back(std::move(field));
        field.clear();
        out.rows.push_back(std::move(row));
        row.clear();
        row_has_content = false;
        ++i;
        break;
      default:
        field += c;
        row_has_content = true;
        ++i;
    }
  }
  // Anything after the last newline is an in-flight row.
  if (in_quotes || row_has_content || !field.empty() || !row.empty())
    out.partial = true;
  return out;
}

}  // namespace

std::string csv_header_line(const DataSet& ds) {
  std::string line;
  for (std::size_t c = 0; c < ds.columns.size(); ++c) {
    if (c) line += ',';
    line += csv_field(ds.columns[c].name);
  }
  line += '\n';
  return line;
}

std::string csv_row_line(const std::vector<Cell>& row) {
  std::string line;
  for (std::size_t c = 0; c < row.size(); ++c) {
    if (c) line += ',';
    if (const double* d = std::get_if<double>(&row[c]))
      line += detail::format_double(*d);
    else
      line += csv_field(std::get<std::string>(row[c]));
  }
  line += '\n';
  return line;
}

std::string dataset_to_csv(const DataSet& ds) {
  std::string out = csv_header_line(ds);
  for (std::size_t r = 0; r < ds.num_rows(); ++r)
    out += csv_row_line(ds.row(r));
  return out;
}

ReadResult dataset_from_csv(const std::string& text) {
  CsvParse parsed = parse_csv_records(text);
  if (parsed.rows.empty())
    throw FormatError("csv document has no header row");
  ReadResult out;
  out.partial_row = parsed.partial;
  const auto& header = parsed.rows.front();
  const std::size_t ncols = header.size();

  // A column is numeric when every cell parses fully as a double.
  std::vector<bool> numeric(ncols, true);
  for (std::size_t r = 1; r < parsed.rows.size(); ++r) {
    if (parsed.rows[r].size() != ncols)
      throw FormatError("csv row " + std::to_string(r + 1) + " has " +
                        std::to_string(parsed.rows[r].size()) +
                        " fields, expected " + std::to_string(ncols));
    for (std::size_t c = 0; c < ncols; ++c) {
      double v;
      if (!full_parse_double(parsed.rows[r][c], v)) numeric[c] = false;
    }
  }
  for (std::size_t c = 0; c < ncols; ++c) {
    if (numeric[c])
      out.data.add_numeric_column(header[c]);
    else
      out.data.add_string_column(header[c]);
  }
  for (std::size_t r = 1; r < parsed.rows.size(); ++r) {
    std::vector<Cell> row;
    row.reserve(ncols);
    for (std::size_t c = 0; c < ncols; ++c) {
      if (numeric[c]) {
        double v = 0;
        full_parse_double(parsed.rows[r][c], v);
        row.emplace_back(v);
      } else {
        row.emplace_back(parsed.rows[r][c]);
      }
    }
    out.data.add_row(row);
  }
  return out;
}

std::string dataset_to_json(const DataSet& ds) {
  ordered_json doc;
  doc["protocol"] = ds.protocol;
  doc["qubit"] = ds.qubit;
  ordered_json cols = ordered_json::object();
  for (const auto& c : ds.columns) {
    if (c.numeric)
      cols[c.name] = c.values;
    else
      cols[c.name] = c.strings;
  }
  doc["columns"] = std::move(cols);
  ordered_json meta = ordered_json::object();
  for (const auto& [k, v] : ds.meta) meta[k] = v;
  doc["meta"] = std::move(meta);
  return doc.dump(2) + "\n";
}

DataSet dataset_from_json(const std::string& text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("invalid json dataset: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("columns"))
    throw FormatError("json dataset must be an object with 'columns'");
  DataSet ds;
  ds.protocol = doc.value("protocol", std::string{});
  ds.qubit = doc.value("qubit", 0);
  std::size_t rows = 0;
  bool first = true;
  for (auto it = doc["columns"].begin(); it != doc["columns"].end(); ++it) {
    const auto& arr = it.value();
    if (!arr.is_array())
      throw FormatError("column '" + it.key() + "' is not an array");
    bool numeric = true;
    for (const auto& v : arr)
      if (!v.is_number()) numeric = false;
    Column col;
    col.name = it.key();
    col.numeric = numeric;
    for (const auto& v : arr) {
      if (numeric)
        col.values.push_back(v.get<double>());
      else if (v.is_string())
        col.strings.push_back(v.get<std::string>());
      else
        throw FormatError("column '" + it.key() + "' mixes types");
    }
    if (first) {
      rows = col.size();
      first = false;
    } else if (col.size() != rows) {
      throw FormatError("column '" + it.key() + "' length differs");
    }
    ds.columns.push_back(std::move(col));
  }
  if (doc.contains("meta")) {
    for (auto it = doc["meta"].begin(); it != doc["meta"].end(); ++it) {
      if (!it.value().is_number())
        throw FormatError("meta entry '" + it.key() + "' is not a number");
      ds.meta[it.key()] = it.value().get<double>();
    }
  }
  return ds;
}

void write_dataset(const DataSet& ds, DataFormat format,
                   const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << (format == DataFormat::csv ? dataset_to_csv(ds)
                                    : dataset_to_json(ds));
  out.flush();
  if (!out) throw IoError("short write to " + path.string());
}

ReadResult read_dataset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  std::string text = buf.str();
  if (path.extension() == ".csv") return dataset_from_csv(text);
  if (path.extension() == ".json") return {dataset_from_json(text), false};
  throw FormatError("unknown dataset extension on " + path.string());
}

}  // namespace qcal
