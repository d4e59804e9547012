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

#include "qcal/executor.hpp"

#include <fstream>
#include <map>

#include "qcal/dataio.hpp"
#include "serialize.hpp"
#include "util.hpp"

#ifndef QCAL_VERSION
#define QCAL_VERSION "0.0.0"
#endif
#ifndef QCAL_YAML_CPP_VERSION
#define QCAL_YAML_CPP_VERSION "unknown"
#endif

namespace qcal {
namespace {

namespace fs = std::filesystem;
using detail::calibration_to_json;
using detail::fit_to_json;
using detail::ordered_json;
using detail::param_to_json;
using detail::write_text_atomic;

ordered_json record_to_json(const ActionRecord& r) {
  ordered_json j;
  j["index"] = r.index;
  j["action"] = r.action;
  j["qubit"] = r.qubit;
  j["dataset_file"] = r.dataset_file;
  j["fit_file"] = r.fit_file;
  j["status"] = r.status;
  if (!r.message.empty()) j["message"] = r.message;
  return j;
}

/// Streams acquisition rows straight to per-qubit CSV files, flushing after
/// every row so concurrent readers always see complete rows.
class CsvRowSink final : public RowSink {
 public:
  explicit CsvRowSink(std::map<int, fs::path> paths)
      : paths_(std::move(paths)) {}

  void begin_dataset(const DataSet& header) override {
    auto it = paths_.find(header.qubit);
    if (it == paths_.end()) return;
    auto& out = files_[header.qubit];
    out.open(it->second, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + it->second.string());
    out << csv_header_line(header);
    out.flush();
  }

  void append_row(int qubit, const std::vector<Cell>& row) override {
    auto it = files_.find(qubit);
    if (it == files_.end()) return;
    it->second << csv_row_line(row);
    it->second.flush();
  }

 private:
  std::map<int, fs::path> paths_;
  std::map<int, std::ofstream> files_;
};

class MetaWriter {
 public:
  MetaWriter(const fs::path& dir, const ValidatedPlan& plan,
             const Platform& platform, const RunOptions& options)
      : path_(dir / "meta.json") {
    doc_["tool"] = "qcal";
    doc_["version"] = QCAL_VERSION;
    doc_["dependencies"] = {
        {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                              std::to_string(NLOHMANN_JSON_VERSION_MINOR) +
                              "." +
                              std::to_string(NLOHMANN_JSON_VERSION_PATCH)},
        {"yaml-cpp", QCAL_YAML_CPP_VERSION},
        {"cpp-httplib", detail::httplib_version_string()},
        {"zlib", detail::zlib_version_string()}};
    doc_["platform"] = plan.runcard.platform;
    doc_["num_qubits"] = platform.num_qubits();
    doc_["qubits"] = plan.runcard.qubits;
    doc_["format"] = to_string(plan.runcard.format);
    doc_["seed"] = options.seed;
    doc_["policy"] = to_string(options.policy);
    doc_["started_at"] = detail::iso8601_now();
    doc_["runcard"] = serialize_runcard(plan.runcard);
    std::vector<std::string> names;
    for (const auto& a : plan.actions) names.push_back(a.name);
    doc_["actions"] = names;
    doc_["records"] = ordered_json::array();
    flush();
  }

  void add_records(const std::vector<ActionRecord>& records) {
    for (const auto& r : records) doc_["records"].push_back(record_to_json(r));
    flush();
  }

  void finish() {
    doc_["finished_at"] = detail::iso8601_now();
    flush();
  }

 private:
  void flush() { write_text_atomic(path_, doc_.dump(2) + "\n"); }

  fs::path path_;
  ordered_json doc_;
};

void write_calibration_file(const fs::path& dir, const Platform& platform,
                            const std::vector<int>& qubits) {
  ordered_json doc;
  doc["platform"] = platform.name();
  ordered_json arr = ordered_json::array();
  for (int q : qubits) {
    ordered_json entry;
    entry["id"] = q;
    entry["fields"] = calibration_to_json(platform.calibration(q));
    arr.push_back(std::move(entry));
  }
  doc["qubits"] = std::move(arr);
  write_text_atomic(dir / "calibration.json", doc.dump(2) + "\n");
}

void write_fit_file(const fs::path& path, const std::string& action,
                    const QubitOutcome& o, const ParamMap& params,
                    const QubitCalibration& cal_used) {
  ordered_json doc;
  doc["action"] = action;
  doc["qubit"] = o.qubit;
  doc["status"] = o.succeeded ? "succeeded" : "failed";
  if (!o.error.empty()) doc["error"] = o.error;
  if (o.fit) doc["fit"] = fit_to_json(*o.fit);
  if (!o.extra_fits.empty()) {
    ordered_json extras = ordered_json::array();
    for (const auto& [name, fit] : o.extra_fits) {
      ordered_json e;
      e["name"] = name;
      e["fit"] = fit_to_json(fit);
      extras.push_back(std::move(e));
    }
    doc["extra_fits"] = std::move(extras);
  }
  if (!o.notes.empty()) {
    ordered_json notes = ordered_json::object();
    for (const auto& [k, v] : o.notes) notes[k] = v;
    doc["notes"] = std::move(notes);
  }
  if (!o.series.empty()) {
    ordered_json series = ordered_json::object();
    for (const auto& [k, v] : o.series) series[k] = v;
    doc["series"] = std::move(series);
  }
  ordered_json acq;
  ordered_json pj = ordered_json::object();
  for (const auto& [k, v] : params) pj[k] = param_to_json(v);
  acq["params"] = std::move(pj);
  acq["calibration"] = calibration_to_json(cal_used);
  doc["acquisition"] = std::move(acq);
  write_text_atomic(path, doc.dump(2) + "\n");
}

}  // namespace

RunOutput run_plan(const ValidatedPlan& plan, Platform& platform,
                   const fs::path& output_dir, const RunOptions& options) {
  std::error_code ec;
  if (fs::exists(output_dir) && !fs::is_directory(output_dir))
    throw IoError(output_dir.string() + " exists and is not a directory");
  if (fs::exists(output_dir) && !fs::is_empty(output_dir) && !options.force)
    throw IoError(output_dir.string() +
                  " is not empty (use force to overwrite)");
  fs::create_directories(output_dir, ec);
  if (ec) throw IoError("cannot create " + output_dir.string());

  RunOutput out;
  out.output_dir = output_dir;
  out.all_succeeded = true;

  MetaWriter meta(output_dir, plan, platform, options);
  write_calibration_file(output_dir, platform, plan.runcard.qubits);

  bool halted = false;
  for (std::size_t ai = 0; ai < plan.actions.size(); ++ai) {
    const PlannedAction& action = plan.actions[ai];
    std::vector<ActionRecord> records;

    if (halted) {
      for (int q : plan.runcard.qubits) {
        ActionRecord r;
        r.index = static_cast<int>(ai);
        r.action = action.name;
        r.qubit = q;
        r.status = "skipped";
        r.message = "skipped after earlier failure (halt policy)";
        records.push_back(r);
        out.records.push_back(r);
      }
      meta.add_records(records);
      continue;
    }

    fs::path action_dir =
        output_dir / "data" / (std::to_string(ai) + "-" + action.name);
    std::map<int, fs::path> csv_paths;
    for (int q : plan.runcard.qubits) {
      fs::path qdir = action_dir / std::to_string(q);
      fs::create_directories(qdir, ec);
      if (ec) throw IoError("cannot create " + qdir.string());
      csv_paths[q] = qdir / "data.csv";
    }

    // Calibration snapshot as used for this acquisition.
    std::map<int, QubitCalibration> cal_before;
    for (int q : plan.runcard.qubits)
      cal_before[q] = platform.calibration(q);

    CsvRowSink sink(csv_paths);
    ProtocolContext ctx{options.seed, static_cast<int>(ai)};
    std::vector<QubitOutcome> outcomes;
    std::string acquisition_error;
    try {
      outcomes = action.protocol->run(platform, plan.runcard.qubits,
                                      action.params, ctx, &sink);
    } catch (const Error& e) {
      acquisition_error = e.what();
    }

    bool any_failed = false;
    if (!acquisition_error.empty()) {
      any_failed = true;
      for (int q : plan.runcard.qubits) {
        ActionRecord r;
        r.index = static_cast<int>(ai);
        r.action = action.name;
        r.qubit = q;
        r.status = "failed";
        r.message = acquisition_error;
        records.push_back(r);
        out.records.push_back(r);
      }
    } else {
      for (QubitOutcome& o : outcomes) {
        fs::path qdir = action_dir / std::to_string(o.qubit);
        // Feed the fitted parameters forward before the next action.
        if (o.succeeded && !o.update.empty()) {
          try {
            platform.update_calibration(o.qubit, o.update);
          } catch (const Error& e) {
            o.succeeded = false;
            o.error = e.what();
          }
        }
        std::string data_name = "data.csv";
        if (plan.runcard.format == StorageFormat::json) {
          write_dataset(o.data, DataFormat::json, qdir / "data.json");
          fs::remove(qdir / "data.csv", ec);
          data_name = "data.json";
        }
        write_fit_file(qdir / "fit.json", action.name, o, action.params,
                       cal_before[o.qubit]);

        ActionRecord r;
        r.index = static_cast<int>(ai);
        r.action = action.name;
        r.qubit = o.qubit;
        r.dataset_file = (fs::path("data") /
                          (std::to_string(ai) + "-" + action.name) /
                          std::to_string(o.qubit) / data_name)
                             .string();
        r.fit_file = (fs::path("data") /
                      (std::to_string(ai) + "-" + action.name) /
                      std::to_string(o.qubit) / "fit.json")
                         .string();
        r.status = o.succeeded ? "succeeded" : "failed";
        r.message = o.error;
        if (!o.succeeded) any_failed = true;
        records.push_back(r);
        out.records.push_back(r);
      }
    }

    meta.add_records(records);
    write_calibration_file(output_dir, platform, plan.runcard.qubits);
    if (any_failed) {
      out.all_succeeded = false;
      if (options.policy == RunPolicy::halt) halted = true;
    }
  }

  meta.finish();
  for (int q : plan.runcard.qubits)
    out.final_calibration[q] = platform.calibration(q);
  return out;
}

}  // namespace qcal
