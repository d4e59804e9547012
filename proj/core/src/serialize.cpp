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

#include "serialize.hpp"

#include <fstream>
#include <sstream>

#include "qcal/errors.hpp"

namespace qcal::detail {

ordered_json fit_to_json(const FitResult& fit) {
  ordered_json j;
  j["model"] = fit.model;
  j["converged"] = fit.converged;
  j["iterations"] = fit.iterations;
  j["rss"] = fit.rss;
  if (!fit.diagnostic.empty()) j["diagnostic"] = fit.diagnostic;
  ordered_json params = ordered_json::object();
  for (std::size_t i = 0; i < fit.param_names.size(); ++i)
    params[fit.param_names[i]] = {{"value", fit.values[i]},
                                  {"sigma", fit.sigmas[i]}};
  j["params"] = std::move(params);
  if (!fit.derived.empty()) {
    ordered_json derived = ordered_json::object();
    for (const auto& [k, v] : fit.derived) derived[k] = v;
    j["derived"] = std::move(derived);
  }
  return j;
}

ordered_json calibration_to_json(const QubitCalibration& cal) {
  ordered_json out = ordered_json::object();
  for (const auto& name : calibration_field_names()) {
    const CalValue* f = calibration_field(cal, name);
    out[name] = {{"value", f->value}, {"calibrated", f->calibrated}};
  }
  return out;
}

ordered_json param_to_json(const ParamValue& v) {
  struct Visitor {
    ordered_json operator()(std::int64_t i) const { return i; }
    ordered_json operator()(double d) const { return d; }
    ordered_json operator()(const std::string& s) const { return s; }
    ordered_json operator()(const std::vector<std::int64_t>& l) const {
      return l;
    }
    ordered_json operator()(const std::vector<double>& l) const { return l; }
  };
  return std::visit(Visitor{}, v);
}

void write_text_atomic(const std::filesystem::path& path,
                       const std::string& text) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out << text;
    out.flush();
    if (!out) throw IoError("short write to " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec)
    throw IoError("cannot rename " + tmp.string() + ": " + ec.message());
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace qcal::detail
