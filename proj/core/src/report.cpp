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

#include "qcal/report.hpp"

#include <algorithm>
#include <optional>
#include <sstream>

#include "qcal/dataio.hpp"
#include "qcal/errors.hpp"
#include "qcal/protocols.hpp"
#include "qcal/runcard.hpp"
#include "serialize.hpp"
#include "svg.hpp"
#include "util.hpp"

namespace qcal {
namespace {

namespace fs = std::filesystem;
using detail::format_double;
using detail::html_escape;
using detail::ordered_json;
using detail::Plot;
using detail::Series;

const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                          "#9467bd", "#8c564b", "#17becf", "#bcbd22"};
const char* kCss = R"(
body { font-family: "Helvetica Neue", Arial, sans-serif; margin: 24px auto; max-width: 920px; color: #222; }
h1 { border-bottom: 2px solid #1f77b4; padding-bottom: 6px; }
section.routine { border: 1px solid #ddd; border-radius: 6px; padding: 12px 16px; margin: 18px 0; }
table { border-collapse: collapse; margin: 8px 0; }
td, th { border: 1px solid #ccc; padding: 3px 9px; font-size: 13px; text-align: left; }
th { background: #f0f4f8; }
p.status-succeeded { color: #1a7f37; font-weight: bold; }
p.status-failed { color: #b42318; font-weight: bold; }
p.status-running, p.status-pending { color: #9a6700; font-weight: bold; }
.small { color: #666; font-size: 12px; }
img { max-width: 100%; }
)";

struct RecordInfo {
  int index = 0;
  std::string action;
  int qubit = 0;
  std::string dataset_file, fit_file, status, message;
};

struct RunMeta {
  ordered_json doc;
  std::string platform, format, started_at, finished_at, version, policy;
  std::string runcard_text;
  std::uint64_t seed = 0;
  std::vector<int> qubits;
  std::vector<std::string> actions;
  std::vector<RecordInfo> records;
};

RunMeta load_meta(const fs::path& dir) {
  fs::path p = dir / "meta.json";
  if (!fs::exists(p)) throw LayoutError("missing " + p.string());
  RunMeta m;
  try {
    m.doc = ordered_json::parse(detail::read_text(p));
  } catch (const nlohmann::json::exception& e) {
    throw LayoutError(p.string() + ": " + e.what());
  }
  m.platform = m.doc.value("platform", std::string{});
  m.format = m.doc.value("format", std::string("csv"));
  m.started_at = m.doc.value("started_at", std::string{});
  m.finished_at = m.doc.value("finished_at", std::string{});
  m.version = m.doc.value("version", std::string{});
  m.policy = m.doc.value("policy", std::string{});
  m.runcard_text = m.doc.value("runcard", std::string{});
  m.seed = m.doc.value("seed", 0ull);
  if (m.doc.contains("qubits"))
    for (const auto& q : m.doc["qubits"]) m.qubits.push_back(q.get<int>());
  if (m.doc.contains("actions"))
    for (const auto& a : m.doc["actions"])
      m.actions.push_back(a.get<std::string>());
  if (m.doc.contains("records")) {
    for (const auto& r : m.doc["records"]) {
      RecordInfo ri;
      ri.index = r.value("index", 0);
      ri.action = r.value("action", std::string{});
      ri.qubit = r.value("qubit", 0);
      ri.dataset_file = r.value("dataset_file", std::string{});
      ri.fit_file = r.value("fit_file", std::string{});
      ri.status = r.value("status", std::string{});
      ri.message = r.value("message", std::string{});
      m.records.push_back(std::move(ri));
    }
  }
  return m;
}

std::map<std::string, double> fit_params_from_json(const ordered_json& fit) {
  std::map<std::string, double> out;
  if (fit.contains("params"))
    for (auto it = fit["params"].begin(); it != fit["params"].end(); ++it)
      out[it.key()] = it.value().value("value", 0.0);
  return out;
}

struct NamedFit {
  std::string label;
  std::string model;
  std::map<std::string, double> params;
};

std::vector<NamedFit> collect_fits(const ordered_json& fitdoc) {
  std::vector<NamedFit> out;
  if (fitdoc.is_null()) return out;
  if (fitdoc.contains("fit")) {
    const auto& f = fitdoc["fit"];
    out.push_back({"fit", f.value("model", std::string{}),
                   fit_params_from_json(f)});
  }
  if (fitdoc.contains("extra_fits")) {
    for (const auto& e : fitdoc["extra_fits"]) {
      const auto& f = e["fit"];
      out.push_back({e.value("name", std::string{}),
                     f.value("model", std::string{}),
                     fit_params_from_json(f)});
    }
  }
  return out;
}

bool model_drawable(const std::string& model) {
  return model == "lorentzian" || model == "oscillation" ||
         model == "damped_oscillation" || model == "exp_decay" ||
         model == "rb_decay" || model == "filtered_rb_decay";
}

std::vector<double> grid(double lo, double hi, int n = 200) {
  std::vector<double> out;
  if (!(hi > lo)) {
    out.push_back(lo);
    return out;
  }
  out.reserve(n);
  for (int i = 0; i < n; ++i)
    out.push_back(lo + (hi - lo) * i / static_cast<double>(n - 1));
  return out;
}

PlotSpec plot_spec_for(const std::string& action, const DataSet& ds) {
  if (const Protocol* p = ProtocolRegistry::standard().find(action))
    return p->info().plot;
  PlotSpec spec;
  spec.kind = PlotSpec::Kind::xy;
  std::vector<std::string> numeric;
  for (const auto& c : ds.columns)
    if (c.numeric) numeric.push_back(c.name);
  if (numeric.size() >= 2) {
    spec.x_column = numeric[0];
    spec.y_column = numeric[1];
    spec.x_label = numeric[0];
    spec.y_label = numeric[1];
  }
  return spec;
}

void add_fit_curves(Plot& plot, const std::vector<NamedFit>& fits, double lo,
                    double hi, int first_color) {
  int ci = first_color;
  for (const auto& f : fits) {
    if (!model_drawable(f.model)) continue;
    std::vector<double> xs = grid(lo, hi);
    std::vector<double> ys;
    try {
      ys = evaluate_model(f.model, f.params, xs);
    } catch (const Error&) {
      continue;
    }
    Series s;
    s.label = f.label;
    s.mode = Series::Mode::line;
    s.color = kPalette[ci % 8];
    s.x = std::move(xs);
    s.y = std::move(ys);
    plot.series.push_back(std::move(s));
    ++ci;
  }
}

std::string build_svg(const std::string& action, int qubit, const DataSet& ds,
                      const ordered_json& fitdoc,
                      const std::vector<NamedFit>& fits) {
  PlotSpec spec = plot_spec_for(action, ds);
  Plot plot;
  plot.title = action + " — qubit " + std::to_string(qubit);
  plot.x_label = spec.x_label;
  plot.y_label = spec.y_label;

  if (spec.kind == PlotSpec::Kind::iq) {
    const auto& state = ds.numeric_column("state");
    const auto& iv = ds.numeric_column("i");
    const auto& qv = ds.numeric_column("q");
    Series g{"prepared 0", Series::Mode::points, kPalette[0], 1.6, {}, {}};
    Series e{"prepared 1", Series::Mode::points, kPalette[1], 1.6, {}, {}};
    for (std::size_t r = 0; r < state.size(); ++r) {
      (state[r] == 0.0 ? g : e).x.push_back(iv[r]);
      (state[r] == 0.0 ? g : e).y.push_back(qv[r]);
    }
    plot.series.push_back(std::move(g));
    plot.series.push_back(std::move(e));
    // Decision boundary from the trained classifier.
    for (const auto& f : fits) {
      if (f.model != "iq_classifier") continue;
      double theta = f.params.at("iq_angle");
      double thr = f.params.at("threshold");
      double c = std::cos(theta), s = std::sin(theta);
      double lo_i = *std::min_element(iv.begin(), iv.end());
      double hi_i = *std::max_element(iv.begin(), iv.end());
      double lo_q = *std::min_element(qv.begin(), qv.end());
      double hi_q = *std::max_element(qv.begin(), qv.end());
      double span = std::hypot(hi_i - lo_i, hi_q - lo_q);
      Series line{"threshold", Series::Mode::line, kPalette[3], 2.5, {}, {}};
      for (double t : {-span, span}) {
        line.x.push_back(c * thr + s * t);
        line.y.push_back(-s * thr + c * t);
      }
      plot.series.push_back(std::move(line));
      break;
    }
    return detail::render_svg(plot);
  }

  if (spec.kind == PlotSpec::Kind::rb) {
    const auto& depth = ds.numeric_column("depth");
    const auto& surv = ds.numeric_column("survival");
    Series circuits{"circuits", Series::Mode::points, "#b0c4de", 2.0, depth,
                    surv};
    plot.series.push_back(std::move(circuits));
    int ci = 0;
    if (!fitdoc.is_null() && fitdoc.contains("series")) {
      const auto& series = fitdoc["series"];
      // Either plain depths/means or per-irrep lambdaN:depths / lambdaN:means.
      std::vector<std::string> prefixes;
      for (auto it = series.begin(); it != series.end(); ++it) {
        const std::string& key = it.key();
        auto pos = key.rfind(":depths");
        if (key == "depths")
          prefixes.push_back("");
        else if (pos != std::string::npos && pos + 7 == key.size())
          prefixes.push_back(key.substr(0, pos + 1));
      }
      for (const auto& prefix : prefixes) {
        std::string dk = prefix.empty() ? "depths" : prefix + "depths";
        std::string mk = prefix.empty() ? "means" : prefix + "means";
        if (!series.contains(mk)) continue;
        Series s;
        s.label = prefix.empty() ? "depth means"
                                 : prefix.substr(0, prefix.size() - 1);
        s.mode = Series::Mode::points;
        s.color = kPalette[ci % 8];
        s.marker_radius = 4.0;
        for (const auto& v : series[dk]) s.x.push_back(v.get<double>());
        for (const auto& v : series[mk]) s.y.push_back(v.get<double>());
        plot.series.push_back(std::move(s));
        ++ci;
      }
    }
    double lo = depth.empty() ? 0 : *std::min_element(depth.begin(), depth.end());
    double hi = depth.empty() ? 1 : *std::max_element(depth.begin(), depth.end());
    add_fit_curves(plot, fits, lo, hi, ci);
    return detail::render_svg(plot);
  }

  // Generic xy scatter, split by the detuning column when present.
  const auto& xs = ds.numeric_column(spec.x_column);
  const auto& ys = ds.numeric_column(spec.y_column);
  const Column* det = ds.find_column("detuning");
  if (det && det->numeric) {
    std::vector<double> values;
    for (double v : det->values)
      if (std::find(values.begin(), values.end(), v) == values.end())
        values.push_back(v);
    int ci = 0;
    for (double v : values) {
      Series s;
      s.label = "detuning " + format_double(v) + " Hz";
      s.color = kPalette[ci % 8];
      for (std::size_t r = 0; r < xs.size(); ++r) {
        if (det->values[r] != v) continue;
        s.x.push_back(xs[r]);
        s.y.push_back(ys[r]);
      }
      plot.series.push_back(std::move(s));
      ++ci;
    }
  } else {
    Series s;
    s.color = kPalette[0];
    s.x = xs;
    s.y = ys;
    plot.series.push_back(std::move(s));
  }
  if (!xs.empty()) {
    double lo = *std::min_element(xs.begin(), xs.end());
    double hi = *std::max_element(xs.begin(), xs.end());
    add_fit_curves(plot, fits, lo, hi,
                   static_cast<int>(plot.series.size()));
  }
  return detail::render_svg(plot);
}

void fit_table_html(std::ostringstream& html, const ordered_json& fit,
                    const std::string& heading) {
  html << "<table class=\"fit\"><tr><th colspan=\"3\">"
       << html_escape(heading) << " — model "
       << html_escape(fit.value("model", std::string{})) << "</th></tr>\n";
  html << "<tr><th>parameter</th><th>value</th><th>&sigma;</th></tr>\n";
  if (fit.contains("params")) {
    for (auto it = fit["params"].begin(); it != fit["params"].end(); ++it) {
      html << "<tr><td>" << html_escape(it.key()) << "</td><td>"
           << format_double(it.value().value("value", 0.0)) << "</td><td>"
           << format_double(it.value().value("sigma", 0.0))
           << "</td></tr>\n";
    }
  }
  if (fit.contains("derived")) {
    for (auto it = fit["derived"].begin(); it != fit["derived"].end(); ++it)
      html << "<tr><td>" << html_escape(it.key()) << " (derived)</td><td>"
           << format_double(it.value().get<double>())
           << "</td><td></td></tr>\n";
  }
  html << "<tr><td class=\"small\" colspan=\"3\">converged: "
       << (fit.value("converged", false) ? "yes" : "no")
       << ", iterations: " << fit.value("iterations", 0)
       << ", rss: " << format_double(fit.value("rss", 0.0));
  if (fit.contains("diagnostic"))
    html << ", note: " << html_escape(fit.value("diagnostic", std::string{}));
  html << "</td></tr></table>\n";
}

struct SectionInput {
  int index = 0;
  std::string action;
  int qubit = 0;
  std::string status;   // succeeded | failed | running | pending
  std::string message;
  std::optional<DataSet> data;
  bool partial = false;
  ordered_json fitdoc;  // null when absent
  bool provisional = false;
};

void render_section(std::ostringstream& html, RenderedReport& report,
                    const SectionInput& in) {
  std::string sid = "s" + std::to_string(in.index) + "-" + in.action + "-q" +
                    std::to_string(in.qubit);
  html << "<section class=\"routine\" id=\"" << sid << "\">\n";
  html << "<h3>" << in.index << " — " << html_escape(in.action)
       << " — qubit " << in.qubit << "</h3>\n";
  html << "<p class=\"status-" << in.status << "\">" << in.status;
  if (in.provisional) html << " (provisional fit)";
  html << "</p>\n";
  if (!in.message.empty())
    html << "<p class=\"error\">" << html_escape(in.message) << "</p>\n";

  if (in.data && in.data->num_rows() > 0) {
    std::vector<NamedFit> fits = collect_fits(in.fitdoc);
    std::string svg =
        build_svg(in.action, in.qubit, *in.data, in.fitdoc, fits);
    std::string name = "plots/" + std::to_string(in.index) + "-" + in.action +
                       "-q" + std::to_string(in.qubit) + ".svg";
    report.files[name] = std::move(svg);
    html << "<img src=\"" << name << "\" alt=\"" << html_escape(in.action)
         << " qubit " << in.qubit << "\"/>\n";
    html << "<p class=\"small\">" << in.data->num_rows() << " rows × "
         << in.data->columns.size() << " columns"
         << (in.partial ? " (partial, acquisition in progress)" : "")
         << "</p>\n";
  } else if (in.status == "pending") {
    html << "<p class=\"small\">awaiting data</p>\n";
  }

  if (!in.fitdoc.is_null()) {
    if (in.fitdoc.contains("fit")) fit_table_html(html, in.fitdoc["fit"], "fit");
    if (in.fitdoc.contains("extra_fits"))
      for (const auto& e : in.fitdoc["extra_fits"])
        fit_table_html(html, e["fit"], e.value("name", std::string{}));
    if (in.fitdoc.contains("notes")) {
      html << "<p class=\"small\">";
      bool first = true;
      for (auto it = in.fitdoc["notes"].begin();
           it != in.fitdoc["notes"].end(); ++it) {
        if (!first) html << "; ";
        html << html_escape(it.key()) << ": "
             << html_escape(it.value().get<std::string>());
        first = false;
      }
      html << "</p>\n";
    }
  }
  html << "</section>\n";
}

void meta_table_html(std::ostringstream& html, const RunMeta& meta) {
  html << "<table id=\"metadata\">\n";
  auto row = [&](const std::string& k, const std::string& v) {
    html << "<tr><th>" << html_escape(k) << "</th><td>" << html_escape(v)
         << "</td></tr>\n";
  };
  row("platform", meta.platform);
  std::string qs;
  for (std::size_t i = 0; i < meta.qubits.size(); ++i)
    qs += (i ? ", " : "") + std::to_string(meta.qubits[i]);
  row("qubits", qs);
  row("format", meta.format);
  row("seed", std::to_string(meta.seed));
  row("policy", meta.policy);
  row("started", meta.started_at);
  row("finished", meta.finished_at.empty() ? "(running)" : meta.finished_at);
  row("tool version", meta.version);
  if (meta.doc.contains("dependencies")) {
    std::string deps;
    for (auto it = meta.doc["dependencies"].begin();
         it != meta.doc["dependencies"].end(); ++it) {
      if (!deps.empty()) deps += ", ";
      deps += it.key() + " " + it.value().get<std::string>();
    }
    row("dependencies", deps);
  }
  html << "</table>\n";
}

void calibration_table_html(std::ostringstream& html, const fs::path& dir) {
  fs::path p = dir / "calibration.json";
  if (!fs::exists(p)) return;
  ordered_json doc;
  try {
    doc = ordered_json::parse(detail::read_text(p));
  } catch (const nlohmann::json::exception&) {
    return;
  }
  html << "<h2 id=\"calibration\">Calibration parameters</h2>\n";
  html << "<table id=\"calibration-table\"><tr><th>qubit</th>";
  for (const auto& name : calibration_field_names())
    html << "<th>" << html_escape(name) << "</th>";
  html << "</tr>\n";
  if (doc.contains("qubits")) {
    for (const auto& entry : doc["qubits"]) {
      html << "<tr><td>" << entry.value("id", 0) << "</td>";
      for (const auto& name : calibration_field_names()) {
        html << "<td>";
        if (entry.contains("fields") && entry["fields"].contains(name)) {
          const auto& f = entry["fields"][name];
          html << format_double(f.value("value", 0.0));
          if (f.value("calibrated", false)) html << " ✓";
        }
        html << "</td>";
      }
      html << "</tr>\n";
    }
  }
  html << "</table>\n";
}

std::optional<ParamMap> action_params(const RunMeta& meta,
                                      const std::string& action) {
  try {
    Runcard rc = parse_runcard(meta.runcard_text);
    for (const auto& a : rc.actions) {
      if (a.name != action) continue;
      const Protocol* p = ProtocolRegistry::standard().find(action);
      if (!p) return std::nullopt;
      return canonical_params(*p, a.parameters);
    }
  } catch (const Error&) {
  }
  return std::nullopt;
}

}  // namespace

RenderedReport render_run_report(const fs::path& run_dir, bool strict) {
  RunMeta meta = load_meta(run_dir);
  if (strict && (!fs::exists(run_dir / "data") ||
                 fs::is_empty(run_dir / "data")))
    throw LayoutError("missing or empty data directory " +
                      (run_dir / "data").string());

  std::map<std::pair<int, int>, const RecordInfo*> by_key;
  for (const auto& r : meta.records) by_key[{r.index, r.qubit}] = &r;

  RenderedReport report;
  std::ostringstream html;
  html << "<!DOCTYPE html>\n<html><head><meta charset=\"utf-8\">\n<title>"
       << "qcal report — " << html_escape(meta.platform)
       << "</title>\n<style>" << kCss << "</style>\n</head>\n<body>\n";
  html << "<h1>Calibration report</h1>\n";
  meta_table_html(html, meta);
  calibration_table_html(html, run_dir);
  html << "<h2>Routines</h2>\n";

  for (int ai = 0; ai < static_cast<int>(meta.actions.size()); ++ai) {
    const std::string& action = meta.actions[ai];
    for (int q : meta.qubits) {
      auto it = by_key.find({ai, q});
      const RecordInfo* rec = it == by_key.end() ? nullptr : it->second;
      if (rec && rec->status == "skipped") continue;

      SectionInput in;
      in.index = ai;
      in.action = action;
      in.qubit = q;

      fs::path qdir =
          run_dir / "data" / (std::to_string(ai) + "-" + action) /
          std::to_string(q);
      if (rec) {
        in.status = rec->status;
        in.message = rec->message;
        fs::path dataset = rec->dataset_file.empty()
                               ? qdir / "data.csv"
                               : run_dir / rec->dataset_file;
        if (fs::exists(dataset)) {
          ReadResult rr = read_dataset(dataset);
          in.data = std::move(rr.data);
          in.partial = rr.partial_row;
        } else if (strict && rec->status == "succeeded") {
          throw LayoutError("missing dataset file " + dataset.string());
        }
        fs::path fitfile = rec->fit_file.empty() ? qdir / "fit.json"
                                                 : run_dir / rec->fit_file;
        if (fs::exists(fitfile)) {
          try {
            in.fitdoc = ordered_json::parse(detail::read_text(fitfile));
          } catch (const nlohmann::json::exception& e) {
            throw LayoutError(fitfile.string() + ": " + e.what());
          }
        } else if (strict && rec->status == "succeeded") {
          throw LayoutError("missing fit file " + fitfile.string());
        }
      } else {
        if (strict) continue;  // crashed mid-run; only records are rendered
        // No record yet: either in progress or not started.
        fs::path csv = qdir / "data.csv";
        fs::path json = qdir / "data.json";
        fs::path dataset = fs::exists(csv) ? csv : json;
        if (fs::exists(dataset)) {
          in.status = "running";
          ReadResult rr = read_dataset(dataset);
          in.data = std::move(rr.data);
          in.partial = true;
          const Protocol* proto = ProtocolRegistry::standard().find(action);
          if (proto && in.data->num_rows() >= proto->info().min_fit_points) {
            if (auto params = action_params(meta, action)) {
              try {
                FitResult fit = proto->analyze(*in.data, *params);
                ordered_json doc;
                doc["fit"] = detail::fit_to_json(fit);
                in.fitdoc = std::move(doc);
                in.provisional = true;
              } catch (const Error&) {
                // Not enough structure in the partial data yet.
              }
            }
          }
        } else {
          in.status = "pending";
        }
      }
      render_section(html, report, in);
    }
  }

  html << "</body></html>\n";
  report.files["index.html"] = html.str();
  return report;
}

fs::path generate_report(const fs::path& run_dir) {
  RenderedReport report = render_run_report(run_dir, true);
  std::error_code ec;
  fs::create_directories(run_dir / "plots", ec);
  for (const auto& [rel, bytes] : report.files) {
    fs::path p = run_dir / rel;
    fs::create_directories(p.parent_path(), ec);
    detail::write_text_atomic(p, bytes);
  }
  return run_dir / "index.html";
}

fs::path compare_reports(const std::vector<fs::path>& run_dirs,
                         const fs::path& out_dir) {
  if (run_dirs.size() < 2)
    throw ParameterError("comparison needs at least 2 report directories");

  struct Source {
    fs::path dir;
    RunMeta meta;
    ordered_json calibration;
    std::string label;
  };
  std::vector<Source> sources;
  for (const auto& dir : run_dirs) {
    Source s;
    s.dir = dir;
    s.meta = load_meta(dir);
    fs::path cal = dir / "calibration.json";
    if (fs::exists(cal))
      s.calibration = ordered_json::parse(detail::read_text(cal));
    sources.push_back(std::move(s));
  }
  // Chronological presentation regardless of argument order.
  std::stable_sort(sources.begin(), sources.end(),
                   [](const Source& a, const Source& b) {
                     return a.meta.started_at < b.meta.started_at;
                   });
  for (std::size_t i = 0; i < sources.size(); ++i)
    sources[i].label = "run " + std::to_string(i + 1) + " (" +
                       sources[i].meta.started_at + ")";

  RenderedReport report;
  std::ostringstream html;
  html << "<!DOCTYPE html>\n<html><head><meta charset=\"utf-8\">\n"
       << "<title>qcal comparison</title>\n<style>" << kCss
       << "</style>\n</head>\n<body>\n<h1>Report comparison</h1>\n";

  // Side-by-side metadata; conflicting values are shown, never merged.
  html << "<table id=\"metadata\"><tr><th></th>";
  for (const auto& s : sources)
    html << "<th>" << html_escape(s.label) << "</th>";
  html << "</tr>\n";
  auto meta_row = [&](const std::string& name, auto getter) {
    html << "<tr><th>" << name << "</th>";
    for (const auto& s : sources)
      html << "<td>" << html_escape(getter(s)) << "</td>";
    html << "</tr>\n";
  };
  meta_row("directory", [](const Source& s) { return s.dir.string(); });
  meta_row("platform", [](const Source& s) { return s.meta.platform; });
  meta_row("started", [](const Source& s) { return s.meta.started_at; });
  meta_row("seed",
           [](const Source& s) { return std::to_string(s.meta.seed); });
  meta_row("tool version", [](const Source& s) { return s.meta.version; });
  html << "</table>\n";

  // Calibration drift table, chronological columns.
  html << "<h2 id=\"drift\">Calibration drift</h2>\n";
  html << "<table id=\"drift-table\"><tr><th>qubit</th><th>field</th>";
  for (const auto& s : sources)
    html << "<th>" << html_escape(s.label) << "</th>";
  html << "</tr>\n";
  std::vector<int> all_qubits;
  for (const auto& s : sources)
    for (int q : s.meta.qubits)
      if (std::find(all_qubits.begin(), all_qubits.end(), q) ==
          all_qubits.end())
        all_qubits.push_back(q);
  std::sort(all_qubits.begin(), all_qubits.end());
  for (int q : all_qubits) {
    for (const auto& field : calibration_field_names()) {
      html << "<tr><td>" << q << "</td><td>" << html_escape(field) << "</td>";
      for (const auto& s : sources) {
        html << "<td>";
        if (s.calibration.contains("qubits")) {
          for (const auto& entry : s.calibration["qubits"]) {
            if (entry.value("id", -1) != q) continue;
            const auto& f = entry["fields"][field];
            html << format_double(f.value("value", 0.0));
            if (f.value("calibrated", false)) html << " ✓";
          }
        }
        html << "</td>";
      }
      html << "</tr>\n";
    }
  }
  html << "</table>\n";

  // Overlaid sections keyed by (action, qubit), union over sources.
  struct Key {
    std::string action;
    int qubit;
    bool operator<(const Key& o) const {
      return std::tie(action, qubit) < std::tie(o.action, o.qubit);
    }
  };
  std::map<Key, std::vector<std::pair<const Source*, const RecordInfo*>>>
      sections;
  for (const auto& s : sources)
    for (const auto& r : s.meta.records)
      if (r.status == "succeeded" || r.status == "failed")
        sections[{r.action, r.qubit}].emplace_back(&s, &r);

  html << "<h2>Overlaid routines</h2>\n";
  for (const auto& [key, recs] : sections) {
    std::string sid = "cmp-" + key.action + "-q" + std::to_string(key.qubit);
    html << "<section class=\"routine\" id=\"" << sid << "\">\n<h3>"
         << html_escape(key.action) << " — qubit " << key.qubit
         << "</h3>\n";
    if (recs.size() < sources.size())
      html << "<p class=\"small\">present in " << recs.size() << " of "
           << sources.size() << " runs</p>\n";

    Plot plot;
    plot.title = key.action + " — qubit " + std::to_string(key.qubit);
    int ci = 0;
    bool have_points = false;
    for (const auto& [src, rec] : recs) {
      fs::path dataset = src->dir / rec->dataset_file;
      if (rec->dataset_file.empty() || !fs::exists(dataset)) continue;
      DataSet ds = read_dataset(dataset).data;
      PlotSpec spec = plot_spec_for(key.action, ds);
      plot.x_label = spec.x_label;
      plot.y_label = spec.y_label;
      std::string xcol = spec.kind == PlotSpec::Kind::iq ? "i" : spec.x_column;
      std::string ycol = spec.kind == PlotSpec::Kind::iq ? "q" : spec.y_column;
      const Column* xc = ds.find_column(xcol);
      const Column* yc = ds.find_column(ycol);
      if (!xc || !yc || !xc->numeric || !yc->numeric) continue;
      Series s;
      s.label = src->label;
      s.color = kPalette[ci % 8];
      s.x = xc->values;
      s.y = yc->values;
      plot.series.push_back(std::move(s));
      have_points = true;
      ++ci;
    }
    if (have_points) {
      std::string name =
          "plots/" + key.action + "-q" + std::to_string(key.qubit) + ".svg";
      report.files[name] = detail::render_svg(plot);
      html << "<img src=\"" << name << "\" alt=\"" << html_escape(key.action)
           << "\"/>\n";
    }

    // Per-source fit summaries.
    for (const auto& [src, rec] : recs) {
      if (rec->fit_file.empty()) continue;
      fs::path fitfile = src->dir / rec->fit_file;
      if (!fs::exists(fitfile)) continue;
      ordered_json fitdoc = ordered_json::parse(detail::read_text(fitfile));
      if (fitdoc.contains("fit"))
        fit_table_html(html, fitdoc["fit"], src->label);
    }
    html << "</section>\n";
  }

  html << "</body></html>\n";
  report.files["index.html"] = html.str();

  std::error_code ec;
  fs::create_directories(out_dir / "plots", ec);
  for (const auto& [rel, bytes] : report.files) {
    fs::path p = out_dir / rel;
    fs::create_directories(p.parent_path(), ec);
    detail::write_text_atomic(p, bytes);
  }
  return out_dir / "index.html";
}

}  // namespace qcal
