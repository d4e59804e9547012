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

#include <doctest.h>

#include <chrono>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "qcal/archive.hpp"
#include "qcal/executor.hpp"
#include "qcal/live.hpp"
#include "qcal/report.hpp"
#include "support.hpp"

using namespace qcal;
using testsupport::TempDir;

TEST_SUITE_BEGIN("report");

namespace {

Runcard default_runcard() {
  return parse_runcard(
      testsupport::read_file(testsupport::runcard_dir() / "sim_1q.yml"));
}

RunOutput run(const Runcard& rc, const std::filesystem::path& out,
              RunOptions options = {},
              const std::optional<std::filesystem::path>& params = {}) {
  auto platform = load_platform(rc.platform, params, options.seed);
  ValidatedPlan plan =
      validate_plan(rc, ProtocolRegistry::standard(), *platform);
  return run_plan(plan, *platform, out, options);
}

std::size_t count_occurrences(const std::string& text,
                              const std::string& needle) {
  std::size_t n = 0, pos = 0;
  while ((pos = text.find(needle, pos)) != std::string::npos) {
    ++n;
    pos += needle.size();
  }
  return n;
}

}  // namespace

TEST_CASE("a complete run renders one section and plot per record") {
  TempDir tmp;
  RunOutput out = run(default_runcard(), tmp / "run");
  REQUIRE(out.all_succeeded);
  auto index = generate_report(tmp / "run");
  std::string html = testsupport::read_file(index);

  CHECK(count_occurrences(html, "<section class=\"routine\"") == 7);
  for (const auto& r : out.records) {
    std::string sid = "id=\"s" + std::to_string(r.index) + "-" + r.action +
                      "-q" + std::to_string(r.qubit) + "\"";
    CHECK(html.find(sid) != std::string::npos);
    CHECK(std::filesystem::exists(
        tmp / "run" / ("plots/" + std::to_string(r.index) + "-" + r.action +
                       "-q" + std::to_string(r.qubit) + ".svg")));
  }
  CHECK(html.find("id=\"metadata\"") != std::string::npos);
  CHECK(html.find("id=\"calibration-table\"") != std::string::npos);
  // Self-contained: no external fetches.
  CHECK(html.find("http://") == std::string::npos);
  CHECK(html.find("https://") == std::string::npos);
}

TEST_CASE("a halted run renders completed sections and the failure") {
  Runcard rc = default_runcard();
  // A quarter of a Rabi period: plenty of points, no oscillation.
  rc.actions[2].parameters["amplitude_max"] = 0.1;
  rc.actions[2].parameters["amplitude_step"] = 0.005;
  TempDir tmp;
  RunOutput out = run(rc, tmp / "run");
  CHECK(!out.all_succeeded);
  std::string html = testsupport::read_file(generate_report(tmp / "run"));
  // Two succeeded sections, one failed section, nothing beyond.
  CHECK(count_occurrences(html, "<section class=\"routine\"") == 3);
  CHECK(html.find("status-failed") != std::string::npos);
  CHECK(html.find("NoOscillation") != std::string::npos);
  CHECK(html.find("ramsey") == std::string::npos);  // skipped, no section
}

TEST_CASE("missing layout raises LayoutError naming the file") {
  TempDir tmp;
  std::filesystem::create_directories(tmp / "empty");
  CHECK_THROWS_WITH_AS(generate_report(tmp / "empty"),
                       doctest::Contains("meta.json"), LayoutError);

  // meta.json present but nothing else.
  testsupport::write_file(tmp / "empty" / "meta.json", "{}");
  CHECK_THROWS_WITH_AS(generate_report(tmp / "empty"),
                       doctest::Contains("data"), LayoutError);
}

TEST_CASE("comparison shows drift between runs and ignores argument order") {
  TempDir tmp;
  testsupport::write_file(tmp / "a.json", R"({"qubits": [{"t1": 5.0e-5}]})");
  testsupport::write_file(tmp / "b.json", R"({"qubits": [{"t1": 4.5e-5}]})");

  Runcard rc = default_runcard();
  RunOptions options;
  options.seed = 6;
  run(rc, tmp / "runA", options, tmp / "a.json");
  std::this_thread::sleep_for(std::chrono::milliseconds(5));
  run(rc, tmp / "runB", options, tmp / "b.json");
  generate_report(tmp / "runA");
  generate_report(tmp / "runB");

  auto cal_t1 = [&](const std::filesystem::path& dir) {
    auto doc = nlohmann::ordered_json::parse(
        testsupport::read_file(dir / "calibration.json"));
    return doc["qubits"][0]["fields"]["t1"]["value"].get<double>();
  };
  double t1a = cal_t1(tmp / "runA"), t1b = cal_t1(tmp / "runB");
  CHECK(std::fabs(t1a - 5.0e-5) / 5.0e-5 < 0.1);
  CHECK(std::fabs(t1b - 4.5e-5) / 4.5e-5 < 0.1);

  auto index =
      compare_reports({tmp / "runA", tmp / "runB"}, tmp / "cmp");
  std::string html = testsupport::read_file(index);
  CHECK(html.find("id=\"drift-table\"") != std::string::npos);
  // Both fitted T1 values appear in the drift table.
  char buf_a[64], buf_b[64];
  std::snprintf(buf_a, sizeof buf_a, "%.6g", t1a);
  std::snprintf(buf_b, sizeof buf_b, "%.6g", t1b);
  (void)buf_a;
  (void)buf_b;
  CHECK(html.find(nlohmann::json(t1a).dump()) != std::string::npos);
  CHECK(html.find(nlohmann::json(t1b).dump()) != std::string::npos);
  // Timestamps of both runs are shown.
  auto meta_a = nlohmann::ordered_json::parse(
      testsupport::read_file(tmp / "runA" / "meta.json"));
  CHECK(html.find(meta_a["started_at"].get<std::string>()) !=
        std::string::npos);

  // Argument order covariance: presentation is chronological either way.
  compare_reports({tmp / "runB", tmp / "runA"}, tmp / "cmp2");
  CHECK(testsupport::read_file(tmp / "cmp" / "index.html") ==
        testsupport::read_file(tmp / "cmp2" / "index.html"));
}

TEST_CASE("comparison of disjoint action sets takes the union") {
  TempDir tmp;
  Runcard only_t1 = parse_runcard(R"(platform: sim_1q
qubits: [0]
format: csv
actions:
  t1: {}
)");
  Runcard only_res = parse_runcard(R"(platform: sim_1q
qubits: [0]
format: csv
actions:
  resonator_spectroscopy: {}
)");
  run(only_t1, tmp / "runA");
  std::this_thread::sleep_for(std::chrono::milliseconds(5));
  run(only_res, tmp / "runB");
  auto index = compare_reports({tmp / "runA", tmp / "runB"}, tmp / "cmp");
  std::string html = testsupport::read_file(index);
  CHECK(html.find("id=\"cmp-t1-q0\"") != std::string::npos);
  CHECK(html.find("id=\"cmp-resonator_spectroscopy-q0\"") !=
        std::string::npos);
  // Sections backed by a single source say so.
  CHECK(count_occurrences(html, "present in 1 of 2 runs") == 2);
}

TEST_CASE("comparison of a single run is a precondition failure") {
  TempDir tmp;
  CHECK_THROWS_AS(compare_reports({tmp / "only"}, tmp / "out"),
                  ParameterError);
}

TEST_CASE("archive upload, listing, fetch and idempotence") {
  TempDir tmp;
  RunOutput out = run(default_runcard(), tmp / "run");
  REQUIRE(out.all_succeeded);
  generate_report(tmp / "run");

  ArchiveServer server(tmp / "storage");
  int port = server.bind("127.0.0.1", 0);
  std::thread service([&] { server.run(); });

  std::string url = "http://127.0.0.1:" + std::to_string(port);
  std::string id = upload_report(tmp / "run", url);
  CHECK(id.size() == 64);
  CHECK(id.find_first_not_of("0123456789abcdef") == std::string::npos);

  // Idempotent re-upload of identical bytes.
  CHECK(upload_report(tmp / "run", url) == id);

  httplib::Client client(url);
  auto list = client.Get("/reports");
  REQUIRE(list);
  CHECK(list->status == 200);
  auto entries = nlohmann::json::parse(list->body);
  REQUIRE(entries.size() == 1);
  CHECK(entries[0]["id"] == id);
  CHECK(entries[0]["platform"] == "sim_1q");

  auto page = client.Get(("/reports/" + id + "/").c_str());
  REQUIRE(page);
  CHECK(page->status == 200);
  CHECK(page->body == testsupport::read_file(tmp / "run" / "index.html"));

  auto missing = client.Get(
      "/reports/0000000000000000000000000000000000000000000000000000000000000000/");
  REQUIRE(missing);
  CHECK(missing->status == 404);

  auto bad = client.Post("/upload", "not a tarball", "application/gzip");
  REQUIRE(bad);
  CHECK(bad->status == 400);

  server.stop();
  service.join();
}

TEST_CASE("archive unreachable raises NetworkError") {
  TempDir tmp;
  run(default_runcard(), tmp / "run");
  CHECK_THROWS_AS(upload_report(tmp / "run", "http://127.0.0.1:1"),
                  NetworkError);
}

TEST_CASE("live view serves the exact static report once the run is done") {
  TempDir tmp;
  run(default_runcard(), tmp / "run");
  generate_report(tmp / "run");

  LiveServer live(tmp / "run", 2.0);
  int port = live.bind("127.0.0.1", 0);
  std::thread service([&] { live.run(); });
  httplib::Client client("http://127.0.0.1:" + std::to_string(port));

  auto page = client.Get("/");
  REQUIRE(page);
  CHECK(page->status == 200);
  CHECK(page->get_header_value("Refresh") == "2");
  CHECK(page->body == testsupport::read_file(tmp / "run" / "index.html"));

  auto svg = client.Get("/plots/0-resonator_spectroscopy-q0.svg");
  REQUIRE(svg);
  CHECK(svg->body ==
        testsupport::read_file(
            tmp / "run" / "plots/0-resonator_spectroscopy-q0.svg"));

  auto missing = client.Get("/plots/none.svg");
  REQUIRE(missing);
  CHECK(missing->status == 404);

  live.stop();
  service.join();
}

TEST_CASE("report generation is idempotent") {
  TempDir tmp;
  run(default_runcard(), tmp / "run");
  generate_report(tmp / "run");
  std::string first = testsupport::read_file(tmp / "run" / "index.html");
  std::string svg = testsupport::read_file(
      tmp / "run" / "plots/0-resonator_spectroscopy-q0.svg");
  generate_report(tmp / "run");
  CHECK(testsupport::read_file(tmp / "run" / "index.html") == first);
  CHECK(testsupport::read_file(
            tmp / "run" / "plots/0-resonator_spectroscopy-q0.svg") == svg);
}

TEST_CASE("live view coexists with a writer in another process") {
  TempDir tmp;
  // A slow run: one classification action with a large shot count keeps the
  // writer busy while we watch it from here.
  testsupport::write_file(tmp / "rc.yml", R"(platform: sim_1q
qubits: [0]
format: csv
actions:
  single_shot_classification:
    nshots: 60000
)");
  auto out = tmp / "run";
  std::string cmd = testsupport::qq_binary() + " " + (tmp / "rc.yml").string() +
                    " --output " + out.string() + " > /dev/null 2>&1 &";
  REQUIRE(std::system(cmd.c_str()) == 0);
  while (!std::filesystem::exists(out / "meta.json"))
    std::this_thread::sleep_for(std::chrono::milliseconds(2));

  LiveServer live(out, 2.0);
  int port = live.bind("127.0.0.1", 0);
  std::thread service([&] { live.run(); });
  httplib::Client client("http://127.0.0.1:" + std::to_string(port));

  bool saw_partial = false;
  for (int i = 0; i < 400; ++i) {
    auto page = client.Get("/");
    REQUIRE(page);
    REQUIRE(page->status == 200);
    if (page->body.find("status-running") != std::string::npos)
      saw_partial = true;
    if (std::filesystem::exists(out / "index.html")) break;
    std::this_thread::sleep_for(std::chrono::milliseconds(10));
  }
  // Writer finished: the live body now matches the static report exactly.
  for (int i = 0; i < 200 && !std::filesystem::exists(out / "index.html"); ++i)
    std::this_thread::sleep_for(std::chrono::milliseconds(10));
  REQUIRE(std::filesystem::exists(out / "index.html"));
  auto final_page = client.Get("/");
  REQUIRE(final_page);
  CHECK(final_page->body == testsupport::read_file(out / "index.html"));
  CHECK(saw_partial);  // we really did observe the run in flight

  live.stop();
  service.join();
}

TEST_CASE("live view renders placeholders and provisional fits mid-run") {
  // Simulate a run caught half way: full layout for action 0, a truncated
  // csv for action 1, nothing for the rest.
  TempDir tmp;
  RunOutput out = run(default_runcard(), tmp / "done");
  const auto src = tmp / "done";
  const auto dir = tmp / "partial";
  std::filesystem::create_directories(dir / "data/0-resonator_spectroscopy/0");
  std::filesystem::create_directories(dir / "data/1-qubit_spectroscopy/0");
  // meta.json with only the first record.
  auto meta = nlohmann::ordered_json::parse(
      testsupport::read_file(src / "meta.json"));
  nlohmann::ordered_json first = meta["records"][0];
  meta["records"] = nlohmann::ordered_json::array({first});
  meta.erase("finished_at");
  testsupport::write_file(dir / "meta.json", meta.dump(2));
  testsupport::write_file(dir / "calibration.json",
                          testsupport::read_file(src / "calibration.json"));
  for (const char* f : {"data.csv", "fit.json"})
    std::filesystem::copy_file(
        src / "data/0-resonator_spectroscopy/0" / f,
        dir / "data/0-resonator_spectroscopy/0" / f);
  // Partial second dataset: header, a prefix of rows that already covers
  // the resonance, and a torn final row.
  std::string csv = testsupport::read_file(
      src / "data/1-qubit_spectroscopy/0/data.csv");
  std::size_t cut = csv.find('\n');
  for (int i = 0; i < 85; ++i) cut = csv.find('\n', cut + 1);
  testsupport::write_file(dir / "data/1-qubit_spectroscopy/0/data.csv",
                          csv.substr(0, cut + 8));

  RenderedReport rendered = render_run_report(dir, false);
  const std::string& html = rendered.files.at("index.html");
  CHECK(html.find("status-succeeded") != std::string::npos);
  CHECK(html.find("status-running") != std::string::npos);
  CHECK(html.find("(provisional fit)") != std::string::npos);
  CHECK(html.find("awaiting data") != std::string::npos);
  // Partial dataset: 85 complete rows survive the torn tail.
  CHECK(html.find("85 rows") != std::string::npos);
}

TEST_SUITE_END();
