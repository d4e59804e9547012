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

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "qcal/archive.hpp"
#include "qcal/errors.hpp"
#include "qcal/executor.hpp"
#include "qcal/live.hpp"
#include "qcal/platform.hpp"
#include "qcal/report.hpp"
#include "qcal/runcard.hpp"

namespace fs = std::filesystem;

namespace {

// Exit codes: 0 success, 1 parse/validation, 2 runtime failure, 3 I/O.
constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kRuntime = 2;
constexpr int kIo = 3;

int classify(const qcal::Error& e) {
  if (dynamic_cast<const qcal::SyntaxError*>(&e) ||
      dynamic_cast<const qcal::SchemaError*>(&e) ||
      dynamic_cast<const qcal::UnknownProtocol*>(&e) ||
      dynamic_cast<const qcal::UnknownQubit*>(&e) ||
      dynamic_cast<const qcal::ParameterError*>(&e) ||
      dynamic_cast<const qcal::UnknownPlatform*>(&e) ||
      dynamic_cast<const qcal::ParameterFileError*>(&e))
    return kUsage;
  if (dynamic_cast<const qcal::IoError*>(&e) ||
      dynamic_cast<const qcal::NetworkError*>(&e) ||
      dynamic_cast<const qcal::FormatError*>(&e) ||
      dynamic_cast<const qcal::LayoutError*>(&e))
    return kIo;
  return kRuntime;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw qcal::IoError("cannot read runcard " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct RunArgs {
  std::string runcard_path;
  std::string output = "output";
  std::string platform_params;
  std::uint64_t seed = 0;
  bool force = false;
  std::string policy = "halt";
};

int cmd_run(const RunArgs& args) {
  std::string text = read_file(args.runcard_path);
  qcal::Runcard runcard = qcal::parse_runcard(text);
  std::optional<fs::path> params;
  if (!args.platform_params.empty()) params = fs::path(args.platform_params);
  auto platform = qcal::load_platform(runcard.platform, params, args.seed);
  qcal::ValidatedPlan plan = qcal::validate_plan(
      runcard, qcal::ProtocolRegistry::standard(), *platform);

  qcal::RunOptions options;
  options.force = args.force;
  options.seed = args.seed;
  options.policy = args.policy == "continue" ? qcal::RunPolicy::continue_
                                             : qcal::RunPolicy::halt;
  qcal::RunOutput out = qcal::run_plan(plan, *platform, args.output, options);
  for (const auto& r : out.records) {
    std::cout << r.index << " " << r.action << " qubit " << r.qubit << ": "
              << r.status;
    if (!r.message.empty()) std::cout << " (" << r.message << ")";
    std::cout << "\n";
  }
  fs::path index = qcal::generate_report(out.output_dir);
  std::cout << "report: " << index.string() << "\n";
  if (!out.all_succeeded) {
    std::cerr << "runtime error: one or more actions failed\n";
    return kRuntime;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  // The hyphenated command names (qq-live, qq-compare, qq-upload,
  // qq-archive) are symlinks; dispatch them onto the subcommands.
  std::vector<std::string> args(argv + 1, argv + argc);
  std::string prog = fs::path(argv[0]).filename().string();
  if (prog.rfind("qq-", 0) == 0) args.insert(args.begin(), prog.substr(3));

  CLI::App app{"Quantum device calibration toolkit"};
  app.name("qq");

  RunArgs run_args;
  app.add_option("runcard", run_args.runcard_path,
                 "path to the runcard driving the calibration");
  app.add_option("-o,--output", run_args.output,
                 "output directory (default: ./output)");
  app.add_option("--platform-params", run_args.platform_params,
                 "JSON file overriding the simulated device parameters");
  app.add_option("--seed", run_args.seed, "RNG seed (default 0)");
  app.add_flag("--force", run_args.force,
               "allow writing into a non-empty output directory");
  app.add_option("--policy", run_args.policy,
                 "on action failure: halt or continue (default halt)")
      ->check(CLI::IsMember({"halt", "continue"}));

  auto* live = app.add_subcommand("live", "serve a live view of a run");
  std::string live_dir;
  int live_port = 8000;
  double live_refresh = 2.0;
  live->add_option("run_dir", live_dir, "run output directory")->required();
  live->add_option("-p,--port", live_port, "port (default 8000)");
  live->add_option("--refresh", live_refresh,
                   "browser refresh interval in seconds (default 2)");

  auto* compare = app.add_subcommand("compare", "merge reports of several runs");
  std::vector<std::string> compare_dirs;
  std::string compare_out;
  compare->add_option("run_dirs", compare_dirs, "two or more run directories")
      ->required();
  compare->add_option("-o,--output", compare_out, "comparison output directory")
      ->required();

  auto* upload = app.add_subcommand("upload", "upload a run to the archive");
  std::string upload_dir, upload_url;
  upload->add_option("run_dir", upload_dir, "run output directory")->required();
  upload->add_option("-u,--url", upload_url,
                     "archive base URL (or env QCAL_ARCHIVE_URL)");

  auto* archive = app.add_subcommand("archive", "serve the report archive");
  std::string archive_storage;
  int archive_port = 8080;
  archive->add_option("-s,--storage", archive_storage, "storage directory")
      ->required();
  archive->add_option("-p,--port", archive_port, "port (default 8080)");

  try {
    std::reverse(args.begin(), args.end());  // CLI11 consumes from the back
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }

  try {
    if (live->parsed()) {
      qcal::serve_live(live_dir, live_port, live_refresh);
      return kOk;
    }
    if (compare->parsed()) {
      std::vector<fs::path> dirs(compare_dirs.begin(), compare_dirs.end());
      fs::path index = qcal::compare_reports(dirs, compare_out);
      std::cout << "comparison: " << index.string() << "\n";
      return kOk;
    }
    if (upload->parsed()) {
      std::string url = upload_url;
      if (url.empty()) {
        const char* env = std::getenv("QCAL_ARCHIVE_URL");
        if (env) url = env;
      }
      if (url.empty()) {
        std::cerr << "usage error: no archive URL (pass --url or set "
                     "QCAL_ARCHIVE_URL)\n";
        return kUsage;
      }
      std::cout << qcal::upload_report(upload_dir, url) << "\n";
      return kOk;
    }
    if (archive->parsed()) {
      qcal::serve_archive(archive_storage, archive_port);
      return kOk;
    }
    if (run_args.runcard_path.empty()) {
      std::cerr << "usage error: missing runcard path (see --help)\n";
      return kUsage;
    }
    return cmd_run(run_args);
  } catch (const qcal::Error& e) {
    int code = classify(e);
    const char* stage = code == kUsage   ? "validation error"
                        : code == kIo    ? "io error"
                                         : "runtime error";
    std::cerr << stage << ": " << e.what() << "\n";
    return code;
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << "\n";
    return kRuntime;
  }
}
