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
#include <map>
#include <string>
#include <vector>

namespace qcal {

/// A rendered static site: relative path -> file bytes ("index.html" plus
/// one "plots/*.svg" per section).
struct RenderedReport {
  std::map<std::string, std::string> files;
};

/// Renders the report for a run directory. With strict=true (static
/// reports) missing layout pieces raise LayoutError naming the file; with
/// strict=false (live view) sections still being acquired render partial
/// data, a provisional fit once enough rows exist, or an awaiting-data
/// placeholder. Output is a pure function of the directory contents.
RenderedReport render_run_report(const std::filesystem::path& run_dir,
                                 bool strict);

/// Writes the static site into the run directory; returns the path to
/// index.html.
std::filesystem::path generate_report(const std::filesystem::path& run_dir);

/// Merged report over two or more runs: overlaid datasets keyed by
/// (action, qubit), side-by-side metadata and a calibration drift table in
/// chronological order. Returns the path to the comparison index.html.
std::filesystem::path compare_reports(
    const std::vector<std::filesystem::path>& run_dirs,
    const std::filesystem::path& out_dir);

}  // namespace qcal
