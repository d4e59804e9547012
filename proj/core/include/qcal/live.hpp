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
#include <memory>
#include <string>

namespace qcal {

/// Watch-only live view of a (possibly still running) calibration: every
/// request re-renders the report from the files currently on disk, so
/// partial datasets show their complete rows and a provisional fit once
/// enough points exist. Responses carry a Refresh header; once the run
/// completes the served content is byte-identical to the static report.
class LiveServer {
 public:
  explicit LiveServer(std::filesystem::path run_dir,
                      double refresh_seconds = 2.0);
  ~LiveServer();

  LiveServer(const LiveServer&) = delete;
  LiveServer& operator=(const LiveServer&) = delete;

  int bind(const std::string& host, int port);  // 0 -> ephemeral
  void run();                                   // blocking
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Binds and serves forever (CLI entry point).
void serve_live(const std::filesystem::path& run_dir, int port,
                double refresh_seconds = 2.0);

}  // namespace qcal
