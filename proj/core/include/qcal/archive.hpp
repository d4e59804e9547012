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

/// Packs the run directory into a deterministic tar.gz and POSTs it to
/// <archive_url>/upload. Returns the archive id (the SHA-256 of the
/// tarball); re-uploading identical bytes returns the same id. Throws
/// NetworkError when the archive is unreachable and ServerRejected (with
/// status and body) on a non-2xx response.
std::string upload_report(const std::filesystem::path& run_dir,
                          const std::string& archive_url);

/// Self-hosted results archive.
///
/// Endpoints:
///   POST /upload          tar.gz body -> {"id": "<sha256>"}
///   GET  /reports         [{"id", "uploaded_at", "platform"}, ...]
///   GET  /reports/<id>/   serves the unpacked static report
class ArchiveServer {
 public:
  explicit ArchiveServer(std::filesystem::path storage_dir);
  ~ArchiveServer();

  ArchiveServer(const ArchiveServer&) = delete;
  ArchiveServer& operator=(const ArchiveServer&) = delete;

  /// Binds to host:port (port 0 picks an ephemeral port); returns the bound
  /// port. Throws NetworkError on bind failure.
  int bind(const std::string& host, int port);

  /// Blocking service loop; returns after stop().
  void run();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Binds and serves forever (CLI entry point).
void serve_archive(const std::filesystem::path& storage_dir, int port);

}  // namespace qcal
