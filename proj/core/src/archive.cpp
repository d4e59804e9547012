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

#include "qcal/archive.hpp"

#include <fstream>
#include <mutex>

#include <httplib.h>
#include <json.hpp>

#include "qcal/errors.hpp"
#include "serialize.hpp"
#include "tar_gz.hpp"
#include "util.hpp"

namespace qcal {
namespace {

namespace fs = std::filesystem;
using detail::ordered_json;

std::map<std::string, std::string> collect_files(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    std::string rel = fs::relative(entry.path(), dir).generic_string();
    out[rel] = detail::read_text(entry.path());
  }
  if (out.empty()) throw IoError("nothing to upload in " + dir.string());
  return out;
}

const char* content_type_for(const fs::path& p) {
  auto ext = p.extension().string();
  if (ext == ".html") return "text/html; charset=utf-8";
  if (ext == ".svg") return "image/svg+xml";
  if (ext == ".json") return "application/json";
  if (ext == ".css") return "text/css";
  if (ext == ".csv") return "text/csv";
  return "application/octet-stream";
}

}  // namespace

std::string upload_report(const fs::path& run_dir,
                          const std::string& archive_url) {
  if (!fs::is_directory(run_dir))
    throw IoError(run_dir.string() + " is not a directory");
  std::string body = detail::tar_gz_pack(collect_files(run_dir));

  httplib::Client client(archive_url);
  client.set_read_timeout(30, 0);
  client.set_connection_timeout(10, 0);
  auto res = client.Post("/upload", body, "application/gzip");
  if (!res)
    throw NetworkError("cannot reach archive at " + archive_url + " (" +
                       httplib::to_string(res.error()) + ")");
  if (res->status < 200 || res->status >= 300)
    throw ServerRejected("status " + std::to_string(res->status) + ": " +
                         res->body);
  try {
    auto doc = nlohmann::json::parse(res->body);
    return doc.at("id").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw ServerRejected(std::string("malformed archive response: ") +
                         e.what());
  }
}

struct ArchiveServer::Impl {
  fs::path storage;
  httplib::Server server;
  std::mutex upload_mutex;
  int port = 0;

  explicit Impl(fs::path dir) : storage(std::move(dir)) {
    fs::create_directories(storage);
    setup_routes();
  }

  fs::path index_path() const { return storage / "index.json"; }

  ordered_json load_index() {
    if (!fs::exists(index_path())) return ordered_json::array();
    try {
      return ordered_json::parse(detail::read_text(index_path()));
    } catch (const nlohmann::json::exception&) {
      return ordered_json::array();
    }
  }

  void setup_routes() {
    server.set_payload_max_length(256ull * 1024 * 1024);

    server.Post("/upload", [this](const httplib::Request& req,
                                  httplib::Response& res) {
      std::lock_guard<std::mutex> lock(upload_mutex);
      std::string id = detail::sha256_hex(req.body);
      fs::path dest = storage / id;
      if (!fs::exists(dest)) {
        std::map<std::string, std::string> files;
        try {
          files = detail::tar_gz_unpack(req.body);
        } catch (const Error& e) {
          res.status = 400;
          res.set_content(std::string("{\"error\":\"") + e.what() + "\"}",
                          "application/json");
          return;
        }
        fs::create_directories(dest);
        for (const auto& [rel, bytes] : files) {
          fs::path p = dest / rel;
          fs::create_directories(p.parent_path());
          std::ofstream out(p, std::ios::binary);
          out << bytes;
        }
        {
          std::ofstream out(storage / (id + ".tar.gz"), std::ios::binary);
          out << req.body;
        }
        std::string platform = "unknown";
        auto meta_it = files.find("meta.json");
        if (meta_it != files.end()) {
          try {
            auto meta = nlohmann::json::parse(meta_it->second);
            platform = meta.value("platform", platform);
          } catch (const nlohmann::json::exception&) {
          }
        }
        ordered_json index = load_index();
        ordered_json entry;
        entry["id"] = id;
        entry["uploaded_at"] = detail::iso8601_now();
        entry["platform"] = platform;
        index.push_back(std::move(entry));
        detail::write_text_atomic(index_path(), index.dump(2) + "\n");
      }
      ordered_json reply;
      reply["id"] = id;
      res.set_content(reply.dump(), "application/json");
    });

    server.Get("/reports", [this](const httplib::Request&,
                                  httplib::Response& res) {
      std::lock_guard<std::mutex> lock(upload_mutex);
      res.set_content(load_index().dump(2) + "\n", "application/json");
    });

    // /reports/<id>/<path...> serves the unpacked report files.
    server.Get(R"(/reports/([0-9a-f]{64})(/.*)?)",
               [this](const httplib::Request& req, httplib::Response& res) {
                 std::string id = req.matches[1];
                 std::string rest =
                     req.matches.size() > 2 ? std::string(req.matches[2]) : "";
                 if (rest.empty() || rest == "/") rest = "/index.html";
                 if (rest.find("..") != std::string::npos) {
                   res.status = 404;
                   return;
                 }
                 fs::path p = storage / id / rest.substr(1);
                 if (!fs::exists(p) || !fs::is_regular_file(p)) {
                   res.status = 404;
                   return;
                 }
                 res.set_content(detail::read_text(p), content_type_for(p));
               });

    // Minimal landing page listing the stored reports.
    server.Get("/", [this](const httplib::Request&, httplib::Response& res) {
      std::lock_guard<std::mutex> lock(upload_mutex);
      ordered_json index = load_index();
      std::string html =
          "<!DOCTYPE html><html><head><meta charset=\"utf-8\">"
          "<title>qcal archive</title></head><body><h1>Report archive</h1>"
          "<ul>";
      for (const auto& e : index) {
        std::string id = e.value("id", std::string{});
        html += "<li><a href=\"/reports/" + id + "/\">" + id.substr(0, 12) +
                "…</a> — " + e.value("platform", std::string{}) + " — " +
                e.value("uploaded_at", std::string{}) + "</li>";
      }
      html += "</ul></body></html>";
      res.set_content(html, "text/html; charset=utf-8");
    });
  }
};

ArchiveServer::ArchiveServer(fs::path storage_dir)
    : impl_(std::make_unique<Impl>(std::move(storage_dir))) {}

ArchiveServer::~ArchiveServer() = default;

int ArchiveServer::bind(const std::string& host, int port) {
  if (port == 0) {
    impl_->port = impl_->server.bind_to_any_port(host);
    if (impl_->port <= 0) throw NetworkError("cannot bind to " + host);
  } else {
    if (!impl_->server.bind_to_port(host, port))
      throw NetworkError("cannot bind to " + host + ":" +
                         std::to_string(port));
    impl_->port = port;
  }
  return impl_->port;
}

void ArchiveServer::run() {
  if (!impl_->server.listen_after_bind())
    throw NetworkError("archive server terminated unexpectedly");
}

void ArchiveServer::stop() { impl_->server.stop(); }

void serve_archive(const fs::path& storage_dir, int port) {
  ArchiveServer server(storage_dir);
  server.bind("0.0.0.0", port);
  server.run();
}

}  // namespace qcal

namespace qcal::detail {
// Version strings recorded in run metadata; defined here so only this
// translation unit pulls in the header.
std::string httplib_version_string() { return CPPHTTPLIB_VERSION; }
}  // namespace qcal::detail
