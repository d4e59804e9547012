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

#include "qcal/live.hpp"

#include <httplib.h>

#include "qcal/errors.hpp"
#include "qcal/report.hpp"
#include "util.hpp"

namespace qcal {
namespace fs = std::filesystem;

struct LiveServer::Impl {
  fs::path run_dir;
  double refresh;
  httplib::Server server;

  Impl(fs::path dir, double refresh_seconds)
      : run_dir(std::move(dir)), refresh(refresh_seconds) {
    server.Get(".*", [this](const httplib::Request& req,
                            httplib::Response& res) {
      std::string path = req.path == "/" ? "index.html" : req.path.substr(1);
      RenderedReport report;
      try {
        report = render_run_report(run_dir, false);
      } catch (const Error& e) {
        res.status = 503;
        res.set_content(std::string("<html><body><h1>live view</h1><p>") +
                            detail::html_escape(e.what()) + "</p></body></html>",
                        "text/html; charset=utf-8");
        res.set_header("Refresh", refresh_header());
        return;
      }
      auto it = report.files.find(path);
      if (it == report.files.end()) {
        res.status = 404;
        return;
      }
      const char* type = path.ends_with(".svg") ? "image/svg+xml"
                                                : "text/html; charset=utf-8";
      res.set_content(it->second, type);
      res.set_header("Refresh", refresh_header());
    });
  }

  std::string refresh_header() const {
    // Integer seconds are what clients implement reliably.
    long s = static_cast<long>(refresh + 0.5);
    return std::to_string(s < 1 ? 1 : s);
  }
};

LiveServer::LiveServer(fs::path run_dir, double refresh_seconds)
    : impl_(std::make_unique<Impl>(std::move(run_dir), refresh_seconds)) {}

LiveServer::~LiveServer() = default;

int LiveServer::bind(const std::string& host, int port) {
  if (port == 0) {
    int bound = impl_->server.bind_to_any_port(host);
    if (bound <= 0) throw NetworkError("cannot bind to " + host);
    return bound;
  }
  if (!impl_->server.bind_to_port(host, port))
    throw NetworkError("cannot bind to " + host + ":" + std::to_string(port));
  return port;
}

void LiveServer::run() {
  if (!impl_->server.listen_after_bind())
    throw NetworkError("live server terminated unexpectedly");
}

void LiveServer::stop() { impl_->server.stop(); }

void serve_live(const fs::path& run_dir, int port, double refresh_seconds) {
  LiveServer server(run_dir, refresh_seconds);
  server.bind("0.0.0.0", port);
  server.run();
}

}  // namespace qcal
