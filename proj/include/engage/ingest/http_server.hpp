// SPDX-License-Identifier: Apache-2.0
// http_server.hpp
// HTTP binding for the ingestion service.
//
//   POST /v1/events        body: one or more records  -> 202 / 400 / 403 / 429
//   GET  /v1/collector.js  the browser collector, cacheable, CORS-open
//   GET  /v1/health        liveness plus queue gauges
//
// A POST counts as collector traffic only when it carries `collector=1` in
// the query string (the collector script adds it; sendBeacon cannot set
// headers). Anything else is treated as a bare page hit.
#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <thread>

#include "engage/ingest/service.hpp"

namespace httplib {
class Server;
}

namespace engage::ingest {

struct HttpConfig {
  std::string host = "0.0.0.0";
  int port = 8080;  // 0 picks an ephemeral port
  std::filesystem::path collector_script;  // empty: /v1/collector.js is 404
  int thread_pool = 16;
};

class HttpFrontend {
 public:
  HttpFrontend(IngestionService& service, HttpConfig config);
  ~HttpFrontend();

  HttpFrontend(const HttpFrontend&) = delete;
  HttpFrontend& operator=(const HttpFrontend&) = delete;

  // Throws Error(kBindFailure) when the address is unavailable.
  void bind();
  // Serves on a background thread; bind() must have succeeded.
  void start();
  void stop();

  int port() const { return bound_port_; }

 private:
  void install_routes();

  IngestionService& service_;
  HttpConfig config_;
  std::unique_ptr<httplib::Server> server_;
  std::thread listener_;
  int bound_port_ = -1;
};

}  // namespace engage::ingest
