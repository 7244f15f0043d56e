// SPDX-License-Identifier: Apache-2.0
#include "engage/ingest/http_server.hpp"

#include <chrono>
#include <fstream>
#include <sstream>

#include "httplib.h"
#include "json.hpp"

#include "engage/error.hpp"

namespace engage::ingest {

namespace {

std::int64_t epoch_now() {
  return std::chrono::duration_cast<std::chrono::seconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

std::string client_address(const httplib::Request& req) {
  // Assumes a fronting proxy; the first X-Forwarded-For hop is the client.
  if (req.has_header("X-Forwarded-For")) {
    std::string hops = req.get_header_value("X-Forwarded-For");
    auto comma = hops.find(',');
    std::string first = hops.substr(0, comma);
    auto b = first.find_first_not_of(' ');
    auto e = first.find_last_not_of(' ');
    if (b != std::string::npos) return first.substr(b, e - b + 1);
  }
  return req.remote_addr;
}

std::string status_word(SubmitStatus s) {
  switch (s) {
    case SubmitStatus::kAccepted: return "accepted";
    case SubmitStatus::kMalformed: return "malformed";
    case SubmitStatus::kBotRejected: return "forbidden";
    case SubmitStatus::kBackpressure: return "retry_later";
  }
  return "error";
}

}  // namespace

HttpFrontend::HttpFrontend(IngestionService& service, HttpConfig config)
    : service_(service),
      config_(std::move(config)),
      server_(std::make_unique<httplib::Server>()) {
  const int pool = config_.thread_pool;
  server_->new_task_queue = [pool] {
    return new httplib::ThreadPool(static_cast<size_t>(pool));
  };
  // No SO_REUSEPORT: a second instance on the same port must fail to bind.
  server_->set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR,
               reinterpret_cast<const void*>(&yes), sizeof(yes));
  });
  // Responses go out as several writes; without this keep-alive clients
  // stall on delayed ACKs.
  server_->set_tcp_nodelay(true);
  install_routes();
}

HttpFrontend::~HttpFrontend() { stop(); }

void HttpFrontend::install_routes() {
  server_->Post("/v1/events", [this](const httplib::Request& req,
                                      httplib::Response& res) {
    RequestMeta meta;
    meta.source_ip = client_address(req);
    meta.user_agent = req.get_header_value("User-Agent");
    meta.executed_collector = req.get_param_value("collector") == "1";
    meta.arrival_time = epoch_now();

    const SubmitResult result = service_.handle_submit(req.body, meta);
    res.status = http_status(result.status);
    if (result.status == SubmitStatus::kBackpressure) {
      res.set_header("Retry-After", "1");
    }
    nlohmann::json body = {{"status", status_word(result.status)},
                           {"events", result.events}};
    if (!result.detail.empty()) body["detail"] = result.detail;
    res.set_content(body.dump(), "application/json");
  });

  server_->Get("/v1/collector.js", [this](const httplib::Request&,
                                           httplib::Response& res) {
    std::ifstream in(config_.collector_script, std::ios::binary);
    if (config_.collector_script.empty() || !in) {
      res.status = 404;
      res.set_content("collector script not configured\n", "text/plain");
      return;
    }
    std::ostringstream script;
    script << in.rdbuf();
    res.set_header("Cache-Control", "public, max-age=3600");
    res.set_header("Access-Control-Allow-Origin", "*");
    res.set_header("Cross-Origin-Resource-Policy", "cross-origin");
    res.set_header("X-Content-Type-Options", "nosniff");
    res.set_content(script.str(), "application/javascript; charset=utf-8");
  });

  server_->Get("/v1/health", [this](const httplib::Request&,
                                     httplib::Response& res) {
    const ServiceStats s = service_.stats();
    nlohmann::json body = {
        {"status", "ok"},
        {"queue_depth", s.queue_depth},
        {"queue_capacity", service_.queue().capacity()},
        {"in_flight", s.in_flight},
        {"accepted", s.accepted},
        {"appended", s.appended},
        {"malformed", s.malformed},
        {"bot_rejected", s.bot_rejected},
        {"backpressure", s.backpressure},
        {"storage_failures", s.storage_failures},
    };
    res.set_content(body.dump(), "application/json");
  });
}

void HttpFrontend::bind() {
  if (config_.port == 0) {
    bound_port_ = server_->bind_to_any_port(config_.host);
  } else if (server_->bind_to_port(config_.host, config_.port)) {
    bound_port_ = config_.port;
  } else {
    bound_port_ = -1;
  }
  if (bound_port_ <= 0) {
    throw Error(Errc::kBindFailure,
                config_.host + ":" + std::to_string(config_.port),
                "address unavailable");
  }
}

void HttpFrontend::start() {
  if (bound_port_ <= 0) bind();
  listener_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
}

void HttpFrontend::stop() {
  if (server_) server_->stop();
  if (listener_.joinable()) listener_.join();
}

}  // namespace engage::ingest
