// SPDX-License-Identifier: Apache-2.0
#include "engage/ingest/service.hpp"

#include <chrono>

#include "engage/codec.hpp"
#include "engage/error.hpp"

namespace engage::ingest {

namespace {

constexpr auto kPollInterval = std::chrono::milliseconds(50);
constexpr auto kRetryBackoff = std::chrono::milliseconds(20);

std::int64_t epoch_now() {
  return std::chrono::duration_cast<std::chrono::seconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

}  // namespace

int http_status(SubmitStatus status) {
  switch (status) {
    case SubmitStatus::kAccepted: return 202;
    case SubmitStatus::kMalformed: return 400;
    case SubmitStatus::kBotRejected: return 403;
    case SubmitStatus::kBackpressure: return 429;
  }
  return 500;
}

std::size_t worker_drain(EventQueue& queue, EventStore& store,
                         std::size_t batch_size) {
  std::size_t appended = 0;
  for (;;) {
    auto batch = queue.pop_batch(batch_size, std::chrono::milliseconds(0));
    if (batch.events.empty()) return appended;
    queue.commit_in_order(batch, [&](const std::vector<Event>& events) {
      store.append(events);
    });
    appended += batch.events.size();
  }
}

IngestionService::IngestionService(ServiceConfig config, EventStore& store)
    : config_(std::move(config)),
      store_(store),
      queue_(config_.queue_capacity),
      classifier_(config_.classifier) {}

IngestionService::~IngestionService() { stop(); }

void IngestionService::start() {
  if (running_) return;
  running_ = true;
  const std::size_t n = config_.workers == 0 ? 1 : config_.workers;
  for (std::size_t i = 0; i < n; ++i) {
    workers_.emplace_back([this] { worker_loop(); });
  }
}

void IngestionService::stop() {
  if (!running_) return;
  queue_.close();
  for (auto& t : workers_) t.join();
  workers_.clear();
  running_ = false;
}

void IngestionService::worker_loop() {
  for (;;) {
    auto batch = queue_.pop_batch(config_.batch_size, kPollInterval);
    if (batch.events.empty()) {
      if (queue_.closed() && queue_.depth() == 0) return;
      continue;
    }
    try {
      queue_.commit_in_order(batch, [&](const std::vector<Event>& events) {
        store_.append(events);
      });
      appended_ += batch.events.size();
    } catch (const Error&) {
      ++storage_failures_;
      std::this_thread::sleep_for(kRetryBackoff);
    }
  }
}

SubmitResult IngestionService::handle_submit(std::string_view body,
                                             const RequestMeta& meta) {
  RequestMeta stamped = meta;
  if (stamped.arrival_time <= 0) stamped.arrival_time = epoch_now();

  if (classifier_.classify(stamped) == TrafficClass::kBot) {
    ++bot_rejected_;
    return {SubmitStatus::kBotRejected, 0, "classified as non-human traffic"};
  }

  std::vector<Event> events;
  std::size_t pos = 0;
  while (pos <= body.size()) {
    std::size_t end = body.find('\n', pos);
    if (end == std::string_view::npos) end = body.size();
    std::string_view line = body.substr(pos, end - pos);
    pos = end + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;
    try {
      events.push_back(decode_event(line));
    } catch (const Error& e) {
      ++malformed_;
      return {SubmitStatus::kMalformed, 0, e.what()};
    }
  }
  if (events.empty()) {
    ++malformed_;
    return {SubmitStatus::kMalformed, 0, "empty body"};
  }
  for (auto& e : events) {
    if (e.ip.empty()) e.ip = stamped.source_ip;
  }

  const std::size_t n = events.size();
  if (!queue_.try_push(events)) {
    ++backpressure_;
    return {SubmitStatus::kBackpressure, 0, "queue full, retry later"};
  }
  accepted_ += n;
  return {SubmitStatus::kAccepted, n, {}};
}

ServiceStats IngestionService::stats() const {
  ServiceStats s;
  s.accepted = accepted_.load();
  s.appended = appended_.load();
  s.malformed = malformed_.load();
  s.bot_rejected = bot_rejected_.load();
  s.backpressure = backpressure_.load();
  s.storage_failures = storage_failures_.load();
  s.queue_depth = queue_.depth();
  s.in_flight = queue_.in_flight();
  return s;
}

}  // namespace engage::ingest
