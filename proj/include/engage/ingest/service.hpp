// SPDX-License-Identifier: Apache-2.0
// service.hpp
// Ingestion core: validate and classify submissions, enqueue without waiting
// on storage, and drain the queue into the event store with worker threads.
#pragma once

#include <atomic>
#include <cstdint>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "engage/ingest/event_queue.hpp"
#include "engage/ingest/event_store.hpp"
#include "engage/ingest/traffic_classifier.hpp"

namespace engage::ingest {

enum class SubmitStatus { kAccepted, kMalformed, kBotRejected, kBackpressure };

// 202 / 400 / 403 / 429
int http_status(SubmitStatus status);

struct SubmitResult {
  SubmitStatus status = SubmitStatus::kAccepted;
  std::size_t events = 0;
  std::string detail;
};

struct ServiceConfig {
  std::size_t queue_capacity = EventQueue::kDefaultCapacity;
  std::size_t workers = 4;
  std::size_t batch_size = 256;
  ClassifierConfig classifier;
};

struct ServiceStats {
  std::uint64_t accepted = 0;  // events
  std::uint64_t appended = 0;  // events
  std::uint64_t malformed = 0;     // requests
  std::uint64_t bot_rejected = 0;  // requests
  std::uint64_t backpressure = 0;  // requests
  std::uint64_t storage_failures = 0;
  std::size_t queue_depth = 0;
  std::size_t in_flight = 0;
};

// Dequeues batches until the queue is empty, appending each batch in dequeue
// order. Returns the number of events appended. A failed append puts the
// batch back at the front and rethrows Error(kStorageFailure).
std::size_t worker_drain(EventQueue& queue, EventStore& store,
                         std::size_t batch_size = 256);

class IngestionService {
 public:
  IngestionService(ServiceConfig config, EventStore& store);
  ~IngestionService();

  IngestionService(const IngestionService&) = delete;
  IngestionService& operator=(const IngestionService&) = delete;

  void start();
  // Stops accepting, drains everything still queued, joins the workers.
  void stop();

  // `body` is one record, or several newline-separated records accepted or
  // rejected as a unit. Never touches the store.
  SubmitResult handle_submit(std::string_view body, const RequestMeta& meta);

  ServiceStats stats() const;
  EventQueue& queue() { return queue_; }
  TrafficClassifier& classifier() { return classifier_; }

 private:
  void worker_loop();

  ServiceConfig config_;
  EventStore& store_;
  EventQueue queue_;
  TrafficClassifier classifier_;
  std::vector<std::thread> workers_;
  bool running_ = false;

  std::atomic<std::uint64_t> accepted_{0};
  std::atomic<std::uint64_t> appended_{0};
  std::atomic<std::uint64_t> malformed_{0};
  std::atomic<std::uint64_t> bot_rejected_{0};
  std::atomic<std::uint64_t> backpressure_{0};
  std::atomic<std::uint64_t> storage_failures_{0};
};

}  // namespace engage::ingest
