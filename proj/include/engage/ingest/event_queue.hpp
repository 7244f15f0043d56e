// SPDX-License-Identifier: Apache-2.0
// event_queue.hpp
// Bounded multi-producer/multi-consumer FIFO between the HTTP handlers and
// the storage workers.
#pragma once

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <functional>
#include <mutex>
#include <vector>

#include "engage/event.hpp"

namespace engage::ingest {

class EventQueue {
 public:
  static constexpr std::size_t kDefaultCapacity = 65536;

  struct Batch {
    std::uint64_t ticket = 0;  // dequeue order, used to commit in order
    std::vector<Event> events;
  };

  explicit EventQueue(std::size_t capacity = kDefaultCapacity);

  EventQueue(const EventQueue&) = delete;
  EventQueue& operator=(const EventQueue&) = delete;

  // All-or-nothing, never blocks. False when the events do not fit or the
  // queue is closed. Capacity counts queued plus in-flight (dequeued but not
  // yet committed) events, so a failed batch can always be put back.
  bool try_push(std::vector<Event>& events);
  bool try_push(Event event);

  // Waits up to `timeout` for at least one event; returns an empty batch on
  // timeout or when closed and drained.
  Batch pop_batch(std::size_t max_events, std::chrono::milliseconds timeout);

  // Runs `commit` for `batch` once every earlier ticket has been committed,
  // so appends happen in dequeue order no matter which worker holds the
  // batch. If `commit` throws, the batch goes back to the front of the queue
  // and the exception propagates.
  void commit_in_order(Batch& batch,
                       const std::function<void(const std::vector<Event>&)>& commit);

  void close();
  bool closed() const;

  std::size_t depth() const;
  std::size_t in_flight() const;
  std::size_t capacity() const { return capacity_; }

 private:
  const std::size_t capacity_;
  mutable std::mutex mu_;
  std::condition_variable not_empty_;
  std::condition_variable commit_turn_;
  std::deque<Event> queue_;
  std::size_t in_flight_ = 0;
  std::uint64_t next_ticket_ = 0;
  std::uint64_t next_commit_ = 0;
  bool closed_ = false;
};

}  // namespace engage::ingest
