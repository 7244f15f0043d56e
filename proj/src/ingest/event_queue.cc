// SPDX-License-Identifier: Apache-2.0
#include "engage/ingest/event_queue.hpp"

#include <algorithm>
#include <iterator>

namespace engage::ingest {

EventQueue::EventQueue(std::size_t capacity) : capacity_(capacity) {}

bool EventQueue::try_push(std::vector<Event>& events) {
  {
    std::lock_guard lk(mu_);
    if (closed_) return false;
    if (queue_.size() + in_flight_ + events.size() > capacity_) return false;
    std::move(events.begin(), events.end(), std::back_inserter(queue_));
  }
  events.clear();
  not_empty_.notify_all();
  return true;
}

bool EventQueue::try_push(Event event) {
  std::vector<Event> one;
  one.push_back(std::move(event));
  return try_push(one);
}

EventQueue::Batch EventQueue::pop_batch(std::size_t max_events,
                                        std::chrono::milliseconds timeout) {
  Batch batch;
  std::unique_lock lk(mu_);
  if (!not_empty_.wait_for(lk, timeout,
                           [this] { return !queue_.empty() || closed_; })) {
    return batch;
  }
  const std::size_t n = std::min(max_events, queue_.size());
  if (n == 0) return batch;
  batch.events.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    batch.events.push_back(std::move(queue_.front()));
    queue_.pop_front();
  }
  in_flight_ += n;
  batch.ticket = next_ticket_++;
  return batch;
}

void EventQueue::commit_in_order(
    Batch& batch, const std::function<void(const std::vector<Event>&)>& commit) {
  std::unique_lock lk(mu_);
  commit_turn_.wait(lk, [&] { return next_commit_ == batch.ticket; });
  lk.unlock();

  try {
    commit(batch.events);
  } catch (...) {
    lk.lock();
    in_flight_ -= batch.events.size();
    for (auto it = batch.events.rbegin(); it != batch.events.rend(); ++it) {
      queue_.push_front(std::move(*it));
    }
    ++next_commit_;
    lk.unlock();
    commit_turn_.notify_all();
    not_empty_.notify_all();
    batch.events.clear();
    throw;
  }
  lk.lock();
  in_flight_ -= batch.events.size();
  ++next_commit_;
  lk.unlock();
  commit_turn_.notify_all();
}

void EventQueue::close() {
  {
    std::lock_guard lk(mu_);
    closed_ = true;
  }
  not_empty_.notify_all();
}

bool EventQueue::closed() const {
  std::lock_guard lk(mu_);
  return closed_;
}

std::size_t EventQueue::depth() const {
  std::lock_guard lk(mu_);
  return queue_.size();
}

std::size_t EventQueue::in_flight() const {
  std::lock_guard lk(mu_);
  return in_flight_;
}

}  // namespace engage::ingest
