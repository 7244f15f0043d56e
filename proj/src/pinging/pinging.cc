// SPDX-License-Identifier: Apache-2.0
#include "engage/pinging.hpp"

#include <utility>

#include "engage/error.hpp"

namespace engage::pinging {

Event to_event(const Emission& emission) {
  return std::visit([](const auto& report) { return engage::to_event(report); },
                    emission);
}

PingingCollector::PingingCollector(SessionIdentity identity,
                                   std::int64_t load_time, Transport transport)
    : identity_(std::move(identity)),
      load_time_(load_time),
      transport_(std::move(transport)),
      last_tick_at_(load_time),
      last_flush_at_(load_time),
      next_tick_at_(load_time + kTickSeconds),
      clock_(load_time) {}

void PingingCollector::require_open() const {
  if (closed_) {
    throw Error(Errc::kCollectorClosed, identity_.target_entity_id,
                "page view already ended");
  }
}

void PingingCollector::record_dom_event(
    DomEvent name, const std::optional<ScrollSample>& sample) {
  require_open();
  if (name != DomEvent::kScroll) {
    current_.mark(name);
    return;
  }
  if (!sample) {
    throw Error(Errc::kSchemaViolation, "scroll",
                "scroll events carry a ScrollSample");
  }
  if (!sample->valid()) {
    throw Error(Errc::kInvariantViolation, "scroll", "invalid scroll sample");
  }
  current_.merge_scroll(*sample);
}

void PingingCollector::record_dom_event(
    std::string_view name, const std::optional<ScrollSample>& sample) {
  auto parsed = parse_dom_event(name);
  if (!parsed) {
    throw Error(Errc::kUnknownEventName, std::string(name),
                "no handler registered for this event");
  }
  record_dom_event(*parsed, sample);
}

void PingingCollector::record_visible_items(
    std::span<const std::string> item_ids) {
  require_open();
  for (const auto& id : item_ids) {
    if (reported_.contains(id)) continue;
    if (viewed_set_.insert(id).second) viewed_.push_back(id);
  }
}

void PingingCollector::tick(std::int64_t now) {
  require_open();
  if (now <= last_tick_at_) {
    throw Error(Errc::kClockRegression, "tick",
                std::to_string(now) + " <= " + std::to_string(last_tick_at_));
  }
  if (ticks_since_flush_ >= kTicksPerFlush) {
    throw Error(Errc::kInvariantViolation, "pendingBuckets",
                "flush is due before another tick");
  }
  if (!current_.empty()) {
    pending_.push_back(std::move(current_));
    current_ = IntervalBucket{};
  }
  ++ticks_since_flush_;
  last_tick_at_ = now;
}

std::optional<EngagementReport> PingingCollector::flush(std::int64_t now) {
  require_open();
  if (now <= last_flush_at_) {
    throw Error(Errc::kClockRegression, "flush",
                std::to_string(now) + " <= " + std::to_string(last_flush_at_));
  }
  ticks_since_flush_ = 0;
  last_flush_at_ = now;
  return emit_pending(now);
}

std::optional<VisibleImpressionReport> PingingCollector::flush_visibility(
    std::int64_t now, bool on_unload) {
  require_open();
  (void)on_unload;  // the unload path differs only in when it is called
  return emit_viewed(now);
}

std::optional<EngagementReport> PingingCollector::emit_pending(
    std::int64_t now) {
  if (pending_.empty()) return std::nullopt;
  EngagementReport report{identity_, now, std::move(pending_)};
  pending_.clear();
  if (transport_) transport_(report);
  return report;
}

std::optional<VisibleImpressionReport> PingingCollector::emit_viewed(
    std::int64_t now) {
  if (viewed_.empty()) return std::nullopt;
  VisibleImpressionReport report{identity_, now, std::move(viewed_)};
  viewed_.clear();
  for (const auto& id : report.viewed_items) reported_.insert(id);
  viewed_set_.clear();
  if (transport_) transport_(report);
  return report;
}

void PingingCollector::advance_to(std::int64_t now) {
  require_open();
  if (now < clock_) {
    throw Error(Errc::kClockRegression, "advance_to",
                std::to_string(now) + " < " + std::to_string(clock_));
  }
  clock_ = now;
  while (next_tick_at_ <= now) {
    if (current_.empty() && pending_.empty() && viewed_.empty()) {
      // Nothing can be emitted until new events arrive: jump over every
      // remaining boundary at once, keeping the flush phase.
      const std::int64_t due = (now - next_tick_at_) / kTickSeconds + 1;
      const std::int64_t last = next_tick_at_ + (due - 1) * kTickSeconds;
      const std::int64_t phase = ticks_since_flush_ + due;
      if (phase >= kTicksPerFlush) {
        last_flush_at_ = last - (phase % kTicksPerFlush) * kTickSeconds;
      }
      ticks_since_flush_ = phase % kTicksPerFlush;
      last_tick_at_ = last;
      next_tick_at_ = last + kTickSeconds;
      break;
    }
    const std::int64_t boundary = next_tick_at_;
    tick(boundary);
    if (ticks_since_flush_ == kTicksPerFlush) {
      flush(boundary);
      flush_visibility(boundary, false);
    }
    next_tick_at_ = boundary + kTickSeconds;
  }
}

void PingingCollector::observe(std::int64_t now, DomEvent name,
                               const std::optional<ScrollSample>& sample) {
  if (name == DomEvent::kBeforeUnload) {
    unload(now);
    return;
  }
  advance_to(now);
  record_dom_event(name, sample);
}

void PingingCollector::finish(std::int64_t now) {
  // After advance_to at most two ticks are pending since the last flush, so
  // pending plus the open bucket never exceeds three.
  if (!current_.empty()) {
    pending_.push_back(std::move(current_));
    current_ = IntervalBucket{};
  }
  emit_pending(now);
  emit_viewed(now);
  closed_ = true;
}

void PingingCollector::unload(std::int64_t now) {
  advance_to(now);
  current_.mark(DomEvent::kBeforeUnload);
  finish(now);
}

void PingingCollector::close(std::int64_t now) {
  advance_to(now);
  finish(now);
}

}  // namespace engage::pinging
