// SPDX-License-Identifier: Apache-2.0
// pinging.hpp
// Clock-driven collector state machine for one (user, page) view.
//
// DOM handlers write into a shared interval bucket. Every 5 s a tick moves a
// non-empty bucket onto the pending list; every third tick (15 s) a flush
// ships the pending buckets as one engagement report, or nothing when the
// list is empty. Listing pages additionally accumulate the identifiers of
// items seen in the viewport and flush them on the same cadence or on unload.
//
// The clock is injected: nothing here reads wall time. Boundaries are aligned
// to the load time passed at construction. Not thread-safe; callers serialize
// access per instance.
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "engage/event.hpp"

namespace engage::pinging {

inline constexpr std::int64_t kTickSeconds = 5;
inline constexpr std::int64_t kTicksPerFlush = 3;
inline constexpr std::int64_t kFlushSeconds = kTickSeconds * kTicksPerFlush;

using Emission = std::variant<EngagementReport, VisibleImpressionReport>;
using Transport = std::function<void(const Emission&)>;

Event to_event(const Emission& emission);

class PingingCollector {
 public:
  PingingCollector(SessionIdentity identity, std::int64_t load_time,
                   Transport transport = {});

  // --- handlers --------------------------------------------------------
  // Scroll requires `sample`; other names ignore it. Does not move the
  // clock: call advance_to() first so the event lands in the right interval.
  void record_dom_event(DomEvent name,
                        const std::optional<ScrollSample>& sample = {});
  // Throws kUnknownEventName for anything outside the eight handlers.
  void record_dom_event(std::string_view name,
                        const std::optional<ScrollSample>& sample = {});
  void record_visible_items(std::span<const std::string> item_ids);

  // --- timer callbacks -------------------------------------------------
  void tick(std::int64_t now);
  std::optional<EngagementReport> flush(std::int64_t now);
  std::optional<VisibleImpressionReport> flush_visibility(std::int64_t now,
                                                          bool on_unload);

  // --- driver ----------------------------------------------------------
  // Fires every tick/flush whose boundary is <= now. A long gap (suspended
  // host) is one catch-up: the first due tick closes the open bucket and
  // every later missed interval is empty.
  void advance_to(std::int64_t now);
  // advance_to(now) then record. A beforeunload is routed to unload().
  void observe(std::int64_t now, DomEvent name,
               const std::optional<ScrollSample>& sample = {});
  // BeforeUnload: records the marker, then ships pending buckets plus the
  // open bucket and any viewed items immediately. Closes the collector.
  void unload(std::int64_t now);
  // Page view ended without a beforeunload (navigation): same early flush,
  // no marker recorded.
  void close(std::int64_t now);

  const SessionIdentity& identity() const { return identity_; }
  const IntervalBucket& current_bucket() const { return current_; }
  const std::vector<IntervalBucket>& pending_buckets() const { return pending_; }
  const std::vector<std::string>& viewed_items() const { return viewed_; }
  std::int64_t load_time() const { return load_time_; }
  std::int64_t last_tick_at() const { return last_tick_at_; }
  std::int64_t last_flush_at() const { return last_flush_at_; }
  std::int64_t next_tick_at() const { return next_tick_at_; }
  bool closed() const { return closed_; }

 private:
  void require_open() const;
  std::optional<EngagementReport> emit_pending(std::int64_t now);
  std::optional<VisibleImpressionReport> emit_viewed(std::int64_t now);
  void finish(std::int64_t now);

  SessionIdentity identity_;
  std::int64_t load_time_;
  Transport transport_;

  IntervalBucket current_;
  std::vector<IntervalBucket> pending_;
  std::int64_t ticks_since_flush_ = 0;

  std::vector<std::string> viewed_;  // insertion order
  std::set<std::string> viewed_set_;
  std::set<std::string> reported_;  // shipped during this page view

  std::int64_t last_tick_at_;
  std::int64_t last_flush_at_;
  std::int64_t next_tick_at_;
  std::int64_t clock_;  // latest time seen by advance_to
  bool closed_ = false;
};

}  // namespace engage::pinging
