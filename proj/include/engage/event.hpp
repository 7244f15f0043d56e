// SPDX-License-Identifier: Apache-2.0
// event.hpp
// Canonical collection types: the generic Event envelope plus the typed
// engagement and visible-impression reports carried inside it.
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace engage {

// Insertion-ordered so that encoded records keep the producer's key order.
using Properties = nlohmann::ordered_json;

namespace event_type {
inline constexpr std::string_view kEngagementReport = "engagement_report";
inline constexpr std::string_view kVisibleImpressionReport =
    "visible_impression_report";
inline constexpr std::string_view kPageLoad = "page_load";
inline constexpr std::string_view kClick = "click";
}  // namespace event_type

// entity -> action -> target entity. `ip` may be empty when the producer did
// not know it; the ingestion service stamps it from the request.
struct Event {
  std::string entity_id;
  std::string entity_type;
  std::string target_entity_id;
  std::string target_entity_type;
  std::string event_type;
  std::int64_t timestamp = 0;  // Unix epoch seconds
  std::string ip;
  Properties properties = Properties::object();

  friend bool operator==(const Event&, const Event&) = default;
};

// Throws Error (kSchemaViolation / kInvariantViolation) when `event` breaks
// an envelope invariant or carries a malformed typed payload.
void validate(const Event& event);

// The eight DOM handlers the collector registers.
enum class DomEvent : std::uint8_t {
  kMouseMove,
  kScroll,
  kBeforeUnload,
  kResize,
  kFocus,
  kDomContentLoaded,
  kVisibilityChange,
  kKeyDown,
};

inline constexpr std::array<DomEvent, 8> kAllDomEvents = {
    DomEvent::kMouseMove, DomEvent::kScroll,
    DomEvent::kBeforeUnload, DomEvent::kResize,
    DomEvent::kFocus, DomEvent::kDomContentLoaded,
    DomEvent::kVisibilityChange, DomEvent::kKeyDown};

// Wire names: mousemove, scroll, beforeunload, resize, focus,
// DOMContentLoaded, visibilitychange, keydown.
std::string_view dom_event_name(DomEvent name);
std::optional<DomEvent> parse_dom_event(std::string_view name);

struct ScrollSample {
  std::int64_t document_height = 0;
  std::int64_t screen_height = 0;
  std::int64_t screen_width = 0;
  std::int64_t scroll_top = 0;  // max distance from document top in the interval

  bool valid() const {
    return document_height >= 0 && screen_height > 0 && screen_width > 0 &&
           scroll_top >= 0;
  }

  friend bool operator==(const ScrollSample&, const ScrollSample&) = default;
};

// One five-second hash table of DOM event name -> payload. Entries keep first
// insertion order; repeated markers are idempotent and repeated scrolls keep
// the running maximum scroll_top with the newest heights.
class IntervalBucket {
 public:
  // Marks `name`. Scroll entries must go through merge_scroll().
  void mark(DomEvent name);
  void merge_scroll(const ScrollSample& sample);

  bool contains(DomEvent name) const;
  bool empty() const { return names_.empty(); }
  std::size_t size() const { return names_.size(); }
  const std::vector<DomEvent>& names() const { return names_; }
  const std::optional<ScrollSample>& scroll() const { return scroll_; }

  friend bool operator==(const IntervalBucket&, const IntervalBucket&) =
      default;

 private:
  std::vector<DomEvent> names_;
  std::optional<ScrollSample> scroll_;
};

struct SessionIdentity {
  std::string entity_id;
  std::string entity_type = "user";
  std::string target_entity_id;
  std::string target_entity_type = "item";
  std::string ip;

  friend bool operator==(const SessionIdentity&, const SessionIdentity&) =
      default;
};

inline constexpr std::size_t kMaxBucketsPerReport = 3;

struct EngagementReport {
  SessionIdentity identity;
  std::int64_t timestamp = 0;
  std::vector<IntervalBucket> buckets;  // 1..3 when transmitted

  friend bool operator==(const EngagementReport&, const EngagementReport&) =
      default;
};

struct VisibleImpressionReport {
  SessionIdentity identity;  // target is the listing page
  std::int64_t timestamp = 0;
  std::vector<std::string> viewed_items;  // non-empty, deduplicated

  friend bool operator==(const VisibleImpressionReport&,
                         const VisibleImpressionReport&) = default;
};

Event to_event(const EngagementReport& report);
Event to_event(const VisibleImpressionReport& report);

// Both throw Error on a type mismatch or a payload that breaks the report
// invariants; the error field is the dotted path of the offending value.
EngagementReport engagement_report_from(const Event& event);
VisibleImpressionReport visible_impression_report_from(const Event& event);

}  // namespace engage
