// SPDX-License-Identifier: Apache-2.0
#include "engage/event.hpp"

#include <algorithm>
#include <set>

#include "engage/error.hpp"

namespace engage {

namespace {

constexpr std::array<std::string_view, 8> kDomEventNames = {
    "mousemove", "scroll", "beforeunload", "resize",
    "focus", "DOMContentLoaded", "visibilitychange", "keydown"};

constexpr std::array<std::string_view, 4> kScrollFields = {
    "document_height", "screen_height", "screen_width", "scroll_top"};

[[noreturn]] void schema_error(const std::string& field,
                               const std::string& detail) {
  throw Error(Errc::kSchemaViolation, field, detail);
}

[[noreturn]] void invariant_error(const std::string& field,
                                  const std::string& detail) {
  throw Error(Errc::kInvariantViolation, field, detail);
}

std::string index_path(const std::string& base, std::size_t i) {
  return base + "[" + std::to_string(i) + "]";
}

Properties encode_scroll(const ScrollSample& s) {
  Properties out = Properties::object();
  out["document_height"] = s.document_height;
  out["screen_height"] = s.screen_height;
  out["screen_width"] = s.screen_width;
  out["scroll_top"] = s.scroll_top;
  return out;
}

ScrollSample decode_scroll(const Properties& value, const std::string& path) {
  if (!value.is_object()) schema_error(path, "scroll payload must be an object");
  std::array<std::int64_t, 4> fields{};
  for (std::size_t i = 0; i < kScrollFields.size(); ++i) {
    const std::string key(kScrollFields[i]);
    const std::string field_path = path + "." + key;
    auto it = value.find(key);
    if (it == value.end()) schema_error(field_path, "missing");
    if (!it->is_number_integer()) schema_error(field_path, "must be an integer");
    fields[i] = it->get<std::int64_t>();
  }
  ScrollSample sample{fields[0], fields[1], fields[2], fields[3]};
  if (sample.document_height < 0)
    invariant_error(path + ".document_height", "must be >= 0");
  if (sample.screen_height <= 0)
    invariant_error(path + ".screen_height", "must be > 0");
  if (sample.screen_width <= 0)
    invariant_error(path + ".screen_width", "must be > 0");
  if (sample.scroll_top < 0) invariant_error(path + ".scroll_top", "must be >= 0");
  return sample;
}

Properties encode_bucket(const IntervalBucket& bucket) {
  Properties entries = Properties::array();
  for (DomEvent name : bucket.names()) {
    Properties entry = Properties::object();
    const std::string key(dom_event_name(name));
    if (name == DomEvent::kScroll) {
      entry[key] = encode_scroll(*bucket.scroll());
    } else {
      entry[key] = 1;
    }
    entries.push_back(std::move(entry));
  }
  return entries;
}

IntervalBucket decode_bucket(const Properties& value, const std::string& path) {
  if (!value.is_array()) schema_error(path, "bucket must be an array");
  if (value.empty()) invariant_error(path, "transmitted bucket is empty");
  IntervalBucket bucket;
  for (std::size_t i = 0; i < value.size(); ++i) {
    const std::string entry_path = index_path(path, i);
    const Properties& entry = value[i];
    if (!entry.is_object() || entry.size() != 1)
      schema_error(entry_path, "entry must be a single-key object");
    const auto first = entry.begin();
    const std::string& key = first.key();
    const Properties& payload = first.value();
    const std::string payload_path = entry_path + "." + key;
    auto name = parse_dom_event(key);
    if (!name) invariant_error(payload_path, "unregistered DOM event name");
    if (bucket.contains(*name))
      invariant_error(payload_path, "duplicate event name within one interval");
    if (*name == DomEvent::kScroll) {
      bucket.merge_scroll(decode_scroll(payload, payload_path));
    } else {
      if (!payload.is_number_integer())
        schema_error(payload_path, "marker must be an integer");
      if (payload.get<std::int64_t>() != 1)
        invariant_error(payload_path, "marker value must be 1");
      bucket.mark(*name);
    }
  }
  return bucket;
}

Event envelope(const SessionIdentity& id, std::string_view type,
               std::int64_t timestamp) {
  Event e;
  e.entity_id = id.entity_id;
  e.entity_type = id.entity_type;
  e.target_entity_id = id.target_entity_id;
  e.target_entity_type = id.target_entity_type;
  e.event_type = std::string(type);
  e.timestamp = timestamp;
  e.ip = id.ip;
  return e;
}

SessionIdentity identity_of(const Event& e) {
  return SessionIdentity{e.entity_id, e.entity_type, e.target_entity_id,
                         e.target_entity_type, e.ip};
}

void validate_envelope(const Event& e) {
  const std::pair<std::string_view, const std::string*> required[] = {
      {"entityId", &e.entity_id},
      {"entityType", &e.entity_type},
      {"targetEntityId", &e.target_entity_id},
      {"targetEntityType", &e.target_entity_type},
      {"type", &e.event_type},
  };
  for (const auto& [field, value] : required) {
    if (value->empty()) invariant_error(std::string(field), "must be non-empty");
  }
  if (e.timestamp <= 0) invariant_error("timestamp", "must be > 0");
  if (!e.properties.is_object()) schema_error("properties", "must be an object");
}

}  // namespace

std::string_view dom_event_name(DomEvent name) {
  return kDomEventNames[static_cast<std::size_t>(name)];
}

std::optional<DomEvent> parse_dom_event(std::string_view name) {
  for (std::size_t i = 0; i < kDomEventNames.size(); ++i) {
    if (kDomEventNames[i] == name) return static_cast<DomEvent>(i);
  }
  return std::nullopt;
}

void IntervalBucket::mark(DomEvent name) {
  if (name == DomEvent::kScroll) {
    throw Error(Errc::kSchemaViolation, "scroll",
                "scroll entries carry a ScrollSample");
  }
  if (!contains(name)) names_.push_back(name);
}

void IntervalBucket::merge_scroll(const ScrollSample& sample) {
  if (!scroll_) {
    names_.push_back(DomEvent::kScroll);
    scroll_ = sample;
    return;
  }
  const std::int64_t top = std::max(scroll_->scroll_top, sample.scroll_top);
  scroll_ = sample;
  scroll_->scroll_top = top;
}

bool IntervalBucket::contains(DomEvent name) const {
  return std::find(names_.begin(), names_.end(), name) != names_.end();
}

Event to_event(const EngagementReport& report) {
  Event e = envelope(report.identity, event_type::kEngagementReport,
                     report.timestamp);
  Properties buckets = Properties::array();
  for (const auto& bucket : report.buckets) buckets.push_back(encode_bucket(bucket));
  e.properties["report"] = std::move(buckets);
  return e;
}

Event to_event(const VisibleImpressionReport& report) {
  Event e = envelope(report.identity, event_type::kVisibleImpressionReport,
                     report.timestamp);
  e.properties["viewedItems"] = report.viewed_items;
  return e;
}

EngagementReport engagement_report_from(const Event& event) {
  if (event.event_type != event_type::kEngagementReport)
    schema_error("type", "expected engagement_report");
  auto it = event.properties.find("report");
  if (it == event.properties.end()) schema_error("properties.report", "missing");
  if (!it->is_array()) schema_error("properties.report", "must be an array");
  if (it->empty() || it->size() > kMaxBucketsPerReport) {
    invariant_error("properties.report",
                    "length " + std::to_string(it->size()) +
                        " outside [1, 3]");
  }
  EngagementReport report;
  report.identity = identity_of(event);
  report.timestamp = event.timestamp;
  for (std::size_t i = 0; i < it->size(); ++i) {
    report.buckets.push_back(
        decode_bucket((*it)[i], index_path("properties.report", i)));
  }
  return report;
}

VisibleImpressionReport visible_impression_report_from(const Event& event) {
  if (event.event_type != event_type::kVisibleImpressionReport)
    schema_error("type", "expected visible_impression_report");
  auto it = event.properties.find("viewedItems");
  const std::string path = "properties.viewedItems";
  if (it == event.properties.end()) schema_error(path, "missing");
  if (!it->is_array()) schema_error(path, "must be an array");
  if (it->empty()) invariant_error(path, "transmitted report is empty");
  VisibleImpressionReport report;
  report.identity = identity_of(event);
  report.timestamp = event.timestamp;
  std::set<std::string> seen;
  for (std::size_t i = 0; i < it->size(); ++i) {
    const Properties& item = (*it)[i];
    if (!item.is_string()) schema_error(index_path(path, i), "must be a string");
    auto id = item.get<std::string>();
    if (id.empty()) invariant_error(index_path(path, i), "must be non-empty");
    if (!seen.insert(id).second)
      invariant_error(index_path(path, i), "duplicate item identifier");
    report.viewed_items.push_back(std::move(id));
  }
  return report;
}

void validate(const Event& event) {
  validate_envelope(event);
  if (event.event_type == event_type::kEngagementReport) {
    (void)engagement_report_from(event);
  } else if (event.event_type == event_type::kVisibleImpressionReport) {
    (void)visible_impression_report_from(event);
  }
}

}  // namespace engage
