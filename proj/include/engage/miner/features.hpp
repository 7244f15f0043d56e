// SPDX-License-Identifier: Apache-2.0
// features.hpp
// Engagement feature formulas and the per-item feature table.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "engage/event.hpp"

namespace engage::miner {

inline constexpr std::int64_t kSecondsPerBucket = 5;

// 5 s for every bucket of every report: each report contributes 5, 10 or
// 15 s. Throws kInvariantViolation for a report outside [1, 3] buckets.
std::int64_t attention_span(std::span<const EngagementReport> reports);

// Percent of the document revealed: min(screen + top, doc) / doc * 100.
// `content_height`, when given, replaces the document height so only the
// main content is measured. Result is in (0, 100].
double scrolled(std::int64_t screen_height, std::int64_t max_scroll_top,
                std::int64_t document_height,
                std::optional<std::int64_t> content_height = std::nullopt);

// Per-report reduction used by avg_scroll_depth: largest scroll_top across
// the report's buckets with the heights of the latest scroll entry. Empty
// when the report has no scroll entry.
std::optional<ScrollSample> report_scroll(const EngagementReport& report);

// Mean of one scrolled() value per scroll-bearing report. Reports without a
// scroll entry are left out entirely. Throws kNoScrollData when none remain.
double avg_scroll_depth(std::span<const EngagementReport> reports);

// clicks / impressions * 100, rounded half-up to two decimals using exact
// integer arithmetic. Throws kZeroImpressions.
double ctr(std::int64_t clicks, std::int64_t visible_impressions);

// Presentation rounding, half away from zero.
double round_half_up(double value, int decimals = 2);

struct ItemFeatures {
  std::string item_id;
  std::int64_t attention_seconds = 0;
  std::map<std::string, std::int64_t> attention_by_user;
  std::optional<double> avg_scroll_depth_percent;
  std::int64_t page_load_impressions = 0;
  std::int64_t visible_impressions = 0;
  std::int64_t clicks = 0;
  std::optional<double> ctr_percent;
  std::int64_t engagement_reports = 0;
  std::int64_t errors = 0;  // events about this item that failed to mine
};

using FeatureTable = std::map<std::string, ItemFeatures>;

// Listing exposures are page_load events whose properties carry
// "listedItems"; every listed item gets one page-load impression.
inline constexpr const char* kListedItemsKey = "listedItems";
inline constexpr const char* kSessionKey = "sessionId";

FeatureTable item_stats(std::span<const Event> events);

// Optional preprocessing for at-least-once logs: drops an event when an
// identical event with the same (entityId, targetEntityId, timestamp, type)
// was already kept.
std::vector<Event> dedup_events(std::span<const Event> events);

// Mean attention over items with at least one engagement report.
// Throws kInsufficientData when there are none.
double fleet_mean_attention(const FeatureTable& table);

enum class TableFormat { kCsv, kJson };

// Columns: itemId, attentionSeconds, avgScrollDepthPercent,
// pageLoadImpressions, visibleImpressions, clicks, ctrPercent. Missing
// values are written as empty cells (csv) or null (json).
void write_feature_table(std::ostream& out, const FeatureTable& table,
                         TableFormat format);

}  // namespace engage::miner
