// SPDX-License-Identifier: Apache-2.0
// comparison.hpp
// Page-load method vs. pinging method over the same sessions.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>

#include "engage/event.hpp"
#include "engage/miner/features.hpp"

namespace engage::miner {

struct AttentionComparison {
  std::int64_t page_load_seconds = 0;
  std::int64_t ping_seconds = 0;
  double ratio = 0.0;  // page_load / ping
};

struct ImpressionComparison {
  std::int64_t page_load_impressions = 0;
  std::int64_t visible_impressions = 0;
  double reduction_percent = 0.0;
  std::int64_t clicks = 0;
  std::optional<double> ctr_page_load;
  std::optional<double> ctr_visible;
};

// A section is present when the input had data for it.
struct ComparisonReport {
  std::optional<AttentionComparison> attention;
  std::optional<ImpressionComparison> impressions;
};

// Page-load dwell: per session (entityId plus the optional sessionId
// property), the sum of gaps between consecutive page_load timestamps. The
// last page of a session contributes nothing.
std::int64_t page_load_attention(std::span<const Event> page_loads);

// Σ listedItems sizes over page_load events.
std::int64_t page_load_impressions(std::span<const Event> page_loads);

// Throws kZeroPingAttention.
AttentionComparison compare_attention(std::int64_t page_load_seconds,
                                      std::int64_t ping_seconds);
// Throws kZeroPageLoadImpressions.
ImpressionComparison compare_impressions(std::int64_t page_load_impressions,
                                         std::int64_t visible_impressions,
                                         std::int64_t clicks = 0);

// Throws kInsufficientData when neither section has data, or the section
// specific error when only its denominator is zero.
ComparisonReport compare_methods(
    std::span<const Event> page_load_events,
    std::span<const EngagementReport> ping_reports,
    std::span<const VisibleImpressionReport> visibility_reports,
    std::int64_t clicks = 0);

// Splits a mixed log by event type and delegates.
ComparisonReport compare_methods(std::span<const Event> log);

enum class ReportFormat { kCsv, kJson };

void write_comparison(std::ostream& out, const ComparisonReport& report,
                      ReportFormat format);

}  // namespace engage::miner
