// SPDX-License-Identifier: Apache-2.0
#include "engage/miner/comparison.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "engage/error.hpp"

namespace engage::miner {

std::int64_t page_load_attention(std::span<const Event> page_loads) {
  std::map<std::pair<std::string, std::string>, std::vector<std::int64_t>> sessions;
  for (const auto& e : page_loads) {
    if (e.event_type != event_type::kPageLoad) continue;
    std::string session;
    if (auto it = e.properties.find(kSessionKey);
        it != e.properties.end() && it->is_string()) {
      session = it->get<std::string>();
    }
    sessions[{e.entity_id, session}].push_back(e.timestamp);
  }
  std::int64_t total = 0;
  for (auto& [key, times] : sessions) {
    std::sort(times.begin(), times.end());
    for (std::size_t i = 1; i < times.size(); ++i) total += times[i] - times[i - 1];
  }
  return total;
}

std::int64_t page_load_impressions(std::span<const Event> page_loads) {
  std::int64_t total = 0;
  for (const auto& e : page_loads) {
    if (e.event_type != event_type::kPageLoad) continue;
    auto it = e.properties.find(kListedItemsKey);
    if (it != e.properties.end() && it->is_array()) {
      total += static_cast<std::int64_t>(it->size());
    }
  }
  return total;
}

AttentionComparison compare_attention(std::int64_t page_load_seconds,
                                      std::int64_t ping_seconds) {
  if (ping_seconds <= 0) {
    throw Error(Errc::kZeroPingAttention, "pingAttentionSeconds",
                "ratio undefined without pinging attention");
  }
  return AttentionComparison{
      page_load_seconds, ping_seconds,
      static_cast<double>(page_load_seconds) / static_cast<double>(ping_seconds)};
}

ImpressionComparison compare_impressions(std::int64_t page_load,
                                         std::int64_t visible,
                                         std::int64_t clicks) {
  if (page_load <= 0) {
    throw Error(Errc::kZeroPageLoadImpressions, "pageLoadImpressions",
                "reduction undefined without page-load impressions");
  }
  ImpressionComparison out;
  out.page_load_impressions = page_load;
  out.visible_impressions = visible;
  out.reduction_percent = static_cast<double>(page_load - visible) /
                          static_cast<double>(page_load) * 100.0;
  out.clicks = clicks;
  out.ctr_page_load = ctr(clicks, page_load);
  if (visible > 0) out.ctr_visible = ctr(clicks, visible);
  return out;
}

ComparisonReport compare_methods(
    std::span<const Event> page_load_events,
    std::span<const EngagementReport> ping_reports,
    std::span<const VisibleImpressionReport> visibility_reports,
    std::int64_t clicks) {
  const std::int64_t pl_seconds = page_load_attention(page_load_events);
  const std::int64_t ping_seconds = attention_span(ping_reports);
  const std::int64_t pl_impressions = page_load_impressions(page_load_events);
  std::int64_t visible = 0;
  for (const auto& r : visibility_reports) {
    visible += static_cast<std::int64_t>(r.viewed_items.size());
  }

  ComparisonReport report;
  if (pl_seconds > 0 || ping_seconds > 0) {
    report.attention = compare_attention(pl_seconds, ping_seconds);
  }
  if (pl_impressions > 0 || visible > 0) {
    report.impressions = compare_impressions(pl_impressions, visible, clicks);
  }
  if (!report.attention && !report.impressions) {
    throw Error(Errc::kInsufficientData, "log",
                "no page loads, engagement or visibility data to compare");
  }
  return report;
}

ComparisonReport compare_methods(std::span<const Event> log) {
  std::vector<Event> page_loads;
  std::vector<EngagementReport> pings;
  std::vector<VisibleImpressionReport> visible;
  std::int64_t clicks = 0;
  for (const auto& e : log) {
    if (e.event_type == event_type::kPageLoad) {
      page_loads.push_back(e);
    } else if (e.event_type == event_type::kEngagementReport) {
      pings.push_back(engagement_report_from(e));
    } else if (e.event_type == event_type::kVisibleImpressionReport) {
      visible.push_back(visible_impression_report_from(e));
    } else if (e.event_type == event_type::kClick) {
      ++clicks;
    }
  }
  return compare_methods(page_loads, pings, visible, clicks);
}

namespace {

std::string num(double v, const char* fmt = "%.2f") {
  char buf[64];
  std::snprintf(buf, sizeof(buf), fmt, v);
  return buf;
}

}  // namespace

void write_comparison(std::ostream& out, const ComparisonReport& report,
                      ReportFormat format) {
  if (format == ReportFormat::kJson) {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    if (const auto& a = report.attention) {
      j["pageLoadAttentionSeconds"] = a->page_load_seconds;
      j["pingAttentionSeconds"] = a->ping_seconds;
      j["attentionRatio"] = round_half_up(a->ratio, 3);
    }
    if (const auto& i = report.impressions) {
      j["pageLoadImpressions"] = i->page_load_impressions;
      j["visibleImpressions"] = i->visible_impressions;
      j["impressionReductionPercent"] = round_half_up(i->reduction_percent, 2);
      j["clicks"] = i->clicks;
      j["ctrPageLoad"] = i->ctr_page_load ? nlohmann::ordered_json(*i->ctr_page_load)
                                          : nlohmann::ordered_json(nullptr);
      j["ctrVisible"] = i->ctr_visible ? nlohmann::ordered_json(*i->ctr_visible)
                                       : nlohmann::ordered_json(nullptr);
    }
    out << j.dump(2) << '\n';
    return;
  }
  out << "metric,value\n";
  if (const auto& a = report.attention) {
    out << "pageLoadAttentionSeconds," << a->page_load_seconds << '\n'
        << "pingAttentionSeconds," << a->ping_seconds << '\n'
        << "attentionRatio," << num(round_half_up(a->ratio, 3), "%.3f") << '\n';
  }
  if (const auto& i = report.impressions) {
    out << "pageLoadImpressions," << i->page_load_impressions << '\n'
        << "visibleImpressions," << i->visible_impressions << '\n'
        << "impressionReductionPercent," << num(round_half_up(i->reduction_percent))
        << '\n'
        << "clicks," << i->clicks << '\n'
        << "ctrPageLoad," << (i->ctr_page_load ? num(*i->ctr_page_load) : "") << '\n'
        << "ctrVisible," << (i->ctr_visible ? num(*i->ctr_visible) : "") << '\n';
  }
}

}  // namespace engage::miner
