// SPDX-License-Identifier: Apache-2.0
#include "engage/miner/features.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <set>
#include <tuple>

#include "engage/error.hpp"

namespace engage::miner {

std::int64_t attention_span(std::span<const EngagementReport> reports) {
  std::int64_t buckets = 0;
  for (const auto& r : reports) {
    if (r.buckets.empty() || r.buckets.size() > kMaxBucketsPerReport) {
      throw Error(Errc::kInvariantViolation, "properties.report",
                  "length " + std::to_string(r.buckets.size()) +
                      " outside [1, 3]");
    }
    buckets += static_cast<std::int64_t>(r.buckets.size());
  }
  return buckets * kSecondsPerBucket;
}

double scrolled(std::int64_t screen_height, std::int64_t max_scroll_top,
                std::int64_t document_height,
                std::optional<std::int64_t> content_height) {
  if (screen_height <= 0)
    throw Error(Errc::kNegativeInput, "screenHeight", "must be positive");
  if (max_scroll_top < 0)
    throw Error(Errc::kNegativeInput, "maxScrollTop", "must be >= 0");
  const std::int64_t height = content_height.value_or(document_height);
  if (height <= 0) {
    throw Error(Errc::kNonPositiveDocumentHeight,
                content_height ? "contentHeight" : "documentHeight",
                "must be positive");
  }
  std::int64_t total = screen_height + max_scroll_top;
  if (total > height) total = height;
  return (static_cast<double>(total) / static_cast<double>(height)) * 100.0;
}

std::optional<ScrollSample> report_scroll(const EngagementReport& report) {
  std::optional<ScrollSample> out;
  for (const auto& bucket : report.buckets) {
    const auto& s = bucket.scroll();
    if (!s) continue;
    const std::int64_t top = out ? std::max(out->scroll_top, s->scroll_top)
                                 : s->scroll_top;
    out = *s;
    out->scroll_top = top;
  }
  return out;
}

double avg_scroll_depth(std::span<const EngagementReport> reports) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& r : reports) {
    auto s = report_scroll(r);
    if (!s) continue;
    sum += scrolled(s->screen_height, s->scroll_top, s->document_height);
    ++n;
  }
  if (n == 0) {
    throw Error(Errc::kNoScrollData, "properties.report",
                "no report carries a scroll sample");
  }
  return sum / static_cast<double>(n);
}

double ctr(std::int64_t clicks, std::int64_t visible_impressions) {
  if (visible_impressions <= 0) {
    throw Error(Errc::kZeroImpressions, "numVisibleImpressions",
                "CTR needs at least one impression");
  }
  if (clicks < 0) throw Error(Errc::kNegativeInput, "numClicks", "must be >= 0");
  // hundredths of a percent: floor(clicks * 10000 / n + 1/2)
  const auto c = static_cast<unsigned long long>(clicks);
  const auto n = static_cast<unsigned long long>(visible_impressions);
  const unsigned long long centi = (2 * c * 10000ULL + n) / (2 * n);
  return static_cast<double>(centi) / 100.0;
}

double round_half_up(double value, int decimals) {
  const double scale = std::pow(10.0, decimals);
  return std::round(value * scale) / scale;
}

namespace {

void add_error(FeatureTable& table, const std::string& item) {
  auto& f = table[item];
  f.item_id = item;
  ++f.errors;
}

ItemFeatures& row(FeatureTable& table, const std::string& item) {
  auto& f = table[item];
  f.item_id = item;
  return f;
}

}  // namespace

FeatureTable item_stats(std::span<const Event> events) {
  FeatureTable table;
  std::map<std::string, std::vector<EngagementReport>> reports;

  for (const auto& e : events) {
    try {
      if (e.event_type == event_type::kEngagementReport) {
        EngagementReport r = engagement_report_from(e);
        const std::int64_t seconds = attention_span(std::span(&r, 1));
        auto& f = row(table, e.target_entity_id);
        f.attention_seconds += seconds;
        f.attention_by_user[e.entity_id] += seconds;
        ++f.engagement_reports;
        reports[e.target_entity_id].push_back(std::move(r));
      } else if (e.event_type == event_type::kVisibleImpressionReport) {
        for (const auto& id : visible_impression_report_from(e).viewed_items) {
          ++row(table, id).visible_impressions;
        }
      } else if (e.event_type == event_type::kClick) {
        ++row(table, e.target_entity_id).clicks;
      } else if (e.event_type == event_type::kPageLoad) {
        auto it = e.properties.find(kListedItemsKey);
        if (it == e.properties.end()) continue;
        if (!it->is_array()) {
          throw Error(Errc::kSchemaViolation, "properties.listedItems",
                      "must be an array");
        }
        for (const auto& id : *it) {
          if (!id.is_string()) {
            throw Error(Errc::kSchemaViolation, "properties.listedItems",
                        "must hold strings");
          }
          ++row(table, id.get<std::string>()).page_load_impressions;
        }
      }
    } catch (const Error&) {
      add_error(table, e.target_entity_id);
    }
  }

  for (auto& [item, f] : table) {
    auto it = reports.find(item);
    if (it != reports.end()) {
      try {
        f.avg_scroll_depth_percent = avg_scroll_depth(it->second);
      } catch (const Error& err) {
        if (err.code() != Errc::kNoScrollData) ++f.errors;
      }
    }
    if (f.visible_impressions > 0) f.ctr_percent = ctr(f.clicks, f.visible_impressions);
  }
  return table;
}

std::vector<Event> dedup_events(std::span<const Event> events) {
  using Key = std::tuple<std::string, std::string, std::int64_t, std::string>;
  std::map<Key, std::vector<const Event*>> kept_by_key;
  std::vector<Event> out;
  out.reserve(events.size());
  for (const auto& e : events) {
    auto& kept = kept_by_key[Key{e.entity_id, e.target_entity_id, e.timestamp,
                                 e.event_type}];
    const bool duplicate = std::any_of(
        kept.begin(), kept.end(), [&](const Event* k) { return *k == e; });
    if (duplicate) continue;
    kept.push_back(&e);
    out.push_back(e);
  }
  return out;
}

double fleet_mean_attention(const FeatureTable& table) {
  std::int64_t total = 0;
  std::size_t items = 0;
  for (const auto& [id, f] : table) {
    if (f.engagement_reports == 0) continue;
    total += f.attention_seconds;
    ++items;
  }
  if (items == 0) {
    throw Error(Errc::kInsufficientData, "attentionSeconds",
                "no item has engagement reports");
  }
  return static_cast<double>(total) / static_cast<double>(items);
}

namespace {

std::string fixed2(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f", round_half_up(v, 2));
  return buf;
}

std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

void write_feature_table(std::ostream& out, const FeatureTable& table,
                         TableFormat format) {
  if (format == TableFormat::kCsv) {
    out << "itemId,attentionSeconds,avgScrollDepthPercent,pageLoadImpressions,"
           "visibleImpressions,clicks,ctrPercent\n";
    for (const auto& [id, f] : table) {
      out << csv_cell(id) << ',' << f.attention_seconds << ','
          << (f.avg_scroll_depth_percent ? fixed2(*f.avg_scroll_depth_percent) : "")
          << ',' << f.page_load_impressions << ',' << f.visible_impressions
          << ',' << f.clicks << ','
          << (f.ctr_percent ? fixed2(*f.ctr_percent) : "") << '\n';
    }
    return;
  }
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& [id, f] : table) {
    nlohmann::ordered_json r;
    r["itemId"] = id;
    r["attentionSeconds"] = f.attention_seconds;
    r["avgScrollDepthPercent"] =
        f.avg_scroll_depth_percent
            ? nlohmann::ordered_json(round_half_up(*f.avg_scroll_depth_percent))
            : nlohmann::ordered_json(nullptr);
    r["pageLoadImpressions"] = f.page_load_impressions;
    r["visibleImpressions"] = f.visible_impressions;
    r["clicks"] = f.clicks;
    r["ctrPercent"] = f.ctr_percent ? nlohmann::ordered_json(*f.ctr_percent)
                                    : nlohmann::ordered_json(nullptr);
    rows.push_back(std::move(r));
  }
  out << rows.dump(2) << '\n';
}

}  // namespace engage::miner
