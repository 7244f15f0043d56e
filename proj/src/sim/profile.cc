// SPDX-License-Identifier: Apache-2.0
#include "engage/sim/profile.hpp"

#include <fstream>

#include "engage/error.hpp"

namespace engage::sim {

namespace {

[[noreturn]] void bad_profile(const std::string& field, const std::string& why) {
  throw Error(Errc::kInvalidProfile, field, why);
}

void check_probability(double p, const char* field) {
  if (!(p >= 0.0 && p <= 1.0)) bad_profile(field, "must be in [0, 1]");
}

void check_lognormal(const LogNormal& d, const char* field) {
  if (!(d.median >= 0.0) || !(d.sigma >= 0.0)) {
    bad_profile(field, "median and sigma must be >= 0");
  }
}

void check_range(const IntRange& r, const char* field, std::int64_t lowest) {
  if (r.min < lowest || r.max < r.min) {
    bad_profile(field, "need " + std::to_string(lowest) + " <= min <= max");
  }
}

LogNormal lognormal_from(const nlohmann::json& j, const char* key,
                         LogNormal fallback) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  return LogNormal{v.value("median", fallback.median),
                   v.value("sigma", fallback.sigma)};
}

IntRange range_from(const nlohmann::json& j, const char* key, IntRange fallback) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  return IntRange{v.value("min", fallback.min), v.value("max", fallback.max)};
}

ListingLayout layout_from(const nlohmann::json& v) {
  if (v.contains("slots")) {
    ListingLayout layout;
    for (const auto& s : v.at("slots")) {
      layout.slots.push_back(PixelSpan{s.at(0).get<std::int64_t>(),
                                       s.at(1).get<std::int64_t>()});
    }
    layout.document_height = v.at("document_height").get<std::int64_t>();
    return layout;
  }
  return grid_layout(v.value("items", std::size_t{12}),
                     v.value("header_height", std::int64_t{200}),
                     v.value("item_height", std::int64_t{250}),
                     v.value("footer_height", std::int64_t{300}));
}

}  // namespace

void ListingLayout::validate() const {
  if (slots.empty()) throw Error(Errc::kInvalidLayout, "slots", "no item slots");
  for (std::size_t i = 0; i < slots.size(); ++i) {
    const auto& s = slots[i];
    if (s.top < 0 || s.bottom <= s.top || s.bottom > document_height) {
      throw Error(Errc::kInvalidLayout, "slots[" + std::to_string(i) + "]",
                  "need 0 <= top < bottom <= document_height");
    }
  }
}

ListingLayout grid_layout(std::size_t items, std::int64_t header_height,
                          std::int64_t item_height, std::int64_t footer_height) {
  ListingLayout layout;
  std::int64_t y = header_height;
  for (std::size_t i = 0; i < items; ++i) {
    layout.slots.push_back(PixelSpan{y, y + item_height});
    y += item_height;
  }
  layout.document_height = y + footer_height;
  return layout;
}

std::vector<std::size_t> visible_slots(const ListingLayout& layout,
                                       std::int64_t scroll_top,
                                       std::int64_t screen_height) {
  std::vector<std::size_t> out;
  const std::int64_t bottom = scroll_top + screen_height;
  for (std::size_t i = 0; i < layout.slots.size(); ++i) {
    const auto& s = layout.slots[i];
    if (s.top <= bottom && s.bottom > scroll_top) out.push_back(i);
  }
  return out;
}

void SessionProfile::validate() const {
  if (name.empty()) bad_profile("name", "must be non-empty");
  if (!(weight >= 0.0)) bad_profile("weight", "must be >= 0");
  check_lognormal(active_burst_seconds, "active_burst_seconds");
  check_lognormal(idle_gap_seconds, "idle_gap_seconds");
  if (min_idle_gap_seconds < 0) bad_profile("min_idle_gap_seconds", "must be >= 0");
  if (!(pages_per_session_mean >= 1.0))
    bad_profile("pages_per_session_mean", "must be >= 1");
  if (!(bursts_per_page_mean >= 1.0))
    bad_profile("bursts_per_page_mean", "must be >= 1");
  check_probability(scroll_propensity, "scroll_propensity");
  check_probability(engagement_scroll_coupling, "engagement_scroll_coupling");
  check_probability(listing_share, "listing_share");
  check_probability(listing_scroll_probability, "listing_scroll_probability");
  check_probability(listing_click_through, "listing_click_through");
  if (max_event_spacing_seconds < 1)
    bad_profile("max_event_spacing_seconds", "must be >= 1");
  check_range(document_height, "document_height", 1);
  check_range(screen_height, "screen_height", 1);
  check_range(screen_width, "screen_width", 1);
  if (catalog_size == 0) bad_profile("catalog_size", "must be >= 1");
  if (listing_share > 0.0) {
    try {
      listing_layout.validate();
    } catch (const Error& e) {
      bad_profile("listing_layout", e.what());
    }
  }
}

void Population::validate() const {
  if (profiles.empty()) bad_profile("profiles", "population is empty");
  double total = 0.0;
  for (const auto& p : profiles) {
    p.validate();
    total += p.weight;
  }
  if (!(total > 0.0)) bad_profile("weight", "weights sum to zero");
}

const SessionProfile& Population::pick(double unit) const {
  double total = 0.0;
  for (const auto& p : profiles) total += p.weight;
  double target = unit * total;
  for (const auto& p : profiles) {
    if (target < p.weight) return p;
    target -= p.weight;
  }
  return profiles.back();
}

SessionProfile profile_from_json(const nlohmann::json& j) {
  if (!j.is_object()) bad_profile("profile", "must be an object");
  SessionProfile p;
  try {
    p.name = j.value("name", p.name);
    p.weight = j.value("weight", p.weight);
    p.is_bot = j.value("is_bot", p.is_bot);
    p.active_burst_seconds =
        lognormal_from(j, "active_burst_seconds", p.active_burst_seconds);
    p.idle_gap_seconds = lognormal_from(j, "idle_gap_seconds", p.idle_gap_seconds);
    p.min_idle_gap_seconds = j.value("min_idle_gap_seconds", p.min_idle_gap_seconds);
    p.pages_per_session_mean =
        j.value("pages_per_session_mean", p.pages_per_session_mean);
    p.bursts_per_page_mean = j.value("bursts_per_page_mean", p.bursts_per_page_mean);
    p.scroll_propensity = j.value("scroll_propensity", p.scroll_propensity);
    p.engagement_scroll_coupling =
        j.value("engagement_scroll_coupling", p.engagement_scroll_coupling);
    p.max_event_spacing_seconds =
        j.value("max_event_spacing_seconds", p.max_event_spacing_seconds);
    p.document_height = range_from(j, "document_height", p.document_height);
    p.screen_height = range_from(j, "screen_height", p.screen_height);
    p.screen_width = range_from(j, "screen_width", p.screen_width);
    p.catalog_size = j.value("catalog_size", p.catalog_size);
    p.listing_share = j.value("listing_share", p.listing_share);
    p.listing_scroll_probability =
        j.value("listing_scroll_probability", p.listing_scroll_probability);
    p.listing_click_through = j.value("listing_click_through", p.listing_click_through);
    if (j.contains("listing_layout")) p.listing_layout = layout_from(j.at("listing_layout"));
  } catch (const nlohmann::json::exception& e) {
    bad_profile("profile", e.what());
  }
  p.validate();
  return p;
}

nlohmann::json profile_to_json(const SessionProfile& p) {
  nlohmann::json slots = nlohmann::json::array();
  for (const auto& s : p.listing_layout.slots) slots.push_back({s.top, s.bottom});
  return {
      {"name", p.name},
      {"weight", p.weight},
      {"is_bot", p.is_bot},
      {"active_burst_seconds",
       {{"median", p.active_burst_seconds.median},
        {"sigma", p.active_burst_seconds.sigma}}},
      {"idle_gap_seconds",
       {{"median", p.idle_gap_seconds.median}, {"sigma", p.idle_gap_seconds.sigma}}},
      {"min_idle_gap_seconds", p.min_idle_gap_seconds},
      {"pages_per_session_mean", p.pages_per_session_mean},
      {"bursts_per_page_mean", p.bursts_per_page_mean},
      {"scroll_propensity", p.scroll_propensity},
      {"engagement_scroll_coupling", p.engagement_scroll_coupling},
      {"max_event_spacing_seconds", p.max_event_spacing_seconds},
      {"document_height", {{"min", p.document_height.min}, {"max", p.document_height.max}}},
      {"screen_height", {{"min", p.screen_height.min}, {"max", p.screen_height.max}}},
      {"screen_width", {{"min", p.screen_width.min}, {"max", p.screen_width.max}}},
      {"catalog_size", p.catalog_size},
      {"listing_share", p.listing_share},
      {"listing_scroll_probability", p.listing_scroll_probability},
      {"listing_click_through", p.listing_click_through},
      {"listing_layout",
       {{"slots", slots}, {"document_height", p.listing_layout.document_height}}},
  };
}

Population load_population(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) bad_profile(path.string(), "cannot open profile file");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    bad_profile(path.string(), e.what());
  }
  Population pop;
  if (j.is_object() && j.contains("profiles")) {
    for (const auto& p : j.at("profiles")) pop.profiles.push_back(profile_from_json(p));
  } else {
    pop.profiles.push_back(profile_from_json(j));
  }
  pop.validate();
  return pop;
}

Population builtin_population(const std::string& name) {
  SessionProfile p;
  if (name == "human") {
    p.name = "human";
    p.listing_share = 0.25;
  } else if (name == "bot") {
    p.name = "bot";
    p.is_bot = true;
    p.idle_gap_seconds = LogNormal{4.0, 0.5};
    p.min_idle_gap_seconds = 1;
    p.pages_per_session_mean = 8.0;
    p.listing_share = 0.25;
  } else {
    bad_profile(name, "unknown built-in profile (expected human or bot)");
  }
  Population pop{{p}};
  pop.validate();
  return pop;
}

}  // namespace engage::sim
