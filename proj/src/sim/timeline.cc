// SPDX-License-Identifier: Apache-2.0
#include "engage/sim/timeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

#include "engage/sim/rng.hpp"

namespace engage::sim {

namespace {

using Rng = std::mt19937_64;

std::string hex64(std::uint64_t v) {
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

double uniform01(Rng& rng) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

std::int64_t uniform_int(Rng& rng, std::int64_t lo, std::int64_t hi) {
  return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
}

std::int64_t uniform_in(Rng& rng, const IntRange& r) {
  return uniform_int(rng, r.min, r.max);
}

double draw(Rng& rng, const LogNormal& d) {
  if (d.median <= 0.0) return 0.0;
  if (d.sigma <= 0.0) return d.median;
  return std::lognormal_distribution<double>(std::log(d.median), d.sigma)(rng);
}

std::int64_t draw_seconds(Rng& rng, const LogNormal& d, std::int64_t floor_s) {
  return std::max<std::int64_t>(floor_s, std::llround(draw(rng, d)));
}

// 1 + geometric, mean `mean` (>= 1).
std::int64_t draw_count(Rng& rng, double mean) {
  if (mean <= 1.0) return 1;
  return 1 + std::geometric_distribution<std::int64_t>(1.0 / mean)(rng);
}

DomEvent activity_marker(Rng& rng) {
  const double u = uniform01(rng);
  if (u < 0.60) return DomEvent::kMouseMove;
  if (u < 0.75) return DomEvent::kKeyDown;
  if (u < 0.85) return DomEvent::kVisibilityChange;
  if (u < 0.92) return DomEvent::kFocus;
  return DomEvent::kResize;
}

// Event times of one burst [start, start + duration).
std::vector<std::int64_t> burst_times(Rng& rng, std::int64_t start,
                                      std::int64_t duration,
                                      std::int64_t max_spacing) {
  std::vector<std::int64_t> times;
  for (std::int64_t t = start; t < start + duration;
       t += uniform_int(rng, 1, max_spacing)) {
    times.push_back(t);
  }
  return times;
}

struct PageBuilder {
  DomEventTimeline& tl;
  std::size_t page;

  void add(std::int64_t t, DomEvent name, std::optional<ScrollSample> s = {}) {
    tl.events.push_back(TimelineEvent{t, page, name, s});
  }
};

// Returns the page end time.
std::int64_t human_item_page(const SessionProfile& prof, Rng& rng,
                             std::size_t item_index, PageView& pv,
                             PageBuilder out) {
  const double c = prof.engagement_scroll_coupling;
  const double w = c * item_appeal(item_index) + (1.0 - c) * uniform01(rng);
  const double scale = 1.0 + c * (2.0 * w - 1.0);

  const std::int64_t bursts = draw_count(rng, prof.bursts_per_page_mean * scale);
  std::vector<std::int64_t> durations;
  std::int64_t planned_active = 0;
  for (std::int64_t b = 0; b < bursts; ++b) {
    const std::int64_t d = std::max<std::int64_t>(
        1, std::llround(draw(rng, prof.active_burst_seconds) * scale));
    durations.push_back(d);
    planned_active += d;
  }
  const double depth = c * w + (1.0 - c) * uniform01(rng);
  const std::int64_t scrollable = std::max<std::int64_t>(
      0, pv.document_height - pv.screen_height);
  const auto target_top = static_cast<std::int64_t>(
      std::llround(depth * static_cast<double>(scrollable)));

  out.add(pv.load_time, DomEvent::kDomContentLoaded);
  std::int64_t cursor = pv.load_time;
  std::int64_t active_before = 0;
  for (std::int64_t b = 0; b < bursts; ++b) {
    if (b > 0) cursor += draw_seconds(rng, prof.idle_gap_seconds, 0);
    const std::int64_t d = durations[static_cast<std::size_t>(b)];
    for (std::int64_t t : burst_times(rng, cursor, d, prof.max_event_spacing_seconds)) {
      if (uniform01(rng) < prof.scroll_propensity) {
        const double progress =
            std::min(1.0, static_cast<double>(active_before + (t - cursor)) /
                              static_cast<double>(planned_active));
        const auto top = static_cast<std::int64_t>(
            std::llround(progress * static_cast<double>(target_top)));
        out.add(t, DomEvent::kScroll,
                ScrollSample{pv.document_height, pv.screen_height,
                             pv.screen_width, top});
      } else {
        out.add(t, activity_marker(rng));
      }
    }
    active_before += d;
    cursor += d;
  }
  cursor += draw_seconds(rng, prof.idle_gap_seconds, prof.min_idle_gap_seconds);
  return cursor;
}

// Returns the page end time; `seen` receives the listed items that entered
// the viewport.
std::int64_t human_listing_page(const SessionProfile& prof, Rng& rng,
                                const PageView& pv, PageBuilder out,
                                std::vector<std::string>& seen) {
  const ListingLayout& layout = prof.listing_layout;
  std::vector<bool> visible(layout.slots.size(), false);
  auto mark_visible = [&](std::int64_t top) {
    for (std::size_t i : visible_slots(layout, top, pv.screen_height)) visible[i] = true;
  };

  out.add(pv.load_time, DomEvent::kDomContentLoaded);
  mark_visible(0);
  std::int64_t cursor = pv.load_time;
  if (uniform01(rng) < prof.listing_scroll_probability) {
    const std::int64_t scrollable =
        std::max<std::int64_t>(0, pv.document_height - pv.screen_height);
    const auto max_top = static_cast<std::int64_t>(
        std::llround(uniform01(rng) * static_cast<double>(scrollable)));
    const std::int64_t d = std::max<std::int64_t>(
        1, std::llround(draw(rng, prof.active_burst_seconds)));
    const auto times =
        burst_times(rng, cursor + 1, d, prof.max_event_spacing_seconds);
    for (std::size_t k = 0; k < times.size(); ++k) {
      const auto top = static_cast<std::int64_t>(std::llround(
          static_cast<double>(max_top) * static_cast<double>(k + 1) /
          static_cast<double>(times.size())));
      out.add(times[k], DomEvent::kScroll,
              ScrollSample{pv.document_height, pv.screen_height, pv.screen_width, top});
      mark_visible(top);
    }
    cursor += 1 + d;
  }
  cursor += draw_seconds(rng, prof.idle_gap_seconds, prof.min_idle_gap_seconds);
  for (std::size_t i = 0; i < visible.size(); ++i) {
    if (visible[i]) seen.push_back(pv.listed_items[i]);
  }
  return cursor;
}

}  // namespace

std::string item_id(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "item-%05zu", index);
  return buf;
}

double item_appeal(std::size_t index) {
  return static_cast<double>(splitmix64(index ^ 0xA11CE5EEDULL) >> 11) *
         0x1.0p-53;
}

SessionIdentity DomEventTimeline::identity_for(const PageView& page) const {
  return SessionIdentity{entity_id, "user", page.page_id,
                         page.kind == PageKind::kListing ? "listing" : "item", ip};
}

DomEventTimeline generate_session(const SessionProfile& prof, std::uint64_t seed,
                                  const SessionContext& ctx) {
  prof.validate();
  Rng rng(seed);

  DomEventTimeline tl;
  tl.entity_id = ctx.entity_id.empty() ? "u" + hex64(seed) : ctx.entity_id;
  if (ctx.ip.empty()) {
    const std::uint64_t h = splitmix64(seed);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%s.%u.%u.%u", prof.is_bot ? "198" : "10",
                  static_cast<unsigned>((h >> 8) & 0xFF),
                  static_cast<unsigned>((h >> 16) & 0xFF),
                  static_cast<unsigned>((h >> 24) & 0xFF));
    tl.ip = buf;
  } else {
    tl.ip = ctx.ip;
  }
  tl.session_id = hex64(seed);
  tl.profile = prof.name;
  tl.is_bot = prof.is_bot;
  tl.layout = prof.listing_layout;

  const std::int64_t page_count = draw_count(rng, prof.pages_per_session_mean);
  std::int64_t t = ctx.start_time;
  std::vector<std::string> prev_seen;

  for (std::int64_t p = 0; p < page_count; ++p) {
    PageView pv;
    pv.load_time = t;
    pv.screen_height = uniform_in(rng, prof.screen_height);
    pv.screen_width = uniform_in(rng, prof.screen_width);

    std::size_t item_index = 0;
    if (!prev_seen.empty() && uniform01(rng) < prof.listing_click_through) {
      const auto& picked = prev_seen[static_cast<std::size_t>(
          uniform_int(rng, 0, static_cast<std::int64_t>(prev_seen.size()) - 1))];
      pv.page_id = picked;
      item_index = static_cast<std::size_t>(std::stoul(picked.substr(5)));
      pv.clicked_from_listing = true;
    } else if (uniform01(rng) < prof.listing_share) {
      pv.kind = PageKind::kListing;
      const auto offset = static_cast<std::size_t>(
          uniform_int(rng, 0, static_cast<std::int64_t>(prof.catalog_size) - 1));
      pv.page_id = "listing-" + std::to_string(offset);
      for (std::size_t i = 0; i < prof.listing_layout.slots.size(); ++i) {
        pv.listed_items.push_back(item_id((offset + i) % prof.catalog_size));
      }
    } else {
      item_index = static_cast<std::size_t>(
          uniform_int(rng, 0, static_cast<std::int64_t>(prof.catalog_size) - 1));
      pv.page_id = item_id(item_index);
    }
    pv.document_height = pv.kind == PageKind::kListing
                             ? prof.listing_layout.document_height
                             : uniform_in(rng, prof.document_height);
    prev_seen.clear();

    const std::size_t index = tl.pages.size();
    tl.pages.push_back(pv);
    PageBuilder out{tl, index};
    std::int64_t end;
    if (prof.is_bot) {
      end = t + draw_seconds(rng, prof.idle_gap_seconds,
                             std::max<std::int64_t>(1, prof.min_idle_gap_seconds));
    } else if (pv.kind == PageKind::kListing) {
      end = human_listing_page(prof, rng, tl.pages[index], out, prev_seen);
    } else {
      end = human_item_page(prof, rng, item_index, tl.pages[index], out);
    }
    if (end <= t) end = t + 1;
    tl.pages[index].end_time = end;
    t = end;
  }

  if (!prof.is_bot && !tl.pages.empty()) {
    tl.events.push_back(TimelineEvent{tl.pages.back().end_time, tl.pages.size() - 1,
                                      DomEvent::kBeforeUnload, std::nullopt});
  }
  return tl;
}

}  // namespace engage::sim
