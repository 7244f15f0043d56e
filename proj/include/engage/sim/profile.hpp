// SPDX-License-Identifier: Apache-2.0
// profile.hpp
// Behaviour profiles for synthetic sessions and listing-page geometry.
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

namespace engage::sim {

// Log-normal parameterised by its median; sigma == 0 gives the median.
struct LogNormal {
  double median = 1.0;
  double sigma = 0.0;
};

struct IntRange {
  std::int64_t min = 0;
  std::int64_t max = 0;
};

// Half-open vertical pixel interval [top, bottom).
struct PixelSpan {
  std::int64_t top = 0;
  std::int64_t bottom = 0;
};

struct ListingLayout {
  std::vector<PixelSpan> slots;  // slot i holds the i-th listed item
  std::int64_t document_height = 0;

  // Throws Error(kInvalidLayout).
  void validate() const;
};

// header, then `items` rows of `item_height`, then footer.
ListingLayout grid_layout(std::size_t items, std::int64_t header_height,
                          std::int64_t item_height, std::int64_t footer_height);

// Slots whose [top, bottom) intersects the viewport
// [scroll_top, scroll_top + screen_height].
std::vector<std::size_t> visible_slots(const ListingLayout& layout,
                                       std::int64_t scroll_top,
                                       std::int64_t screen_height);

struct SessionProfile {
  std::string name = "human";
  double weight = 1.0;  // share inside a population
  bool is_bot = false;

  LogNormal active_burst_seconds{20.0, 0.5};
  LogNormal idle_gap_seconds{30.0, 0.8};
  // Every page ends with at least this much idle before the next load.
  std::int64_t min_idle_gap_seconds = 10;
  double pages_per_session_mean = 3.0;  // geometric, >= 1
  double bursts_per_page_mean = 2.0;    // geometric, >= 1
  // Chance that an active-second event is a scroll.
  double scroll_propensity = 0.4;
  // 0: scroll depth and dwell are independent; 1: both follow item appeal.
  double engagement_scroll_coupling = 0.0;
  // Gap between consecutive events inside a burst, uniform in [1, max].
  // Values <= 5 leave no 5 s interval of a burst without an event.
  std::int64_t max_event_spacing_seconds = 3;

  IntRange document_height{2000, 8000};
  IntRange screen_height{600, 1000};
  IntRange screen_width{360, 1440};

  std::size_t catalog_size = 200;

  double listing_share = 0.0;              // chance a page is a listing
  double listing_scroll_probability = 0.5;  // chance a listing is scrolled
  double listing_click_through = 0.5;       // chance a listing leads to a click
  ListingLayout listing_layout = grid_layout(12, 200, 250, 300);

  // Throws Error(kInvalidProfile).
  void validate() const;
};

struct Population {
  std::vector<SessionProfile> profiles;

  // Throws Error(kInvalidProfile) when empty or any profile is invalid.
  void validate() const;
  const SessionProfile& pick(double unit) const;  // unit in [0, 1)
};

SessionProfile profile_from_json(const nlohmann::json& j);
nlohmann::json profile_to_json(const SessionProfile& profile);

// A file holds one profile object or {"profiles": [ ... ]}.
Population load_population(const std::filesystem::path& path);

// "human" and "bot"; anything else throws Error(kInvalidProfile).
Population builtin_population(const std::string& name);

}  // namespace engage::sim
