// SPDX-License-Identifier: Apache-2.0
// replay.hpp
// Replays a generated timeline through the two measurement methods: the
// pinging collector (one machine per page view) and the page-load method.
#pragma once

#include <cstdint>
#include <vector>

#include "engage/event.hpp"
#include "engage/pinging.hpp"
#include "engage/sim/timeline.hpp"

namespace engage::sim {

inline constexpr std::string_view kSessionProperty = "sessionId";
inline constexpr std::string_view kListedItemsProperty = "listedItems";

// Every emission of every page view, in emission order. Item pages feed DOM
// events to the machine; listing pages feed the items uncovered at load and
// at each scroll position. A page that ends by navigation is closed at the
// next load; the last page ends with its beforeunload.
std::vector<pinging::Emission> run_pinging(const DomEventTimeline& timeline);

struct PageLoadReplay {
  std::vector<Event> page_loads;          // one per page view
  std::vector<std::int64_t> dwell_seconds;  // next load - this load; last is 0
};

PageLoadReplay run_pageload(const DomEventTimeline& timeline);

struct ListingExposure {
  std::int64_t page_load_impressions = 0;  // laid-out items per listing load
  std::vector<VisibleImpressionReport> reports;
};

// Listing pages only, positioned with `layout`. Throws Error(kInvalidLayout)
// when the layout is invalid or its slot count differs from a page's items.
ListingExposure run_listing_exposure(const DomEventTimeline& timeline,
                                     const ListingLayout& layout);

// One click per item page opened from a listing entry, at that page's load.
std::vector<Event> click_events(const DomEventTimeline& timeline);

}  // namespace engage::sim
