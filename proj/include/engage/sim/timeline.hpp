// SPDX-License-Identifier: Apache-2.0
// timeline.hpp
// Synthetic browsing sessions: page loads plus the DOM events a collector
// would observe on each page.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "engage/event.hpp"
#include "engage/sim/profile.hpp"

namespace engage::sim {

enum class PageKind { kItem, kListing };

struct PageView {
  std::string page_id;
  PageKind kind = PageKind::kItem;
  std::int64_t load_time = 0;
  std::int64_t end_time = 0;  // next load, or session end for the last page
  std::int64_t document_height = 0;
  std::int64_t screen_height = 0;
  std::int64_t screen_width = 0;
  std::vector<std::string> listed_items;  // listing pages, one per layout slot
  bool clicked_from_listing = false;      // item opened from a listing entry
};

struct TimelineEvent {
  std::int64_t timestamp = 0;
  std::size_t page = 0;  // index into DomEventTimeline::pages
  DomEvent name = DomEvent::kMouseMove;
  std::optional<ScrollSample> scroll;
};

struct DomEventTimeline {
  std::string entity_id;
  std::string ip;
  std::string session_id;
  std::string profile;
  bool is_bot = false;
  std::vector<PageView> pages;
  std::vector<TimelineEvent> events;  // non-decreasing timestamps
  ListingLayout layout;               // geometry of every listing page

  SessionIdentity identity_for(const PageView& page) const;
};

struct SessionContext {
  std::string entity_id;  // empty: derived from the seed
  std::string ip;         // empty: derived from the seed
  std::int64_t start_time = 1459535879;
};

// Deterministic in (profile, seed, context). Humans alternate active bursts
// and idle gaps; the last page ends with a beforeunload. Bots load pages and
// emit no DOM events. Throws Error(kInvalidProfile).
DomEventTimeline generate_session(const SessionProfile& profile,
                                  std::uint64_t seed,
                                  const SessionContext& context = {});

// Catalog item identifier and its fixed appeal in [0, 1).
std::string item_id(std::size_t index);
double item_appeal(std::size_t index);

}  // namespace engage::sim
