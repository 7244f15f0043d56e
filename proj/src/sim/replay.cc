// SPDX-License-Identifier: Apache-2.0
#include "engage/sim/replay.hpp"

#include "engage/error.hpp"

namespace engage::sim {

namespace {

std::vector<std::string> uncovered(const ListingLayout& layout, const PageView& page,
                                   std::int64_t scroll_top) {
  std::vector<std::string> ids;
  for (std::size_t slot : visible_slots(layout, scroll_top, page.screen_height)) {
    ids.push_back(page.listed_items[slot]);
  }
  return ids;
}

std::vector<pinging::Emission> replay(const DomEventTimeline& tl,
                                      const ListingLayout& layout,
                                      bool listings_only) {
  std::vector<pinging::Emission> out;
  // Crawlers never run the collector script.
  if (tl.is_bot) return out;
  auto sink = [&out](const pinging::Emission& e) { out.push_back(e); };

  std::size_t next_event = 0;
  for (std::size_t p = 0; p < tl.pages.size(); ++p) {
    const PageView& page = tl.pages[p];
    const bool listing = page.kind == PageKind::kListing;
    auto first = next_event;
    while (next_event < tl.events.size() && tl.events[next_event].page == p) ++next_event;
    if (listings_only && !listing) continue;

    pinging::PingingCollector collector(tl.identity_for(page), page.load_time, sink);
    if (listing) {
      const auto ids = uncovered(layout, page, 0);
      collector.record_visible_items(ids);
    }
    for (auto i = first; i < next_event; ++i) {
      const TimelineEvent& ev = tl.events[i];
      if (ev.name == DomEvent::kBeforeUnload) {
        // Listing pages report visibility only, so the unload marker is not
        // recorded as engagement there.
        if (listing) {
          collector.close(ev.timestamp);
        } else {
          collector.unload(ev.timestamp);
        }
        break;
      }
      if (!listing) {
        collector.observe(ev.timestamp, ev.name, ev.scroll);
      } else if (ev.scroll) {
        collector.advance_to(ev.timestamp);
        const auto ids = uncovered(layout, page, ev.scroll->scroll_top);
        collector.record_visible_items(ids);
      } else {
        collector.advance_to(ev.timestamp);
      }
    }
    if (!collector.closed()) collector.close(page.end_time);
  }
  return out;
}

}  // namespace

std::vector<pinging::Emission> run_pinging(const DomEventTimeline& timeline) {
  return replay(timeline, timeline.layout, false);
}

PageLoadReplay run_pageload(const DomEventTimeline& timeline) {
  PageLoadReplay r;
  const auto& pages = timeline.pages;
  for (std::size_t p = 0; p < pages.size(); ++p) {
    const PageView& page = pages[p];
    const SessionIdentity id = timeline.identity_for(page);
    Event e;
    e.entity_id = id.entity_id;
    e.entity_type = id.entity_type;
    e.target_entity_id = id.target_entity_id;
    e.target_entity_type = id.target_entity_type;
    e.event_type = std::string(event_type::kPageLoad);
    e.timestamp = page.load_time;
    e.ip = id.ip;
    e.properties[std::string(kSessionProperty)] = timeline.session_id;
    if (page.kind == PageKind::kListing) {
      e.properties[std::string(kListedItemsProperty)] = page.listed_items;
    }
    r.page_loads.push_back(std::move(e));
    r.dwell_seconds.push_back(p + 1 < pages.size()
                                  ? pages[p + 1].load_time - page.load_time
                                  : 0);
  }
  return r;
}

ListingExposure run_listing_exposure(const DomEventTimeline& timeline,
                                     const ListingLayout& layout) {
  layout.validate();
  ListingExposure exposure;
  for (const auto& page : timeline.pages) {
    if (page.kind != PageKind::kListing) continue;
    if (page.listed_items.size() != layout.slots.size()) {
      throw Error(Errc::kInvalidLayout, "slots",
                  "layout has " + std::to_string(layout.slots.size()) +
                      " slots, page " + page.page_id + " lists " +
                      std::to_string(page.listed_items.size()) + " items");
    }
    exposure.page_load_impressions += static_cast<std::int64_t>(page.listed_items.size());
  }
  for (auto& e : replay(timeline, layout, true)) {
    if (auto* v = std::get_if<VisibleImpressionReport>(&e)) {
      exposure.reports.push_back(std::move(*v));
    }
  }
  return exposure;
}

std::vector<Event> click_events(const DomEventTimeline& timeline) {
  std::vector<Event> clicks;
  for (const auto& page : timeline.pages) {
    if (!page.clicked_from_listing) continue;
    const SessionIdentity id = timeline.identity_for(page);
    Event e;
    e.entity_id = id.entity_id;
    e.entity_type = id.entity_type;
    e.target_entity_id = id.target_entity_id;
    e.target_entity_type = id.target_entity_type;
    e.event_type = std::string(event_type::kClick);
    e.timestamp = page.load_time;
    e.ip = id.ip;
    e.properties[std::string(kSessionProperty)] = timeline.session_id;
    clicks.push_back(std::move(e));
  }
  return clicks;
}

}  // namespace engage::sim
