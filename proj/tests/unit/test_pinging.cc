// SPDX-License-Identifier: Apache-2.0
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "engage/codec.hpp"
#include "engage/pinging.hpp"
#include "test_support.hpp"

using namespace engage;
using namespace engage::pinging;

namespace {

constexpr std::int64_t kLoad = 1459535879;

SessionIdentity ident() { return SessionIdentity{"u1", "user", "item-1", "item", "10.0.0.1"}; }

struct Recorder {
  std::vector<Emission> out;
  Transport transport() {
    return [this](const Emission& e) { out.push_back(e); };
  }
  std::vector<EngagementReport> engagement() const {
    std::vector<EngagementReport> r;
    for (const auto& e : out)
      if (auto* p = std::get_if<EngagementReport>(&e)) r.push_back(*p);
    return r;
  }
  std::vector<VisibleImpressionReport> visibility() const {
    std::vector<VisibleImpressionReport> r;
    for (const auto& e : out)
      if (auto* p = std::get_if<VisibleImpressionReport>(&e)) r.push_back(*p);
    return r;
  }
};

IntervalBucket marked(DomEvent name) {
  IntervalBucket b;
  b.mark(name);
  return b;
}

// A random page view: timestamped DOM events, ended by unload or close.
struct Step {
  std::int64_t t;
  DomEvent name;
  std::optional<ScrollSample> sample;
};

struct PageScript {
  std::int64_t load;
  std::vector<Step> steps;
  std::int64_t end;
  bool unload;
};

PageScript random_script(std::mt19937_64& rng) {
  auto between = [&](std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
  };
  PageScript s;
  s.load = kLoad + between(0, 100000);
  std::int64_t t = s.load + between(0, 4);
  const auto n = between(0, 60);
  for (std::int64_t i = 0; i < n; ++i) {
    const auto gap = between(0, 9) == 0 ? between(20, 400) : between(0, 6);
    t += gap;
    DomEvent name = kAllDomEvents[static_cast<std::size_t>(between(0, 7))];
    if (name == DomEvent::kBeforeUnload) name = DomEvent::kKeyDown;
    std::optional<ScrollSample> sample;
    if (name == DomEvent::kScroll)
      sample = ScrollSample{between(1, 9000), between(1, 1000), between(1, 2000),
                            between(0, 9000)};
    s.steps.push_back({t, name, sample});
  }
  s.end = t + between(0, 120);
  s.unload = between(0, 1) == 0;
  return s;
}

std::vector<Emission> play(const PageScript& s, std::size_t* max_pending = nullptr) {
  Recorder rec;
  PingingCollector c(ident(), s.load, rec.transport());
  std::size_t peak = 0;
  for (const auto& st : s.steps) {
    c.observe(st.t, st.name, st.sample);
    peak = std::max(peak, c.pending_buckets().size());
  }
  if (s.unload) {
    c.observe(s.end, DomEvent::kBeforeUnload);
  } else {
    c.close(s.end);
  }
  if (max_pending) *max_pending = peak;
  return rec.out;
}

// Brute-force interval scan: distinct 5 s intervals (relative to load) that
// contain at least one DOM event, the unload marker included.
std::set<std::int64_t> occupied_intervals(const PageScript& s) {
  std::set<std::int64_t> iv;
  for (const auto& st : s.steps) iv.insert((st.t - s.load) / 5);
  if (s.unload) iv.insert((s.end - s.load) / 5);
  return iv;
}

}  // namespace

TEST_SUITE("pinging-protocol") {

TEST_CASE("record_dom_event") {
  PingingCollector c(ident(), kLoad);
  SUBCASE("mousemove into an empty bucket") {
    c.record_dom_event(DomEvent::kMouseMove);
    CHECK(c.current_bucket() == marked(DomEvent::kMouseMove));
  }
  SUBCASE("scroll keeps the maximum") {
    c.record_dom_event(DomEvent::kScroll, ScrollSample{5000, 100, 980, 300});
    c.record_dom_event(DomEvent::kScroll, ScrollSample{5000, 100, 980, 500});
    REQUIRE(c.current_bucket().scroll());
    CHECK(c.current_bucket().size() == 1);
    CHECK(c.current_bucket().scroll()->scroll_top == 500);
  }
  SUBCASE("markers are idempotent") {
    c.record_dom_event(DomEvent::kMouseMove);
    c.record_dom_event(DomEvent::kMouseMove);
    CHECK(c.current_bucket() == marked(DomEvent::kMouseMove));
  }
  SUBCASE("wire names") {
    c.record_dom_event("DOMContentLoaded");
    c.record_dom_event("visibilitychange");
    CHECK(c.current_bucket().size() == 2);
    CHECK_ERRC_FIELD(c.record_dom_event("click"), Errc::kUnknownEventName, "click");
    CHECK_ERRC(c.record_dom_event("scroll"), Errc::kSchemaViolation);
    CHECK_ERRC(c.record_dom_event(DomEvent::kScroll, ScrollSample{10, 0, 10, 0}),
               Errc::kInvariantViolation);
  }
}

TEST_CASE("tick") {
  PingingCollector c(ident(), kLoad);
  SUBCASE("non-empty bucket moves to pending") {
    c.record_dom_event(DomEvent::kMouseMove);
    c.tick(kLoad + 5);
    CHECK(c.pending_buckets().size() == 1);
    CHECK(c.current_bucket().empty());
    CHECK(c.last_tick_at() == kLoad + 5);
  }
  SUBCASE("empty bucket leaves pending unchanged") {
    c.tick(kLoad + 5);
    CHECK(c.pending_buckets().empty());
  }
  SUBCASE("three active intervals fill pending") {
    for (int k = 1; k <= 3; ++k) {
      c.record_dom_event(DomEvent::kKeyDown);
      c.tick(kLoad + 5 * k);
    }
    CHECK(c.pending_buckets().size() == 3);
    CHECK_ERRC_FIELD(c.tick(kLoad + 20), Errc::kInvariantViolation, "pendingBuckets");
  }
  SUBCASE("clock regression") {
    c.tick(kLoad + 5);
    CHECK_ERRC(c.tick(kLoad + 5), Errc::kClockRegression);
    CHECK_ERRC(c.tick(kLoad + 1), Errc::kClockRegression);
  }
}

TEST_CASE("flush") {
  Recorder rec;
  PingingCollector c(ident(), kLoad, rec.transport());
  SUBCASE("three buckets -> report of length 3") {
    const DomEvent names[] = {DomEvent::kMouseMove, DomEvent::kFocus, DomEvent::kResize};
    for (int k = 0; k < 3; ++k) {
      c.record_dom_event(names[k]);
      c.tick(kLoad + 5 * (k + 1));
    }
    auto r = c.flush(kLoad + 15);
    REQUIRE(r);
    CHECK(r->buckets.size() == 3);
    CHECK(r->buckets[0] == marked(DomEvent::kMouseMove));
    CHECK(r->buckets[2] == marked(DomEvent::kResize));
    CHECK(r->timestamp == kLoad + 15);
    CHECK(c.pending_buckets().empty());
    CHECK(rec.engagement().size() == 1);
  }
  SUBCASE("nothing pending -> suppressed") {
    for (int k = 1; k <= 3; ++k) c.tick(kLoad + 5 * k);
    CHECK_FALSE(c.flush(kLoad + 15));
    CHECK(rec.out.empty());
    CHECK(c.last_flush_at() == kLoad + 15);
  }
  SUBCASE("one bucket -> report of length 1") {
    c.tick(kLoad + 5);
    c.record_dom_event(DomEvent::kMouseMove);
    c.tick(kLoad + 10);
    c.tick(kLoad + 15);
    auto r = c.flush(kLoad + 15);
    REQUIRE(r);
    CHECK(r->buckets.size() == 1);
  }
  SUBCASE("clock regression") {
    CHECK_ERRC(c.flush(kLoad), Errc::kClockRegression);
  }
}

TEST_CASE("visible items") {
  Recorder rec;
  PingingCollector c(SessionIdentity{"u1", "user", "listing-1", "listing", ""}, kLoad,
                     rec.transport());
  const std::vector<std::string> ab{"A", "B"}, a{"A"}, bc{"B", "C"}, just_c{"C"};
  SUBCASE("union with dedup") {
    c.record_visible_items(ab);
    CHECK(c.viewed_items() == ab);
    c.record_visible_items(a);
    CHECK(c.viewed_items() == ab);
    c.record_visible_items(bc);
    CHECK(c.viewed_items() == std::vector<std::string>{"A", "B", "C"});
  }
  SUBCASE("flush at a boundary") {
    c.record_visible_items(ab);
    auto r = c.flush_visibility(kLoad + 15, false);
    REQUIRE(r);
    CHECK(r->viewed_items == ab);
    CHECK(c.viewed_items().empty());
    CHECK_FALSE(c.flush_visibility(kLoad + 30, false));
  }
  SUBCASE("unload between boundaries flushes immediately") {
    c.advance_to(kLoad + 16);
    c.record_visible_items(just_c);
    c.unload(kLoad + 22);
    const auto v = rec.visibility();
    REQUIRE(v.size() == 1);
    CHECK(v[0].viewed_items == just_c);
    CHECK(v[0].timestamp == kLoad + 22);
  }
  SUBCASE("the driver flushes visibility on the 15 s cadence") {
    c.record_visible_items(ab);
    c.advance_to(kLoad + 14);
    CHECK(rec.out.empty());
    c.advance_to(kLoad + 15);
    REQUIRE(rec.visibility().size() == 1);
    CHECK(rec.visibility()[0].timestamp == kLoad + 15);
  }
  SUBCASE("an item is reported once per page view") {
    c.record_visible_items(ab);
    c.advance_to(kLoad + 15);
    c.record_visible_items(bc);
    c.advance_to(kLoad + 30);
    c.record_visible_items(ab);
    c.close(kLoad + 40);
    const auto v = rec.visibility();
    REQUIRE(v.size() == 2);
    CHECK(v[0].viewed_items == ab);
    CHECK(v[1].viewed_items == just_c);
  }
}

TEST_CASE("driver alignment and catch-up") {
  Recorder rec;
  PingingCollector c(ident(), kLoad, rec.transport());
  SUBCASE("boundary events belong to the interval they open") {
    c.observe(kLoad + 4, DomEvent::kMouseMove);
    c.observe(kLoad + 5, DomEvent::kMouseMove);
    CHECK(c.pending_buckets().size() == 1);
    c.observe(kLoad + 15, DomEvent::kKeyDown);
    const auto r = rec.engagement();
    REQUIRE(r.size() == 1);
    CHECK(r[0].timestamp == kLoad + 15);
    CHECK(r[0].buckets.size() == 2);
    CHECK(c.current_bucket() == marked(DomEvent::kKeyDown));
  }
  SUBCASE("first report no earlier than 15 s after load") {
    c.observe(kLoad, DomEvent::kDomContentLoaded);
    c.advance_to(kLoad + 14);
    CHECK(rec.out.empty());
    c.advance_to(kLoad + 15);
    CHECK(rec.out.size() == 1);
  }
  SUBCASE("a suspended host catches up in one step") {
    c.observe(kLoad + 1, DomEvent::kMouseMove);
    c.observe(kLoad + 7, DomEvent::kMouseMove);
    c.observe(kLoad + 10000, DomEvent::kKeyDown);
    const auto r = rec.engagement();
    REQUIRE(r.size() == 1);
    CHECK(r[0].buckets.size() == 2);
    CHECK(r[0].timestamp == kLoad + 15);
    CHECK(c.next_tick_at() == kLoad + 10005);
    CHECK(c.last_flush_at() == kLoad + 9990);
    c.close(kLoad + 10001);
    REQUIRE(rec.engagement().size() == 2);
    CHECK(rec.engagement()[1].buckets.size() == 1);
  }
  SUBCASE("idle page emits nothing") {
    c.observe(kLoad, DomEvent::kDomContentLoaded);
    c.advance_to(kLoad + 15);
    const std::size_t before = rec.out.size();
    c.advance_to(kLoad + 3600);
    c.close(kLoad + 3600);
    CHECK(rec.out.size() == before);
  }
  SUBCASE("clock regression") {
    c.advance_to(kLoad + 20);
    CHECK_ERRC(c.advance_to(kLoad + 19), Errc::kClockRegression);
  }
}

TEST_CASE("unload and close") {
  Recorder rec;
  PingingCollector c(ident(), kLoad, rec.transport());
  SUBCASE("beforeunload records and flushes pending plus the open bucket") {
    c.observe(kLoad + 2, DomEvent::kMouseMove);
    c.observe(kLoad + 7, DomEvent::kScroll, ScrollSample{5000, 100, 980, 300});
    c.observe(kLoad + 11, DomEvent::kBeforeUnload);
    const auto r = rec.engagement();
    REQUIRE(r.size() == 1);
    CHECK(r[0].timestamp == kLoad + 11);
    REQUIRE(r[0].buckets.size() == 3);
    CHECK(r[0].buckets[2].contains(DomEvent::kBeforeUnload));
    CHECK(c.closed());
    CHECK_ERRC(c.observe(kLoad + 12, DomEvent::kMouseMove), Errc::kCollectorClosed);
    CHECK_ERRC(c.tick(kLoad + 15), Errc::kCollectorClosed);
  }
  SUBCASE("navigation closes without a marker") {
    c.observe(kLoad + 2, DomEvent::kMouseMove);
    c.close(kLoad + 3);
    const auto r = rec.engagement();
    REQUIRE(r.size() == 1);
    REQUIRE(r[0].buckets.size() == 1);
    CHECK_FALSE(r[0].buckets[0].contains(DomEvent::kBeforeUnload));
  }
  SUBCASE("unload on a flush boundary") {
    for (int t = 0; t < 15; ++t) c.observe(kLoad + t, DomEvent::kMouseMove);
    c.unload(kLoad + 15);
    const auto r = rec.engagement();
    REQUIRE(r.size() == 2);
    CHECK(r[0].buckets.size() == 3);
    CHECK(r[1].buckets.size() == 1);
    CHECK(r[1].buckets[0] == marked(DomEvent::kBeforeUnload));
  }
}

TEST_CASE("properties over random page views") {
  std::mt19937_64 rng(20160401);
  for (int run = 0; run < 2000; ++run) {
    const PageScript s = random_script(rng);
    std::size_t peak = 0;
    const auto out = play(s, &peak);
    CAPTURE(run);

    // Boundedness and suppression.
    std::int64_t buckets = 0;
    for (const auto& e : out) {
      const auto& r = std::get<EngagementReport>(e);
      CHECK(r.buckets.size() >= 1);
      CHECK(r.buckets.size() <= kMaxBucketsPerReport);
      for (const auto& b : r.buckets) CHECK_FALSE(b.empty());
      buckets += static_cast<std::int64_t>(r.buckets.size());
    }
    CHECK(peak <= kMaxBucketsPerReport);

    // Conservation against the brute-force interval scan.
    CHECK(buckets == static_cast<std::int64_t>(occupied_intervals(s).size()));

    // Determinism, byte for byte.
    const auto again = play(s);
    REQUIRE(again.size() == out.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
      CHECK(encode_event(to_event(out[i])) == encode_event(to_event(again[i])));
    }
  }
}

TEST_CASE("no empty window produces a report") {
  // Activity only in [0, 15) and [300, 315): the windows in between are idle.
  Recorder rec;
  PingingCollector c(ident(), kLoad, rec.transport());
  for (int t = 0; t < 15; ++t) c.observe(kLoad + t, DomEvent::kMouseMove);
  for (int t = 300; t < 315; ++t) c.observe(kLoad + t, DomEvent::kMouseMove);
  c.close(kLoad + 315);
  const auto r = rec.engagement();
  REQUIRE(r.size() == 2);
  CHECK(r[0].timestamp == kLoad + 15);
  CHECK(r[1].timestamp == kLoad + 315);
}

}
