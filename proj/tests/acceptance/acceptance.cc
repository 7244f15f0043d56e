// SPDX-License-Identifier: Apache-2.0
// Acceptance run: one PASS/FAIL line per primary criterion. Exits non-zero
// when any criterion fails.
#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <mutex>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <unistd.h>

#include "engage/codec.hpp"
#include "engage/error.hpp"
#include "engage/ingest/event_store.hpp"
#include "engage/ingest/http_server.hpp"
#include "engage/ingest/service.hpp"
#include "engage/miner/comparison.hpp"
#include "engage/miner/correlation.hpp"
#include "engage/miner/features.hpp"
#include "engage/sim/replay.hpp"
#include "engage/sim/simulate.hpp"
#include "engage/sim/wire.hpp"
#include "httplib.h"

using namespace engage;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

const fs::path kFixtures = ENGAGE_FIXTURE_DIR;
const fs::path kProfiles = ENGAGE_PROFILE_DIR;
constexpr std::int64_t kT0 = 1459535879;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "[failed: " << what << "] ";
    }
  }
};

int g_failures = 0;

void criterion(const std::string& name, const std::function<void(Outcome&)>& body) {
  Outcome o;
  const auto start = Clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail << "[exception: " << e.what() << "] ";
  }
  const double secs = std::chrono::duration<double>(Clock::now() - start).count();
  if (!o.pass) ++g_failures;
  std::printf("%s %s: %s(%.2fs)\n", o.pass ? "PASS" : "FAIL", name.c_str(),
              o.detail.str().c_str(), secs);
  std::fflush(stdout);
}

sim::Population shipped(const std::string& name) {
  return sim::load_population(kProfiles / (name + ".json"));
}

std::int64_t ping_attention(const std::vector<pinging::Emission>& emissions) {
  std::int64_t s = 0;
  for (const auto& e : emissions)
    if (const auto* r = std::get_if<EngagementReport>(&e))
      s += 5 * static_cast<std::int64_t>(r->buckets.size());
  return s;
}

// Distinct 5 s intervals (from each item page's load) that hold a DOM event.
std::vector<std::int64_t> brute_occupancy(const sim::DomEventTimeline& tl) {
  std::vector<std::set<std::int64_t>> seen(tl.pages.size());
  for (const auto& e : tl.events) {
    const auto& page = tl.pages[e.page];
    if (page.kind == sim::PageKind::kItem) seen[e.page].insert((e.timestamp - page.load_time) / 5);
  }
  std::vector<std::int64_t> out;
  for (const auto& s : seen) out.push_back(5 * static_cast<std::int64_t>(s.size()));
  return out;
}

std::int64_t sum(const std::vector<std::int64_t>& v) {
  std::int64_t s = 0;
  for (auto x : v) s += x;
  return s;
}

// Pixel rows [top, bottom) and [st, st + sh] share at least one row.
bool overlaps(const sim::PixelSpan& s, std::int64_t st, std::int64_t sh) {
  return std::max(s.top, st) <= std::min(s.bottom - 1, st + sh);
}

std::int64_t brute_visible(const sim::DomEventTimeline& tl) {
  std::int64_t n = 0;
  for (std::size_t p = 0; p < tl.pages.size(); ++p) {
    const auto& page = tl.pages[p];
    if (page.kind != sim::PageKind::kListing) continue;
    std::vector<std::int64_t> tops{0};
    for (const auto& e : tl.events)
      if (e.page == p && e.scroll) tops.push_back(e.scroll->scroll_top);
    for (const auto& slot : tl.layout.slots) {
      if (std::any_of(tops.begin(), tops.end(),
                      [&](std::int64_t st) { return overlaps(slot, st, page.screen_height); }))
        ++n;
    }
  }
  return n;
}

sim::SessionProfile random_item_profile(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  sim::SessionProfile p;
  p.name = "random";
  p.active_burst_seconds = {2.0 + 60.0 * u(rng), 1.2 * u(rng)};
  p.idle_gap_seconds = {100.0 * u(rng), 1.5 * u(rng)};
  p.min_idle_gap_seconds = static_cast<std::int64_t>(rng() % 30);
  p.pages_per_session_mean = 1.0 + 5.0 * u(rng);
  p.bursts_per_page_mean = 1.0 + 4.0 * u(rng);
  p.scroll_propensity = u(rng);
  p.engagement_scroll_coupling = u(rng);
  p.max_event_spacing_seconds = 1 + static_cast<std::int64_t>(rng() % 12);
  return p;
}

std::vector<Event> scan_fixture(const std::string& name) {
  auto r = ingest::scan_log_file(kFixtures / name);
  if (!r.corrupt.empty()) throw std::runtime_error("corrupt fixture " + name);
  return r.events;
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() / ("engage-accept-" + tag + "-" + std::to_string(::getpid()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

class SlowStore : public ingest::EventStore {
 public:
  SlowStore(ingest::EventStore& inner, std::chrono::milliseconds delay)
      : inner_(inner), delay_(delay) {}
  void append(std::span<const Event> events) override {
    std::this_thread::sleep_for(delay_);
    inner_.append(events);
  }
  ingest::ScanResult scan(const ingest::ScanFilter& f) const override { return inner_.scan(f); }
  std::size_t record_count() const override { return inner_.record_count(); }

 private:
  ingest::EventStore& inner_;
  std::chrono::milliseconds delay_;
};

// A running service on an ephemeral port.
struct LiveService {
  ingest::IngestionService service;
  ingest::HttpFrontend http;
  LiveService(ingest::EventStore& store, ingest::ServiceConfig cfg = {})
      : service(cfg, store), http(service, ingest::HttpConfig{"127.0.0.1", 0, {}, 16}) {
    http.bind();
    service.start();
    http.start();
  }
  void drain() {
    http.stop();
    service.stop();
  }
  ~LiveService() { drain(); }
};

double percentile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  const auto idx = static_cast<std::size_t>(std::ceil(q * static_cast<double>(v.size()))) - 1;
  return v[std::min(idx, v.size() - 1)];
}

struct PipelineRun {
  std::size_t stored = 0;
  bool fifo = true;
  std::size_t non_202 = 0;
  std::vector<double> ack_ms;
};

PipelineRun run_pipeline(std::chrono::milliseconds store_delay) {
  constexpr int kProducers = 8, kEventsPerProducer = 1250, kBatch = 5;
  TempDir dir("pipeline-" + std::to_string(store_delay.count()));
  ingest::LogEventStore disk(dir.path);
  SlowStore store(disk, store_delay);
  PipelineRun run;
  std::mutex mu;
  {
    LiveService live(store);
    std::vector<std::thread> producers;
    for (int p = 0; p < kProducers; ++p) {
      producers.emplace_back([&, p] {
        httplib::Client client("127.0.0.1", live.http.port());
        const httplib::Headers headers{{"User-Agent", "Mozilla/5.0"},
                                       {"X-Forwarded-For", "10.8.0." + std::to_string(p + 1)}};
        std::vector<double> local;
        std::size_t bad = 0;
        for (int i = 0; i < kEventsPerProducer; i += kBatch) {
          std::string body;
          for (int k = i; k < i + kBatch; ++k) {
            Event e{"producer-" + std::to_string(p), "user", "item-" + std::to_string(k % 97),
                    "item", "click", kT0 + k, "", Properties::object()};
            e.properties["producer"] = p;
            e.properties["seq"] = k;
            body += encode_event(e) + "\n";
          }
          const auto t = Clock::now();
          auto res = client.Post("/v1/events?collector=1", headers, body, "application/x-ndjson");
          local.push_back(std::chrono::duration<double, std::milli>(Clock::now() - t).count());
          if (!res || res->status != 202) ++bad;
        }
        std::lock_guard lk(mu);
        run.ack_ms.insert(run.ack_ms.end(), local.begin(), local.end());
        run.non_202 += bad;
      });
    }
    for (auto& t : producers) t.join();
    live.drain();
  }
  const auto events = disk.scan().events;
  run.stored = events.size();
  std::map<int, int> last;
  for (const auto& e : events) {
    const int p = e.properties.at("producer").get<int>();
    const int seq = e.properties.at("seq").get<int>();
    auto it = last.find(p);
    if (it != last.end() && seq <= it->second) run.fifo = false;
    last[p] = seq;
  }
  return run;
}

}  // namespace

int main() {
  criterion("attention-oracle", [](Outcome& o) {
    // 1000 timelines from random item-page profiles and the shipped ones.
    std::mt19937_64 rng(20160401);
    std::vector<sim::SessionProfile> fixed{shipped("idle_heavy").profiles[0],
                                           shipped("coupled").profiles[0],
                                           sim::builtin_population("human").profiles[0]};
    const auto start = Clock::now();
    std::size_t mismatches = 0, intervals = 0;
    for (int i = 0; i < 1000; ++i) {
      const auto prof = i % 2 == 0 ? random_item_profile(rng) : fixed[(i / 2) % fixed.size()];
      const auto tl = sim::generate_session(prof, rng());
      const auto got = ping_attention(sim::run_pinging(tl));
      const auto want = sum(brute_occupancy(tl));
      intervals += static_cast<std::size_t>(want / 5);
      if (got != want) ++mismatches;
    }
    const double secs = std::chrono::duration<double>(Clock::now() - start).count();
    o.detail << "1000 timelines, " << intervals << " occupied intervals, " << mismatches
             << " mismatches, " << secs << "s ";
    o.require(mismatches == 0, "exact equality");
    o.require(secs < 5.0, "runtime < 5s");
  });

  criterion("scrolled-conformance", [](Outcome& o) {
    o.require(miner::scrolled(100, 300, 5000) == 400.0 / 5000.0 * 100.0, "(100,300,5000)");
    o.require(miner::scrolled(100, 500, 5000) == 600.0 / 5000.0 * 100.0, "(100,500,5000)");
    o.require(miner::scrolled(800, 4500, 5000) == 100.0, "(800,4500,5000)");
    o.require(std::abs(miner::scrolled(100, 300, 5000) - 8.0) < 1e-12, "8.0");
    o.require(std::abs(miner::scrolled(100, 500, 5000) - 12.0) < 1e-12, "12.0");
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<std::int64_t> h(1, 50000), top(0, 100000);
    std::size_t bad = 0;
    for (int i = 0; i < 10000; ++i) {
      const auto sh = h(rng), dh = h(rng), a = top(rng), b = top(rng);
      const double lo = miner::scrolled(sh, std::min(a, b), dh);
      const double hi = miner::scrolled(sh, std::max(a, b), dh);
      if (!(lo > 0.0 && lo <= 100.0 && hi > 0.0 && hi <= 100.0 && lo <= hi)) ++bad;
    }
    o.detail << "8.0, 12.0, 100.0 exact; 10000 sweeps, " << bad << " violations ";
    o.require(bad == 0, "range and monotonicity");
  });

  criterion("ctr-arithmetic", [](Outcome& o) {
    const struct {
      std::int64_t c, n;
      const char* want;
    } rows[] = {{119, 506, "23.52"}, {35, 506, "6.92"}, {119, 2024, "5.88"}, {35, 2024, "1.73"}};
    for (const auto& r : rows) {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%.2f", miner::ctr(r.c, r.n));
      o.detail << r.c << "/" << r.n << "=" << buf << " ";
      o.require(std::string(buf) == r.want, r.want);
      // Integer oracle: round-half-up of 10000*c/n in hundredths.
      const std::int64_t hundredths = (20000 * r.c + r.n) / (2 * r.n);
      o.require(miner::ctr(r.c, r.n) == static_cast<double>(hundredths) / 100.0, "integer oracle");
    }
  });

  criterion("aggregate-arithmetic", [](Outcome& o) {
    const auto att = miner::compare_methods(scan_fixture("attention_totals.ndjson"));
    const auto imp = miner::compare_methods(scan_fixture("impression_counts.ndjson"));
    o.require(att.attention.has_value(), "attention section");
    o.require(imp.impressions.has_value(), "impression section");
    if (!att.attention || !imp.impressions) return;
    o.require(att.attention->page_load_seconds == 76008 && att.attention->ping_seconds == 21805,
              "fixture totals");
    o.require(std::abs(att.attention->ratio - 3.48) <= 0.01, "ratio 3.48 +- 0.01");
    o.require(imp.impressions->page_load_impressions == 26490 &&
                  imp.impressions->visible_impressions == 17650,
              "fixture counts");
    o.require(std::abs(imp.impressions->reduction_percent - 33.37) <= 0.01,
              "reduction 33.37 +- 0.01");

    // 195745 s over 6041 items as 39149 five-second buckets.
    constexpr std::int64_t kItems = 6041, kBuckets = 195745 / 5;
    std::vector<Event> log;
    for (std::int64_t i = 0; i < kItems; ++i) {
      std::int64_t n = kBuckets / kItems + (i < kBuckets % kItems ? 1 : 0);
      for (int k = 0; n > 0; ++k) {
        const auto len = std::min<std::int64_t>(3, n);
        EngagementReport r;
        r.identity = SessionIdentity{"u" + std::to_string(k), "user", std::to_string(i), "item",
                                     "10.0.0.1"};
        r.timestamp = kT0 + 15 * k;
        IntervalBucket b;
        b.mark(DomEvent::kMouseMove);
        r.buckets.assign(static_cast<std::size_t>(len), b);
        log.push_back(to_event(r));
        n -= len;
      }
    }
    const double fleet = miner::fleet_mean_attention(miner::item_stats(log));
    o.detail << "ratio " << att.attention->ratio << ", reduction "
             << imp.impressions->reduction_percent << "%, fleet mean " << fleet << "s ";
    o.require(std::abs(fleet - 32.40) <= 0.01, "fleet 32.40 +- 0.01");
  });

  criterion("method-direction", [](Outcome& o) {
    std::vector<std::pair<std::string, sim::Population>> humans{
        {"human", sim::builtin_population("human")},
        {"idle_heavy", shipped("idle_heavy")},
        {"mixed_listing", shipped("mixed_listing")},
        {"coupled", shipped("coupled")}};
    for (const auto& p : shipped("mixed_bots").profiles)
      if (!p.is_bot) humans.push_back({"mixed_bots/" + p.name, sim::Population{{p}}});
    std::size_t sessions = 0, violations = 0;
    for (const auto& [name, pop] : humans) {
      const auto run = sim::simulate(sim::SimulationConfig{pop, 300, 7});
      std::int64_t pl_total = 0, ping_total = 0;
      for (const auto& s : run) {
        if (s.timeline.pages.size() < 2) continue;
        ++sessions;
        // Pages the page-load method can measure: those with a successor.
        const auto occ = brute_occupancy(s.timeline);
        std::int64_t pl = 0, ping = 0;
        for (std::size_t p = 0; p + 1 < s.timeline.pages.size(); ++p) {
          pl += s.page_load.dwell_seconds[p];
          ping += occ[p];
        }
        if (pl < ping) ++violations;
        pl_total += pl;
        ping_total += ping;
      }
      if (ping_total > 0 && pl_total < ping_total) ++violations;
    }
    const auto idle = sim::simulate(sim::SimulationConfig{shipped("idle_heavy"), 500, 7});
    const auto cmp = miner::compare_methods(sim::simulation_log(idle));
    const double ratio = cmp.attention ? cmp.attention->ratio : 0.0;
    o.detail << sessions << " multi-page sessions, " << violations
             << " violations; idle_heavy seed 7 ratio " << ratio << " ";
    o.require(violations == 0, "page-load >= pinging");
    o.require(ratio >= 2.5 && ratio <= 4.5, "ratio in [2.5, 4.5]");
  });

  criterion("viewability-direction", [](Outcome& o) {
    const auto run = sim::simulate(sim::SimulationConfig{shipped("mixed_listing"), 500, 7});
    std::int64_t listed = 0, visible = 0, brute = 0, listings = 0;
    std::size_t violations = 0;
    for (const auto& s : run) {
      const auto x = sim::run_listing_exposure(s.timeline, s.timeline.layout);
      std::int64_t v = 0;
      for (const auto& r : x.reports) v += static_cast<std::int64_t>(r.viewed_items.size());
      if (v > x.page_load_impressions) ++violations;
      for (const auto& p : s.timeline.pages) listings += p.kind == sim::PageKind::kListing;
      listed += x.page_load_impressions;
      visible += v;
      brute += brute_visible(s.timeline);
    }
    const auto cmp = miner::compare_methods(sim::simulation_log(run));
    const double reduction = cmp.impressions ? cmp.impressions->reduction_percent : -1.0;
    const double brute_reduction =
        100.0 * static_cast<double>(listed - brute) / static_cast<double>(listed);
    o.detail << listings << " listing views, page-load " << listed << ", visible " << visible
             << ", brute-force " << brute << ", reduction " << reduction << "% ";
    o.require(violations == 0, "visible <= page-load per timeline");
    o.require(visible == brute, "matches brute-force geometry");
    o.require(cmp.impressions && cmp.impressions->visible_impressions == brute &&
                  cmp.impressions->page_load_impressions == listed,
              "mined counts match");
    o.require(std::abs(reduction - brute_reduction) < 1e-9, "mined reduction");
    o.require(reduction >= 42.0 && reduction <= 48.0, "reduction in [42, 48]");
  });

  criterion("suppression-boundedness", [](Outcome& o) {
    std::size_t reports = 0, out_of_range = 0, stale = 0;
    std::vector<sim::SimulatedSession> wire_sessions;
    for (const auto* name : {"idle_heavy", "mixed_listing", "coupled", "mixed_bots"}) {
      const auto run = sim::simulate(sim::SimulationConfig{shipped(name), 300, 7});
      for (const auto& s : run) {
        std::vector<std::int64_t> times;
        for (const auto& e : s.timeline.events) times.push_back(e.timestamp);
        for (const auto& e : s.emissions) {
          const auto* r = std::get_if<EngagementReport>(&e);
          if (!r) continue;
          ++reports;
          if (r->buckets.empty() || r->buckets.size() > 3) ++out_of_range;
          // A report needs a DOM event in the 15 s it covers.
          const bool fresh = std::any_of(times.begin(), times.end(), [&](std::int64_t t) {
            return t <= r->timestamp && t >= r->timestamp - 15;
          });
          if (!fresh) ++stale;
        }
      }
      if (std::string(name) == "idle_heavy")
        wire_sessions.assign(run.begin(), run.begin() + 40);
    }

    // One page: 10 s active, 290 s idle, 10 s active, then navigation.
    sim::DomEventTimeline tl;
    tl.entity_id = "idle";
    tl.ip = "10.7.0.1";
    tl.session_id = "idle";
    sim::PageView a;
    a.page_id = "item-1";
    a.load_time = kT0;
    a.end_time = kT0 + 400;
    a.document_height = 3000;
    a.screen_height = 800;
    a.screen_width = 1200;
    sim::PageView b = a;
    b.page_id = "item-2";
    b.load_time = kT0 + 400;
    b.end_time = kT0 + 401;
    tl.pages = {a, b};
    for (std::int64_t t = 0; t < 10; ++t)
      tl.events.push_back({kT0 + t, 0, DomEvent::kMouseMove, std::nullopt});
    for (std::int64_t t = 300; t < 310; ++t)
      tl.events.push_back({kT0 + t, 0, DomEvent::kKeyDown, std::nullopt});
    sim::SimulatedSession crafted;
    crafted.timeline = tl;
    crafted.emissions = sim::run_pinging(tl);
    crafted.page_load = sim::run_pageload(tl);
    wire_sessions.push_back(crafted);

    std::size_t expected = 0;
    for (const auto& s : wire_sessions) expected += s.emissions.size();
    TempDir dir("wire-idle");
    ingest::LogEventStore store(dir.path);
    sim::WireStats stats;
    std::size_t served = 0;
    {
      LiveService live(store);
      stats = sim::send_sessions(wire_sessions, sim::WireTarget{"127.0.0.1", live.http.port()});
      live.drain();
      const auto s = live.service.stats();
      served = s.accepted + s.malformed + s.bot_rejected + s.backpressure;
    }
    o.detail << reports << " reports, " << out_of_range << " out of range, " << stale
             << " without activity; crafted idle page sent " << crafted.emissions.size()
             << " requests over 80 flush windows; wire requests " << stats.requests
             << " for " << expected << " emissions ";
    o.require(out_of_range == 0, "lengths in [1, 3]");
    o.require(stale == 0, "idle windows emit nothing");
    o.require(crafted.emissions.size() == 2, "two requests for two active stretches");
    o.require(stats.requests == expected && served == expected && stats.failed == 0,
              "one request per emission");
  });

  criterion("bot-filtering", [](Outcome& o) {
    const auto run = sim::simulate(sim::SimulationConfig{shipped("mixed_bots"), 200, 7});
    std::set<std::string> bot_ips, bot_users;
    std::size_t bots = 0;
    for (const auto& s : run) {
      if (!s.timeline.is_bot) continue;
      ++bots;
      bot_ips.insert(s.timeline.ip);
      bot_users.insert(s.timeline.entity_id);
    }
    TempDir dir("bots");
    ingest::LogEventStore store(dir.path);
    sim::WireStats stats;
    {
      ingest::ServiceConfig cfg;
      cfg.classifier.user_agent_denylist = {"bot", "crawler", "spider"};
      LiveService live(store, cfg);
      stats = sim::send_sessions(run, sim::WireTarget{"127.0.0.1", live.http.port()});
      live.drain();
    }
    const auto events = store.scan().events;
    std::size_t bot_reports = 0, human_reports = 0;
    std::vector<Event> bot_events;
    for (const auto& e : events) {
      const bool bot = bot_ips.count(e.ip) || bot_users.count(e.entity_id);
      if (bot) bot_events.push_back(e);
      if (e.event_type == "engagement_report") ++(bot ? bot_reports : human_reports);
    }
    std::int64_t bot_attention = 0;
    for (const auto& [id, f] : miner::item_stats(bot_events)) bot_attention += f.attention_seconds;
    o.detail << bots << "/" << run.size() << " bot sessions, " << stats.requests
             << " requests, " << stats.rejected << " rejected; store holds " << human_reports
             << " human and " << bot_reports << " bot reports, bot attention " << bot_attention
             << "s ";
    o.require(bots * 10 >= run.size() * 4 && bots * 10 <= run.size() * 6, "about half bots");
    o.require(bot_reports == 0, "zero bot engagement reports");
    o.require(bot_attention == 0, "zero bot attention");
    o.require(human_reports > 0, "human traffic stored");
  });

  criterion("pipeline-conservation", [](Outcome& o) {
    const auto fast = run_pipeline(std::chrono::milliseconds(0));
    const auto slow = run_pipeline(std::chrono::milliseconds(100));
    const double fast_med = percentile(fast.ack_ms, 0.5), slow_med = percentile(slow.ack_ms, 0.5);
    const double slow_p99 = percentile(slow.ack_ms, 0.99);
    o.detail << "stored " << fast.stored << " / " << slow.stored << " (fast / 100ms store), ack"
             << " median " << fast_med << "ms vs " << slow_med << "ms, slow p99 " << slow_p99
             << "ms ";
    o.require(fast.stored == 10000 && slow.stored == 10000, "exactly 10000 records");
    o.require(fast.non_202 == 0 && slow.non_202 == 0, "all requests accepted");
    o.require(fast.fifo && slow.fifo, "FIFO per producer");
    o.require(slow_p99 < 100.0, "ack p99 below the store delay");
    o.require(std::abs(slow_med - fast_med) < 10.0, "median ack within 10ms");
  });

  criterion("correlation-report", [](Outcome& o) {
    const auto run = sim::simulate(sim::SimulationConfig{shipped("coupled"), 3000, 7});
    const auto table = miner::item_stats(sim::simulation_log(run));
    const auto corr = miner::attention_scroll_correlation(table);

    // Independent two-pass computation in long double from the raw pairs.
    std::vector<long double> x, y;
    for (const auto& [id, f] : table) {
      if (f.engagement_reports == 0 || !f.avg_scroll_depth_percent) continue;
      x.push_back(static_cast<long double>(f.attention_seconds));
      y.push_back(static_cast<long double>(*f.avg_scroll_depth_percent));
    }
    long double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      mx += x[i];
      my += y[i];
    }
    mx /= static_cast<long double>(x.size());
    my /= static_cast<long double>(y.size());
    long double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      sxy += (x[i] - mx) * (y[i] - my);
      sxx += (x[i] - mx) * (x[i] - mx);
      syy += (y[i] - my) * (y[i] - my);
    }
    const double direct = static_cast<double>(sxy / std::sqrt(sxx * syy));

    std::size_t dips = 0;
    for (std::size_t i = 1; i < corr.curve.size(); ++i) {
      if (corr.curve[i - 1].percentile >= 15.0 &&
          corr.curve[i].mean_scroll_depth < corr.curve[i - 1].mean_scroll_depth)
        ++dips;
    }
    o.detail << corr.items << " items, pearson " << corr.pearson << " (direct " << direct
             << "), " << corr.curve.size() << " bins, " << dips << " dips above p15 ";
    o.require(corr.pearson > 0.5, "pearson > 0.5");
    o.require(corr.curve.size() == 20, "20 bins");
    o.require(dips == 0, "non-decreasing above p15");
    o.require(std::abs(corr.pearson - direct) <= 1e-9, "matches direct computation");
  });

  std::printf("%s: %d failing criteria\n", g_failures == 0 ? "ALL PASS" : "FAILURES",
              g_failures);
  return g_failures == 0 ? 0 : 1;
}
