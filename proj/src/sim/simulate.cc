// SPDX-License-Identifier: Apache-2.0
#include "engage/sim/simulate.hpp"

#include <algorithm>
#include <cstdio>

#include "engage/sim/rng.hpp"

namespace engage::sim {

namespace {

std::string session_ip(std::size_t index, bool bot) {
  char buf[32];
  if (bot) {
    std::snprintf(buf, sizeof(buf), "198.51.%zu.%zu", 100 + (index >> 8) % 100,
                  index & 0xFF);
  } else {
    std::snprintf(buf, sizeof(buf), "10.%zu.%zu.%zu", (index >> 16) & 0xFF,
                  (index >> 8) & 0xFF, index & 0xFF);
  }
  return buf;
}

void sort_by_time(std::vector<Event>& events) {
  std::stable_sort(events.begin(), events.end(),
                   [](const Event& a, const Event& b) { return a.timestamp < b.timestamp; });
}

}  // namespace

SimulatedSession simulate_session(const SimulationConfig& config, std::size_t index) {
  config.population.validate();
  const std::uint64_t seed = session_seed(config.seed, index);
  const double unit = static_cast<double>(splitmix64(seed) >> 11) * 0x1.0p-53;
  const SessionProfile& profile = config.population.pick(unit);

  char entity[32];
  std::snprintf(entity, sizeof(entity), "u%06zu", index);
  SessionContext ctx{entity, session_ip(index, profile.is_bot),
                     config.start_time +
                         static_cast<std::int64_t>(index) * config.session_spacing_seconds};

  SimulatedSession s;
  s.timeline = generate_session(profile, seed, ctx);
  s.emissions = run_pinging(s.timeline);
  s.page_load = run_pageload(s.timeline);
  s.clicks = click_events(s.timeline);
  return s;
}

std::vector<SimulatedSession> simulate(const SimulationConfig& config) {
  config.population.validate();
  std::vector<SimulatedSession> out;
  out.reserve(config.sessions);
  for (std::size_t i = 0; i < config.sessions; ++i) {
    out.push_back(simulate_session(config, i));
  }
  return out;
}

std::vector<Event> session_log(const SimulatedSession& session) {
  std::vector<Event> log;
  log.insert(log.end(), session.page_load.page_loads.begin(),
             session.page_load.page_loads.end());
  log.insert(log.end(), session.clicks.begin(), session.clicks.end());
  for (const auto& e : session.emissions) log.push_back(pinging::to_event(e));
  sort_by_time(log);
  return log;
}

std::vector<Event> simulation_log(const std::vector<SimulatedSession>& sessions) {
  std::vector<Event> log;
  for (const auto& s : sessions) {
    auto part = session_log(s);
    log.insert(log.end(), std::make_move_iterator(part.begin()),
               std::make_move_iterator(part.end()));
  }
  sort_by_time(log);
  return log;
}

}  // namespace engage::sim
