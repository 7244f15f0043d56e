// SPDX-License-Identifier: Apache-2.0
// simulate.hpp
// Population runs: many independent sessions, each replayed through both
// measurement methods, merged into one event log.
#pragma once

#include <cstdint>
#include <vector>

#include "engage/event.hpp"
#include "engage/pinging.hpp"
#include "engage/sim/profile.hpp"
#include "engage/sim/replay.hpp"
#include "engage/sim/timeline.hpp"

namespace engage::sim {

struct SimulationConfig {
  Population population;
  std::size_t sessions = 100;
  std::uint64_t seed = 7;
  std::int64_t start_time = 1459535879;
  std::int64_t session_spacing_seconds = 37;  // between session starts
};

struct SimulatedSession {
  DomEventTimeline timeline;
  std::vector<pinging::Emission> emissions;
  PageLoadReplay page_load;
  std::vector<Event> clicks;
};

// Session `index` of the run; independent of every other index.
SimulatedSession simulate_session(const SimulationConfig& config, std::size_t index);

std::vector<SimulatedSession> simulate(const SimulationConfig& config);

// Page loads, clicks and collector emissions of the given sessions, stably
// ordered by timestamp.
std::vector<Event> session_log(const SimulatedSession& session);
std::vector<Event> simulation_log(const std::vector<SimulatedSession>& sessions);

}  // namespace engage::sim
