// SPDX-License-Identifier: Apache-2.0
// wire.hpp
// Optional HTTP mode: ships simulated traffic to a running ingestion service
// the way browsers and crawlers would.
#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "engage/sim/simulate.hpp"

namespace engage::sim {

struct WireTarget {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string browser_user_agent =
      "Mozilla/5.0 (X11; Linux x86_64) AppleWebKit/537.36 (KHTML, like Gecko) "
      "Chrome/120.0 Safari/537.36";
  std::string crawler_user_agent = "Mozilla/5.0 (compatible; Googlebot/2.1)";
};

struct WireStats {
  std::size_t requests = 0;
  std::size_t accepted = 0;  // 202
  std::size_t rejected = 0;  // any other status
  std::size_t failed = 0;    // no response
};

// Human sessions POST one request per collector emission, flagged as coming
// from the collector script. Bot sessions POST a bare hit per page load and
// never send the flag. Requests carry the session ip in X-Forwarded-For.
WireStats send_sessions(const std::vector<SimulatedSession>& sessions,
                        const WireTarget& target);

}  // namespace engage::sim
