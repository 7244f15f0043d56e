// SPDX-License-Identifier: Apache-2.0
#include "engage/sim/wire.hpp"

#include "engage/codec.hpp"
#include "httplib.h"

namespace engage::sim {

namespace {

void post(httplib::Client& client, const std::string& path, const Event& event,
          const std::string& user_agent, WireStats& stats) {
  httplib::Headers headers{{"User-Agent", user_agent},
                           {"X-Forwarded-For", event.ip}};
  ++stats.requests;
  auto res = client.Post(path, headers, encode_event(event) + "\n",
                         "application/x-ndjson");
  if (!res) {
    ++stats.failed;
  } else if (res->status == 202) {
    ++stats.accepted;
  } else {
    ++stats.rejected;
  }
}

}  // namespace

WireStats send_sessions(const std::vector<SimulatedSession>& sessions,
                        const WireTarget& target) {
  httplib::Client client(target.host, target.port);
  client.set_keep_alive(true);
  client.set_tcp_nodelay(true);
  WireStats stats;
  for (const auto& s : sessions) {
    if (s.timeline.is_bot) {
      for (const auto& hit : s.page_load.page_loads) {
        post(client, "/v1/events", hit, target.crawler_user_agent, stats);
      }
      continue;
    }
    for (const auto& emission : s.emissions) {
      post(client, "/v1/events?collector=1", pinging::to_event(emission),
           target.browser_user_agent, stats);
    }
  }
  return stats;
}

}  // namespace engage::sim
