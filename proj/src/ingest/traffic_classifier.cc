// SPDX-License-Identifier: Apache-2.0
#include "engage/ingest/traffic_classifier.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>

namespace engage::ingest {

namespace {

std::string to_lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

}  // namespace

std::vector<std::string> load_denylist(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::vector<std::string> patterns;
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    patterns.push_back(line);
  }
  return patterns;
}

TrafficClassifier::TrafficClassifier(ClassifierConfig config)
    : config_(std::move(config)) {
  for (const auto& p : config_.user_agent_denylist) {
    if (!p.empty()) lowered_denylist_.push_back(to_lower(p));
  }
}

bool TrafficClassifier::denylisted(const std::string& user_agent) const {
  if (lowered_denylist_.empty() || user_agent.empty()) return false;
  const std::string ua = to_lower(user_agent);
  return std::any_of(lowered_denylist_.begin(), lowered_denylist_.end(),
                     [&](const std::string& p) {
                       return ua.find(p) != std::string::npos;
                     });
}

bool TrafficClassifier::over_rate(const std::string& ip, std::int64_t now) {
  std::lock_guard lk(mu_);
  auto& window = rates_[ip];
  auto& total = totals_[ip];
  if (!window.empty() && window.back().first == now) {
    ++window.back().second;
  } else {
    window.emplace_back(now, 1);
  }
  ++total;
  while (!window.empty() &&
         window.front().first <= now - config_.rate_window_seconds) {
    total -= window.front().second;
    window.pop_front();
  }
  if (++calls_since_sweep_ >= kSweepInterval) {
    calls_since_sweep_ = 0;
    for (auto it = rates_.begin(); it != rates_.end();) {
      if (it->second.back().first <= now - config_.rate_window_seconds) {
        totals_.erase(it->first);
        it = rates_.erase(it);
      } else {
        ++it;
      }
    }
  }
  const double limit =
      config_.rate_ceiling_per_second * static_cast<double>(config_.rate_window_seconds);
  return static_cast<double>(total) > limit;
}

TrafficClass TrafficClassifier::classify(const RequestMeta& meta) {
  const bool rate_exceeded = over_rate(meta.source_ip, meta.arrival_time);
  if (!meta.executed_collector) return TrafficClass::kBot;
  if (denylisted(meta.user_agent)) return TrafficClass::kBot;
  if (rate_exceeded) return TrafficClass::kBot;
  return TrafficClass::kHuman;
}

}  // namespace engage::ingest
