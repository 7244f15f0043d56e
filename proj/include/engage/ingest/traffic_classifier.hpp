// SPDX-License-Identifier: Apache-2.0
// traffic_classifier.hpp
// Human/bot decision for each ingestion request.
#pragma once

#include <cstdint>
#include <deque>
#include <filesystem>
#include <mutex>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace engage::ingest {

struct RequestMeta {
  std::string source_ip;
  std::string user_agent;
  // True iff the request came from the collector script rather than a bare
  // page hit. Most crawlers never execute the collector.
  bool executed_collector = false;
  std::int64_t arrival_time = 0;  // epoch seconds, > 0
};

enum class TrafficClass { kHuman, kBot };

struct ClassifierConfig {
  // Case-insensitive substrings matched against the User-Agent.
  std::vector<std::string> user_agent_denylist;
  double rate_ceiling_per_second = 10.0;
  std::int64_t rate_window_seconds = 60;
};

// One pattern per line; blank lines and lines starting with '#' are skipped.
std::vector<std::string> load_denylist(const std::filesystem::path& path);

// Bot when the collector was not executed, the user agent hits the denylist,
// or the source address sent more than ceiling * window reports within the
// trailing window (the current request included). Thread-safe.
class TrafficClassifier {
 public:
  explicit TrafficClassifier(ClassifierConfig config = {});

  TrafficClass classify(const RequestMeta& meta);

  const ClassifierConfig& config() const { return config_; }

 private:
  bool denylisted(const std::string& user_agent) const;
  bool over_rate(const std::string& ip, std::int64_t now);

  ClassifierConfig config_;
  std::vector<std::string> lowered_denylist_;
  std::mutex mu_;
  // per source: (second, count) pairs inside the window, oldest first
  std::unordered_map<std::string, std::deque<std::pair<std::int64_t, std::int64_t>>>
      rates_;
  std::unordered_map<std::string, std::int64_t> totals_;
  // idle sources are forgotten every kSweepInterval requests
  static constexpr int kSweepInterval = 4096;
  int calls_since_sweep_ = 0;
};

}  // namespace engage::ingest
