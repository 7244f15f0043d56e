// SPDX-License-Identifier: Apache-2.0
#include "engage/ingest/event_store.hpp"

#include <algorithm>
#include <ctime>
#include <istream>

#include "engage/codec.hpp"
#include "engage/error.hpp"

namespace engage::ingest {

namespace fs = std::filesystem;

namespace {

constexpr std::string_view kPrefix = "events-";
constexpr std::string_view kSuffix = ".ndjson";

bool is_partition_file(const fs::path& p) {
  const std::string name = p.filename().string();
  return name.size() == kPrefix.size() + 8 + kSuffix.size() &&
         name.starts_with(kPrefix) && name.ends_with(kSuffix);
}

std::size_t count_lines(const fs::path& p) {
  std::ifstream in(p);
  std::size_t n = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) ++n;
  }
  return n;
}

}  // namespace

bool ScanFilter::matches(const Event& e) const {
  if (event_type && e.event_type != *event_type) return false;
  if (entity_id && e.entity_id != *entity_id) return false;
  if (target_entity_id && e.target_entity_id != *target_entity_id) return false;
  if (from && e.timestamp < *from) return false;
  if (until && e.timestamp >= *until) return false;
  return true;
}

std::string partition_name(std::int64_t timestamp) {
  const std::time_t t = static_cast<std::time_t>(timestamp);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "events-%Y%m%d.ndjson", &tm);
  return buf;
}

namespace {

// A store partition may be read while a writer is mid-record; its final line
// counts only once the newline is there.
ScanResult scan_lines(std::istream& in, const std::string& label,
                      const ScanFilter& filter, bool skip_unterminated_tail) {
  ScanResult result;
  std::string line;
  std::size_t line_no = 0;
  std::uint64_t offset = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::uint64_t start = offset;
    offset += line.size() + 1;
    if (skip_unterminated_tail && in.eof()) break;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    try {
      Event e = decode_event(line);
      if (filter.matches(e)) result.events.push_back(std::move(e));
    } catch (const Error& err) {
      result.corrupt.push_back(CorruptRecord{label, line_no, start, err.what()});
    }
  }
  return result;
}

}  // namespace

LogEventStore::LogEventStore(fs::path data_dir) : data_dir_(std::move(data_dir)) {
  std::error_code ec;
  fs::create_directories(data_dir_, ec);
  if (ec) {
    throw Error(Errc::kStorageFailure, data_dir_.string(), ec.message());
  }
  for (const auto& entry : fs::directory_iterator(data_dir_)) {
    if (entry.is_regular_file() && is_partition_file(entry.path())) {
      counts_[entry.path().filename().string()] = count_lines(entry.path());
    }
  }
}

void LogEventStore::append(std::span<const Event> events) {
  // Group per partition, keeping batch order inside each partition.
  std::map<std::string, std::string> chunks;
  std::map<std::string, std::size_t> added;
  for (const auto& e : events) {
    const std::string part = partition_name(e.timestamp);
    auto& chunk = chunks[part];
    chunk += encode_event(e);
    chunk += '\n';
    ++added[part];
  }

  std::lock_guard lk(mu_);
  for (auto& [part, chunk] : chunks) {
    auto it = writers_.find(part);
    if (it == writers_.end()) {
      std::ofstream out(data_dir_ / part, std::ios::app | std::ios::binary);
      if (!out) {
        throw Error(Errc::kStorageFailure, part, "cannot open partition");
      }
      it = writers_.emplace(part, std::move(out)).first;
    }
    it->second.write(chunk.data(), static_cast<std::streamsize>(chunk.size()));
    it->second.flush();
    if (!it->second) {
      writers_.erase(it);
      throw Error(Errc::kStorageFailure, part, "write failed");
    }
    counts_[part] += added[part];
  }
}

std::vector<std::string> LogEventStore::partitions() const {
  std::lock_guard lk(mu_);
  std::vector<std::string> names;
  names.reserve(counts_.size());
  for (const auto& [name, n] : counts_) names.push_back(name);
  return names;
}

std::size_t LogEventStore::partition_record_count(const std::string& partition) const {
  std::lock_guard lk(mu_);
  auto it = counts_.find(partition);
  return it == counts_.end() ? 0 : it->second;
}

std::size_t LogEventStore::record_count() const {
  std::lock_guard lk(mu_);
  std::size_t n = 0;
  for (const auto& [name, count] : counts_) n += count;
  return n;
}

ScanResult LogEventStore::scan(const ScanFilter& filter) const {
  ScanResult result;
  // Partition names sort chronologically.
  for (const auto& part : partitions()) {
    std::ifstream in(data_dir_ / part, std::ios::binary);
    if (!in) continue;
    ScanResult chunk = scan_lines(in, part, filter, true);
    std::move(chunk.events.begin(), chunk.events.end(),
              std::back_inserter(result.events));
    std::move(chunk.corrupt.begin(), chunk.corrupt.end(),
              std::back_inserter(result.corrupt));
  }
  return result;
}

ScanResult scan_log(std::istream& in, const std::string& label,
                    const ScanFilter& filter) {
  return scan_lines(in, label, filter, false);
}

ScanResult scan_log_file(const fs::path& path, const ScanFilter& filter) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(Errc::kStorageFailure, path.string(), "cannot open log");
  }
  return scan_log(in, path.filename().string(), filter);
}

void write_log(std::ostream& out, std::span<const Event> events) {
  for (const auto& e : events) out << encode_event(e) << '\n';
}

}  // namespace engage::ingest
