// SPDX-License-Identifier: Apache-2.0
// event_store.hpp
// Append-only event log. The file-backed store writes one record per line
// to events-YYYYMMDD.ndjson, partitioned by the UTC day of each event's
// timestamp.
#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iosfwd>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "engage/event.hpp"

namespace engage::ingest {

struct ScanFilter {
  std::optional<std::string> event_type;
  std::optional<std::string> entity_id;
  std::optional<std::string> target_entity_id;
  std::optional<std::int64_t> from;   // inclusive
  std::optional<std::int64_t> until;  // exclusive

  bool matches(const Event& event) const;
};

struct CorruptRecord {
  std::string partition;
  std::size_t line = 0;         // 1-based
  std::uint64_t byte_offset = 0;
  std::string error;
};

struct ScanResult {
  std::vector<Event> events;
  std::vector<CorruptRecord> corrupt;
};

class EventStore {
 public:
  virtual ~EventStore() = default;

  // Throws Error(kStorageFailure) when the batch could not be persisted.
  virtual void append(std::span<const Event> events) = 0;
  // Matching events in (partition, append order). Lines that fail to decode
  // are reported in `corrupt` and skipped.
  virtual ScanResult scan(const ScanFilter& filter = {}) const = 0;
  virtual std::size_t record_count() const = 0;
};

// "events-YYYYMMDD.ndjson" for the UTC day containing `timestamp`.
std::string partition_name(std::int64_t timestamp);

class LogEventStore final : public EventStore {
 public:
  explicit LogEventStore(std::filesystem::path data_dir);

  void append(std::span<const Event> events) override;
  ScanResult scan(const ScanFilter& filter = {}) const override;
  std::size_t record_count() const override;

  std::vector<std::string> partitions() const;
  std::size_t partition_record_count(const std::string& partition) const;
  const std::filesystem::path& data_dir() const { return data_dir_; }

 private:
  std::filesystem::path data_dir_;
  mutable std::mutex mu_;
  std::map<std::string, std::ofstream> writers_;
  std::map<std::string, std::size_t> counts_;
};

// Reads newline-delimited records from an arbitrary log; `label` names the
// source in corruption notices.
ScanResult scan_log(std::istream& in, const std::string& label,
                    const ScanFilter& filter = {});
ScanResult scan_log_file(const std::filesystem::path& path,
                         const ScanFilter& filter = {});

void write_log(std::ostream& out, std::span<const Event> events);

}  // namespace engage::ingest
