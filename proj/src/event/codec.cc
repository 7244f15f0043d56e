// SPDX-License-Identifier: Apache-2.0
#include "engage/codec.hpp"

#include "engage/error.hpp"

namespace engage {

namespace {

std::string read_identifier(const Properties& record, const char* field) {
  auto it = record.find(field);
  if (it == record.end()) throw Error(Errc::kSchemaViolation, field, "missing");
  if (it->is_string()) return it->get<std::string>();
  // Integer ids are legal on the wire; they are opaque strings internally.
  if (it->is_number_integer()) return it->dump();
  throw Error(Errc::kSchemaViolation, field, "must be a string");
}

std::string read_string(const Properties& record, const char* field) {
  auto it = record.find(field);
  if (it == record.end()) throw Error(Errc::kSchemaViolation, field, "missing");
  if (!it->is_string())
    throw Error(Errc::kSchemaViolation, field, "must be a string");
  return it->get<std::string>();
}

}  // namespace

std::string encode_event(const Event& event) {
  Properties record = Properties::object();
  record["entityId"] = event.entity_id;
  record["entityType"] = event.entity_type;
  record["targetEntityId"] = event.target_entity_id;
  record["targetEntityType"] = event.target_entity_type;
  record["ip"] = event.ip;
  record["timestamp"] = event.timestamp;
  record["type"] = event.event_type;
  record["properties"] = event.properties;
  return record.dump();
}

Event decode_event(std::string_view text) {
  Properties record;
  try {
    record = Properties::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(Errc::kMalformedRecord, "", e.what());
  }
  if (!record.is_object())
    throw Error(Errc::kSchemaViolation, "", "record must be a JSON object");

  Event event;
  event.entity_id = read_identifier(record, "entityId");
  event.entity_type = read_string(record, "entityType");
  event.target_entity_id = read_identifier(record, "targetEntityId");
  event.target_entity_type = read_string(record, "targetEntityType");
  event.event_type = read_string(record, "type");

  auto ts = record.find("timestamp");
  if (ts == record.end())
    throw Error(Errc::kSchemaViolation, "timestamp", "missing");
  if (!ts->is_number_integer())
    throw Error(Errc::kSchemaViolation, "timestamp",
                "must be integer epoch seconds");
  event.timestamp = ts->get<std::int64_t>();

  if (auto ip = record.find("ip"); ip != record.end()) {
    if (!ip->is_string())
      throw Error(Errc::kSchemaViolation, "ip", "must be a string");
    event.ip = ip->get<std::string>();
  }

  auto props = record.find("properties");
  if (props == record.end())
    throw Error(Errc::kSchemaViolation, "properties", "missing");
  if (!props->is_object())
    throw Error(Errc::kSchemaViolation, "properties", "must be an object");
  event.properties = std::move(*props);

  validate(event);
  return event;
}

}  // namespace engage
