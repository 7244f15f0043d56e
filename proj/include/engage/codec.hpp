// SPDX-License-Identifier: Apache-2.0
// codec.hpp
// Textual record codec. One JSON object per record using the field names
// entityId, entityType, targetEntityId, targetEntityType, ip, timestamp,
// type, properties. Storage framing is one record per line.
#pragma once

#include <string>
#include <string_view>

#include "engage/event.hpp"

namespace engage {

// Single-line record without a trailing newline. `event` must be valid.
std::string encode_event(const Event& event);

// Throws Error with kMalformedRecord (not JSON), kSchemaViolation (missing or
// mistyped field) or kInvariantViolation (e.g. a report longer than three
// buckets). Integer identifiers are accepted and read as decimal strings; a
// missing ip decodes as an empty string.
Event decode_event(std::string_view record);

}  // namespace engage
