// SPDX-License-Identifier: Apache-2.0
// error.hpp
// Error codes shared by every engage module.
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace engage {

enum class Errc {
  // event codec
  kMalformedRecord,
  kSchemaViolation,
  kInvariantViolation,
  // pinging protocol
  kUnknownEventName,
  kClockRegression,
  kCollectorClosed,
  // ingestion
  kStorageFailure,
  kCorruptRecord,
  kBindFailure,
  // miner
  kNonPositiveDocumentHeight,
  kNegativeInput,
  kNoScrollData,
  kZeroImpressions,
  kInsufficientData,
  kZeroVariance,
  kZeroPingAttention,
  kZeroPageLoadImpressions,
  // simulator
  kInvalidProfile,
  kInvalidLayout,
};

std::string_view errc_name(Errc code);

// Every failure surfaced by the library. `field()` names the offending input
// (a dotted JSON path for codec errors, a parameter name elsewhere) and may be
// empty.
class Error : public std::runtime_error {
 public:
  Error(Errc code, std::string field, const std::string& detail);

  Errc code() const noexcept { return code_; }
  const std::string& field() const noexcept { return field_; }

 private:
  Errc code_;
  std::string field_;
};

}  // namespace engage
