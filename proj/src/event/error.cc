// SPDX-License-Identifier: Apache-2.0
#include "engage/error.hpp"

namespace engage {

std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::kMalformedRecord: return "MalformedRecord";
    case Errc::kSchemaViolation: return "SchemaViolation";
    case Errc::kInvariantViolation: return "InvariantViolation";
    case Errc::kUnknownEventName: return "UnknownEventName";
    case Errc::kClockRegression: return "ClockRegression";
    case Errc::kCollectorClosed: return "CollectorClosed";
    case Errc::kStorageFailure: return "StorageFailure";
    case Errc::kCorruptRecord: return "CorruptRecord";
    case Errc::kBindFailure: return "BindFailure";
    case Errc::kNonPositiveDocumentHeight: return "NonPositiveDocumentHeight";
    case Errc::kNegativeInput: return "NegativeInput";
    case Errc::kNoScrollData: return "NoScrollData";
    case Errc::kZeroImpressions: return "ZeroImpressions";
    case Errc::kInsufficientData: return "InsufficientData";
    case Errc::kZeroVariance: return "ZeroVariance";
    case Errc::kZeroPingAttention: return "ZeroPingAttention";
    case Errc::kZeroPageLoadImpressions: return "ZeroPageLoadImpressions";
    case Errc::kInvalidProfile: return "InvalidProfile";
    case Errc::kInvalidLayout: return "InvalidLayout";
  }
  return "Unknown";
}

namespace {

std::string format_message(Errc code, const std::string& field,
                           const std::string& detail) {
  std::string msg(errc_name(code));
  if (!field.empty()) {
    msg += " [";
    msg += field;
    msg += "]";
  }
  if (!detail.empty()) {
    msg += ": ";
    msg += detail;
  }
  return msg;
}

}  // namespace

Error::Error(Errc code, std::string field, const std::string& detail)
    : std::runtime_error(format_message(code, field, detail)),
      code_(code),
      field_(std::move(field)) {}

}  // namespace engage
