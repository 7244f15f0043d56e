// SPDX-License-Identifier: Apache-2.0
// correlation.hpp
// Attention vs. scroll depth across items.
#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "engage/miner/features.hpp"

namespace engage::miner {

struct PercentilePoint {
  double percentile = 0.0;  // upper edge of the bin, (0, 100]
  double mean_scroll_depth = 0.0;
  double mean_attention = 0.0;
  std::size_t items = 0;
};

struct CorrelationReport {
  std::vector<PercentilePoint> curve;  // empty bins are omitted
  double pearson = 0.0;
  std::size_t items = 0;
};

inline constexpr int kPercentileBins = 20;

// Throws kInsufficientData for fewer than two pairs or mismatched lengths,
// kZeroVariance when either side is constant.
double pearson(std::span<const double> x, std::span<const double> y);

// Uses items that have both attention and a scroll depth. Items are ranked by
// attention (ties broken by id) and split into `bins` equal-rank bins.
CorrelationReport attention_scroll_correlation(const FeatureTable& table,
                                               int bins = kPercentileBins);

// "percentile mean_scroll_depth" per line, for plotting.
void write_curve(std::ostream& out, const CorrelationReport& report);

}  // namespace engage::miner
