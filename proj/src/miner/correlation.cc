// SPDX-License-Identifier: Apache-2.0
#include "engage/miner/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "engage/error.hpp"

namespace engage::miner {

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw Error(Errc::kInsufficientData, "pairs",
                "need at least two (attention, depth) pairs");
  }
  auto constant = [](std::span<const double> v) {
    return std::all_of(v.begin(), v.end(), [&](double a) { return a == v[0]; });
  };
  if (constant(x) || constant(y)) {
    throw Error(Errc::kZeroVariance, constant(x) ? "attention" : "scrollDepth",
                "correlation undefined for a constant series");
  }
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  return sxy / std::sqrt(sxx * syy);
}

CorrelationReport attention_scroll_correlation(const FeatureTable& table,
                                               int bins) {
  struct Pair {
    const std::string* id;
    double attention;
    double depth;
  };
  std::vector<Pair> pairs;
  for (const auto& [id, f] : table) {
    if (f.engagement_reports == 0 || !f.avg_scroll_depth_percent) continue;
    pairs.push_back({&id, static_cast<double>(f.attention_seconds),
                     *f.avg_scroll_depth_percent});
  }
  if (pairs.size() < 2) {
    throw Error(Errc::kInsufficientData, "items",
                "need at least two items with attention and scroll depth");
  }
  if (bins < 1) bins = 1;

  std::vector<double> x, y;
  x.reserve(pairs.size());
  y.reserve(pairs.size());
  for (const auto& p : pairs) {
    x.push_back(p.attention);
    y.push_back(p.depth);
  }

  CorrelationReport report;
  report.items = pairs.size();
  report.pearson = pearson(x, y);

  std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
    if (a.attention != b.attention) return a.attention < b.attention;
    return *a.id < *b.id;
  });
  const std::size_t n = pairs.size();
  std::vector<PercentilePoint> curve(static_cast<std::size_t>(bins));
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t b = i * static_cast<std::size_t>(bins) / n;
    curve[b].mean_scroll_depth += pairs[i].depth;
    curve[b].mean_attention += pairs[i].attention;
    ++curve[b].items;
  }
  for (int b = 0; b < bins; ++b) {
    auto& point = curve[static_cast<std::size_t>(b)];
    if (point.items == 0) continue;
    point.percentile = 100.0 * (b + 1) / bins;
    point.mean_scroll_depth /= static_cast<double>(point.items);
    point.mean_attention /= static_cast<double>(point.items);
    report.curve.push_back(point);
  }
  return report;
}

void write_curve(std::ostream& out, const CorrelationReport& report) {
  char buf[96];
  for (const auto& p : report.curve) {
    std::snprintf(buf, sizeof(buf), "%.2f %.4f\n", p.percentile,
                  p.mean_scroll_depth);
    out << buf;
  }
}

}  // namespace engage::miner
