// Copyright 2026 The signseg Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Frame probabilities -> segments, and threshold tuning.

#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <tuple>
#include <vector>

#include "signseg/metrics.hpp"
#include "signseg/tags.hpp"

namespace signseg {

enum class DecodeMode { Threshold, Argmax };

struct DecodeParams {
  double threshold_b = 50.0;  // percent
  double threshold_o = 50.0;  // percent
  DecodeMode mode = DecodeMode::Threshold;
  // Threshold mode only: a B spike that closes a segment also opens the next.
  bool strict_bio = false;

  void validate() const {
    if (!(threshold_b >= 0 && threshold_b <= 100) || !(threshold_o >= 0 && threshold_o <= 100))
      throw Error("decode", "thresholds must lie in [0, 100]");
  }
};

inline std::vector<ProbRow> to_percent(const std::vector<ProbRow>& rows) {
  std::vector<ProbRow> out = rows;
  for (auto& r : out)
    for (auto& v : r) v *= 100.0;
  return out;
}

// Greedy threshold decoding over rows of (b, i, o) percentages.
//
// A segment opens at the first frame with b > threshold_b. Once b has dropped
// below threshold_b, the segment closes before the first frame with
// b > threshold_b or o > threshold_o. The closing frame does not open a new
// segment unless strict_bio is set, so back-to-back segments merge into the
// first one's extent.
inline std::vector<Segment> greedy_decode(const std::vector<ProbRow>& rows,
                                          const DecodeParams& params = {},
                                          Tier tier = Tier::Sign) {
  params.validate();
  std::vector<Segment> out;
  std::optional<std::int64_t> start;
  bool did_pass_start = false;
  const auto n = static_cast<std::int64_t>(rows.size());
  for (std::int64_t i = 0; i < n; ++i) {
    const auto [b, in, o] = rows[static_cast<std::size_t>(i)];
    (void)in;
    if (!start) {
      if (b > params.threshold_b) start = i;
    } else if (did_pass_start) {
      if (b > params.threshold_b || o > params.threshold_o) {
        out.push_back({*start, i, tier});
        start.reset();
        did_pass_start = false;
        if (params.strict_bio && b > params.threshold_b) start = i;
      }
    } else if (b < params.threshold_b) {
      did_pass_start = true;
    }
  }
  if (start) out.push_back({*start, n, tier});
  return out;
}

// Argmax decoding: a segment opens at every frame whose most likely class is
// B (closing any open segment) and closes at the first frame whose most likely
// class is O. An I outside a segment opens one, as in gold tag decoding. Ties
// resolve toward B, then I.
inline std::vector<Segment> argmax_decode(const std::vector<ProbRow>& rows,
                                          Tier tier = Tier::Sign) {
  std::vector<Segment> out;
  std::optional<std::int64_t> start;
  const auto n = static_cast<std::int64_t>(rows.size());
  for (std::int64_t i = 0; i < n; ++i) {
    const Tag tag = argmax_tag(rows[static_cast<std::size_t>(i)]);
    if (tag == Tag::I) {
      if (!start) start = i;
      continue;
    }
    if (start) out.push_back({*start, i, tier});
    start.reset();
    if (tag == Tag::B) start = i;
  }
  if (start) out.push_back({*start, n, tier});
  return out;
}

inline std::vector<Segment> decode_segments(const std::vector<ProbRow>& percent_rows,
                                            const DecodeParams& params, Tier tier) {
  return params.mode == DecodeMode::Argmax ? argmax_decode(percent_rows, tier)
                                           : greedy_decode(percent_rows, params, tier);
}

// ---------------------------------------------------------------------------
// Threshold tuning.

struct DevItem {
  std::vector<ProbRow> percent_rows;  // (b, i, o) in [0, 100]
  std::vector<Segment> gold;
};

struct TuningCell {
  double threshold_b = 0;
  double threshold_o = 0;
  double iou = 0;         // mean over dev items
  double percentage = 0;  // mean over dev items with gold segments
};

struct TuningResult {
  double threshold_b = 50;
  double threshold_o = 50;
  std::vector<TuningCell> table;  // grid order: b outer, o inner
};

inline std::vector<double> default_threshold_grid() {
  return {10, 20, 30, 40, 50, 60, 70, 80, 90};
}

inline TuningCell evaluate_thresholds(const std::vector<DevItem>& dev, double threshold_b,
                                      double threshold_o, Tier tier = Tier::Sign) {
  DecodeParams params{threshold_b, threshold_o, DecodeMode::Threshold, false};
  TuningCell cell{threshold_b, threshold_o, 0, 0};
  std::size_t with_gold = 0;
  for (const auto& item : dev) {
    const auto pred = greedy_decode(item.percent_rows, params, tier);
    cell.iou += segment_iou(pred, item.gold, static_cast<std::int64_t>(item.percent_rows.size()));
    if (!item.gold.empty()) {
      cell.percentage += percentage_of_segments(pred, item.gold);
      ++with_gold;
    }
  }
  cell.iou /= static_cast<double>(dev.size());
  cell.percentage = with_gold ? cell.percentage / static_cast<double>(with_gold)
                              : std::numeric_limits<double>::quiet_NaN();
  return cell;
}

// Exhaustive grid over (threshold_b, threshold_o). The winner maximizes mean
// IoU, then minimizes |percentage - 1|, then prefers the smaller pair.
inline TuningResult tune_thresholds(const std::vector<DevItem>& dev,
                                    const std::vector<double>& grid = default_threshold_grid(),
                                    Tier tier = Tier::Sign) {
  if (dev.empty()) throw Error("tune", "development set is empty");
  if (grid.empty()) throw Error("tune", "threshold grid is empty");
  TuningResult result;
  for (double b : grid)
    for (double o : grid) result.table.push_back(evaluate_thresholds(dev, b, o, tier));

  auto key = [](const TuningCell& c) {
    const double dev_pct = std::isnan(c.percentage) ? std::numeric_limits<double>::infinity()
                                                    : std::abs(c.percentage - 1.0);
    return std::make_tuple(-c.iou, dev_pct, c.threshold_b, c.threshold_o);
  };
  const TuningCell* best = &result.table.front();
  for (const auto& c : result.table)
    if (key(c) < key(*best)) best = &c;
  result.threshold_b = best->threshold_b;
  result.threshold_o = best->threshold_o;
  return result;
}

}  // namespace signseg
