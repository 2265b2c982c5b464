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

// Segmentation metrics: frame-level macro F1, segment IoU, percentage of
// segments, O-tag ROC-AUC and the segment-length density.

#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "signseg/tags.hpp"

namespace signseg {

// Macro-averaged F1 over B, I, O. A class absent from both sequences scores 1.
inline double frame_f1(const std::vector<Tag>& pred, const std::vector<Tag>& gold) {
  if (pred.size() != gold.size()) throw Error("eval", "predicted and gold tag lengths differ");
  double total = 0;
  for (int c = 0; c < kTagCount; ++c) {
    const Tag tag = static_cast<Tag>(c);
    std::size_t tp = 0, fp = 0, fn = 0;
    for (std::size_t t = 0; t < gold.size(); ++t) {
      const bool p = pred[t] == tag, g = gold[t] == tag;
      tp += p && g;
      fp += p && !g;
      fn += !p && g;
    }
    if (tp + fp + fn == 0) {
      total += 1.0;
    } else {
      total += 2.0 * static_cast<double>(tp) / static_cast<double>(2 * tp + fp + fn);
    }
  }
  return total / kTagCount;
}

namespace detail {

inline std::vector<bool> coverage(const std::vector<Segment>& segments, std::int64_t frames) {
  std::vector<bool> covered(static_cast<std::size_t>(std::max<std::int64_t>(frames, 0)), false);
  for (const auto& s : segments)
    for (auto t = std::max<std::int64_t>(s.start, 0); t < std::min(s.end, frames); ++t)
      covered[static_cast<std::size_t>(t)] = true;
  return covered;
}

}  // namespace detail

// |G n P| / |G u P| over the frame unions; 1 when both are empty.
inline double segment_iou(const std::vector<Segment>& pred, const std::vector<Segment>& gold,
                          std::int64_t frames) {
  const auto p = detail::coverage(pred, frames);
  const auto g = detail::coverage(gold, frames);
  std::size_t inter = 0, uni = 0;
  for (std::size_t t = 0; t < p.size(); ++t) {
    inter += p[t] && g[t];
    uni += p[t] || g[t];
  }
  return uni == 0 ? 1.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

inline double percentage_of_segments(const std::vector<Segment>& pred,
                                     const std::vector<Segment>& gold) {
  if (gold.empty()) throw Error("eval", "percentage of segments is undefined without gold segments");
  return static_cast<double>(pred.size()) / static_cast<double>(gold.size());
}

// Mann-Whitney AUC with the O probability as score and gold == O as the
// positive label. Tied scores contribute one half.
inline double roc_auc_o(const std::vector<ProbRow>& probs, const std::vector<Tag>& gold) {
  if (probs.size() != gold.size()) throw Error("eval", "probability and gold lengths differ");
  const std::size_t n = probs.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  constexpr int o = static_cast<int>(Tag::O);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return probs[a][o] < probs[b][o]; });
  double positive_rank_sum = 0;
  std::size_t positives = 0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && probs[order[j]][o] == probs[order[i]][o]) ++j;
    // Ranks i+1 .. j share their average.
    const double avg_rank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) {
      if (gold[order[k]] == Tag::O) {
        positive_rank_sum += avg_rank;
        ++positives;
      }
    }
    i = j;
  }
  const std::size_t negatives = n - positives;
  if (positives == 0 || negatives == 0)
    throw Error("eval", "ROC-AUC needs both O and non-O gold frames");
  const double p = static_cast<double>(positives);
  const double u = positive_rank_sum - p * (p + 1) / 2;
  return u / (p * static_cast<double>(negatives));
}

struct LengthHistogram {
  std::vector<double> edges;    // bins + 1 edges in seconds, starting at 0
  std::vector<double> mass;     // fraction of segments per bin
  std::vector<double> density;  // mass / bin width; integrates to 1
};

// Equal-width bins over [0, longest duration]; the last bin is closed.
inline LengthHistogram length_density(const std::vector<Segment>& segments, double fps,
                                      std::size_t bins) {
  if (segments.empty()) throw Error("eval", "length density needs at least one segment");
  if (bins == 0) throw Error("eval", "length density needs at least one bin");
  if (!(fps > 0)) throw Error("eval", "fps must be positive");
  double longest = 0;
  for (const auto& s : segments) longest = std::max(longest, static_cast<double>(s.length()) / fps);
  if (!(longest > 0)) longest = 1.0 / fps;
  const double width = longest / static_cast<double>(bins);
  LengthHistogram h;
  for (std::size_t b = 0; b <= bins; ++b) h.edges.push_back(width * static_cast<double>(b));
  h.mass.assign(bins, 0.0);
  for (const auto& s : segments) {
    const double d = static_cast<double>(s.length()) / fps;
    auto b = static_cast<std::size_t>(std::floor(d / width));
    h.mass[std::min(b, bins - 1)] += 1.0;
  }
  for (auto& m : h.mass) m /= static_cast<double>(segments.size());
  for (double m : h.mass) h.density.push_back(m / width);
  return h;
}

struct TierReport {
  double frame_f1 = 0;
  double iou = 0;
  double percentage = 0;
  double roc_auc_o = 0;
  bool has_auc = false;
  LengthHistogram segment_length_density;
};

struct EvalReport {
  TierReport sign;
  TierReport phrase;

  const TierReport& tier(Tier t) const { return t == Tier::Sign ? sign : phrase; }
  TierReport& tier(Tier t) { return t == Tier::Sign ? sign : phrase; }
};

}  // namespace signseg
