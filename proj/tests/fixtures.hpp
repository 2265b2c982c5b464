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

// Decoder and tuning fixtures shared by unit and acceptance tests.

#pragma once

#include <functional>
#include <vector>

#include "signseg/decode.hpp"
#include "signseg/tags.hpp"
#include "support.hpp"

namespace signseg::testing {

// Calls `visit` with every tag sequence over {B, I, O} of the given length.
inline void for_each_tag_sequence(std::size_t length, const std::function<void(const std::vector<Tag>&)>& visit) {
  std::vector<Tag> tags(length, Tag::B);
  std::size_t total = 1;
  for (std::size_t i = 0; i < length; ++i) total *= 3;
  for (std::size_t code = 0; code < total; ++code) {
    std::size_t c = code;
    for (std::size_t i = 0; i < length; ++i) {
      tags[i] = static_cast<Tag>(c % 3);
      c /= 3;
    }
    visit(tags);
  }
}

// No I at the start or directly after O.
inline bool well_formed_bio(const std::vector<Tag>& tags) {
  for (std::size_t t = 0; t < tags.size(); ++t)
    if (tags[t] == Tag::I && (t == 0 || tags[t - 1] == Tag::O)) return false;
  return true;
}

// Greedy decoding of one-hot rows differs from the gold decoding exactly when
// a segment is immediately followed by another one (the closing B does not
// reopen) or a one-frame segment ends before the sequence does (its O is
// consumed as the first below-threshold frame).
inline bool greedy_quirk_expected(const std::vector<Segment>& gold, std::int64_t frames) {
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (i + 1 < gold.size() && gold[i + 1].start == gold[i].end) return true;
    if (gold[i].length() == 1 && gold[i].end < frames) return true;
  }
  return false;
}

// O(n^2) pair counting: P(score_pos > score_neg) + 0.5 P(tie).
inline double auc_oracle(const std::vector<ProbRow>& probs, const std::vector<Tag>& gold) {
  double wins = 0, pairs = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (gold[i] != Tag::O) continue;
    for (std::size_t j = 0; j < gold.size(); ++j) {
      if (gold[j] == Tag::O) continue;
      pairs += 1;
      if (probs[i][2] > probs[j][2]) wins += 1;
      else if (probs[i][2] == probs[j][2]) wins += 0.5;
    }
  }
  return wins / pairs;
}

// Long gold segments whose probabilities carry two-frame B spikes inside,
// which split segments at moderate thresholds.
inline std::vector<DevItem> over_segmenting_fixture(std::uint64_t seed = 7, int items = 6) {
  Gen g(seed);
  std::vector<DevItem> dev;
  for (int n = 0; n < items; ++n) {
    DevItem item;
    std::int64_t t = g.integer(3, 8);
    auto outside = [&](int count) {
      for (int k = 0; k < count; ++k) {
        const double b = g.uniform(0, 4), i = g.uniform(0, 4);
        item.percent_rows.push_back({b, i, 100 - b - i});
      }
    };
    outside(static_cast<int>(t));
    for (int phrase = 0; phrase < 3; ++phrase) {
      const int len = g.integer(30, 45);
      item.gold.push_back({t, t + len, Tier::Phrase});
      const double b0 = g.uniform(92, 98);
      item.percent_rows.push_back({b0, 100 - b0 - 1, 1});
      std::vector<bool> spike(static_cast<std::size_t>(len), false);
      for (int s = 0; s < 3; ++s) {
        const int at = g.integer(4, len - 6);
        spike[static_cast<std::size_t>(at)] = spike[static_cast<std::size_t>(at + 1)] = true;
      }
      for (int k = 1; k < len; ++k) {
        if (spike[static_cast<std::size_t>(k)]) {
          const double b = g.uniform(55, 78), o = g.uniform(0, 3);
          item.percent_rows.push_back({b, 100 - b - o, o});
        } else {
          const double b = g.uniform(0, 6), o = g.uniform(0, 6);
          item.percent_rows.push_back({b, 100 - b - o, o});
        }
      }
      t += len;
      const int gap = g.integer(6, 12);
      outside(gap);
      t += gap;
    }
    dev.push_back(std::move(item));
  }
  return dev;
}

// Rows on which (50, 50) is the only grid cell that decodes perfectly.
inline DevItem perfect_at_default_fixture() {
  DevItem item;
  const ProbRow out{0, 45, 55}, spike{45, 0, 55}, start{55, 45, 0}, inside{0, 55, 45};
  auto push = [&](const ProbRow& r, int n) {
    for (int k = 0; k < n; ++k) item.percent_rows.push_back(r);
  };
  push(out, 3);
  push(spike, 1);
  push(out, 2);
  item.gold.push_back({6, 12, Tier::Sign});
  push(start, 1);
  push(inside, 5);
  push(out, 2);
  push(spike, 1);
  push(out, 1);
  item.gold.push_back({16, 20, Tier::Sign});
  push(start, 1);
  push(inside, 3);
  push(out, 3);
  return item;
}

}  // namespace signseg::testing
