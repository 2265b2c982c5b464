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

// Segments, per-frame BIO/IO tags, and conversions between them.
//
// All intervals are half-open frame ranges [start, end).

#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "signseg/common.hpp"

namespace signseg {

enum class Tier { Sign, Phrase };
enum class Tag : std::uint8_t { B = 0, I = 1, O = 2 };
enum class TagScheme { BIO, IO };

inline constexpr int kTagCount = 3;

inline const char* to_string(Tier t) { return t == Tier::Sign ? "sign" : "phrase"; }
inline const char* to_string(TagScheme s) { return s == TagScheme::BIO ? "BIO" : "IO"; }
inline char tag_char(Tag t) { return "BIO"[static_cast<int>(t)]; }

struct Segment {
  std::int64_t start = 0;
  std::int64_t end = 0;
  Tier tier = Tier::Sign;

  std::int64_t length() const { return end - start; }
  friend bool operator==(const Segment&, const Segment&) = default;
};

inline std::ostream& operator<<(std::ostream& os, const Segment& s) {
  return os << '[' << s.start << ',' << s.end << ')';
}

struct TagSequence {
  std::vector<Tag> tags;
  Tier tier = Tier::Sign;
  double fps = 25.0;

  std::size_t size() const { return tags.size(); }
};

// One (B, I, O) probability row per frame.
using ProbRow = std::array<double, kTagCount>;

struct FrameProbs {
  std::vector<ProbRow> sign;
  std::vector<ProbRow> phrase;

  const std::vector<ProbRow>& tier(Tier t) const { return t == Tier::Sign ? sign : phrase; }
  std::vector<ProbRow>& tier(Tier t) { return t == Tier::Sign ? sign : phrase; }
  std::size_t frames() const { return sign.size(); }
};

inline Tag argmax_tag(const ProbRow& row) {
  // Ties resolve toward the earlier class: B, then I, then O.
  int best = 0;
  for (int c = 1; c < kTagCount; ++c)
    if (row[c] > row[best]) best = c;
  return static_cast<Tag>(best);
}

inline std::vector<Tag> argmax_tags(const std::vector<ProbRow>& rows) {
  std::vector<Tag> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(argmax_tag(r));
  return out;
}

// Probability rows that put all mass on the given tags, scaled to `total`.
inline std::vector<ProbRow> one_hot_rows(const std::vector<Tag>& tags, double total = 1.0) {
  std::vector<ProbRow> rows(tags.size(), ProbRow{0, 0, 0});
  for (std::size_t t = 0; t < tags.size(); ++t) rows[t][static_cast<int>(tags[t])] = total;
  return rows;
}

inline std::string tags_to_string(const std::vector<Tag>& tags) {
  std::string s;
  for (Tag t : tags) s.push_back(tag_char(t));
  return s;
}

inline std::vector<Segment> sorted_segments(std::vector<Segment> segments) {
  std::sort(segments.begin(), segments.end(),
            [](const Segment& a, const Segment& b) { return a.start < b.start; });
  return segments;
}

inline TagSequence encode_tags(const std::vector<Segment>& segments, std::size_t frames,
                               TagScheme scheme, Tier tier = Tier::Sign, double fps = 25.0) {
  TagSequence out{std::vector<Tag>(frames, Tag::O), tier, fps};
  const auto sorted = sorted_segments(segments);
  const auto length = static_cast<std::int64_t>(frames);
  std::int64_t previous_end = 0;
  for (const auto& s : sorted) {
    if (s.start < 0 || s.end > length || s.start >= s.end)
      throw Error("encode", "segment [" + std::to_string(s.start) + "," + std::to_string(s.end) +
                                ") is empty or outside [0," + std::to_string(length) + ")");
    if (s.start < previous_end)
      throw Error("encode", "segments overlap at frame " + std::to_string(s.start));
    previous_end = s.end;
    for (auto t = s.start; t < s.end; ++t) out.tags[static_cast<std::size_t>(t)] = Tag::I;
    if (scheme == TagScheme::BIO) out.tags[static_cast<std::size_t>(s.start)] = Tag::B;
  }
  return out;
}

struct DecodedTags {
  std::vector<Segment> segments;
  std::size_t repairs = 0;  // I tags found after O (or at the start) under BIO
};

// BIO: a segment starts at every B and runs until the next B or O. An I that
// follows O is repaired into a segment start. IO: maximal runs of non-O tags.
inline DecodedTags decode_gold_tags_counted(const TagSequence& seq, TagScheme scheme) {
  DecodedTags out;
  std::optional<std::int64_t> start;
  const auto n = static_cast<std::int64_t>(seq.tags.size());
  auto close = [&](std::int64_t end) {
    if (start) out.segments.push_back({*start, end, seq.tier});
    start.reset();
  };
  for (std::int64_t t = 0; t < n; ++t) {
    const Tag tag = seq.tags[static_cast<std::size_t>(t)];
    if (tag == Tag::O) {
      close(t);
    } else if (scheme == TagScheme::IO) {
      if (!start) start = t;
    } else if (tag == Tag::B) {
      close(t);
      start = t;
    } else if (!start) {
      ++out.repairs;
      start = t;
    }
  }
  close(n);
  return out;
}

inline std::vector<Segment> decode_gold_tags(const TagSequence& seq, TagScheme scheme) {
  return decode_gold_tags_counted(seq, scheme).segments;
}

// Moves segments to another frame rate. Segments that collapse keep one
// frame at their new start; segments that then overlap are merged.
inline std::vector<Segment> retime_segments(const std::vector<Segment>& segments, double src_fps,
                                            double dst_fps) {
  if (!(src_fps > 0) || !(dst_fps > 0)) throw Error("retime", "fps must be positive");
  if (src_fps == dst_fps) return segments;
  const double ratio = dst_fps / src_fps;
  std::vector<Segment> moved;
  moved.reserve(segments.size());
  for (const auto& s : segments) {
    Segment r{round_half_away(static_cast<double>(s.start) * ratio),
              round_half_away(static_cast<double>(s.end) * ratio), s.tier};
    if (r.end <= r.start) r.end = r.start + 1;
    moved.push_back(r);
  }
  moved = sorted_segments(std::move(moved));
  std::vector<Segment> merged;
  for (const auto& s : moved) {
    if (!merged.empty() && s.start < merged.back().end)
      merged.back().end = std::max(merged.back().end, s.end);
    else
      merged.push_back(s);
  }
  return merged;
}

struct FidelityRow {
  double fps = 0;
  TagScheme scheme = TagScheme::BIO;
  double reproduced_fraction = 0;  // decoded count / gold count
  double exact_fraction = 0;       // gold segments recovered with identical boundaries
};

// Retime -> encode -> decode -> retime back, for every fps and both schemes.
inline std::vector<FidelityRow> fidelity_experiment(const std::vector<Segment>& gold,
                                                    const std::vector<double>& fps_list,
                                                    double src_fps) {
  const auto sorted_gold = sorted_segments(gold);
  for (std::size_t i = 1; i < sorted_gold.size(); ++i)
    if (sorted_gold[i].start < sorted_gold[i - 1].end)
      throw Error("bio-fidelity", "gold segments overlap");
  std::vector<FidelityRow> rows;
  for (double fps : fps_list) {
    const auto moved = retime_segments(sorted_gold, src_fps, fps);
    std::int64_t frames = 0;
    for (const auto& s : moved) frames = std::max(frames, s.end);
    for (TagScheme scheme : {TagScheme::BIO, TagScheme::IO}) {
      const auto tags = encode_tags(moved, static_cast<std::size_t>(frames), scheme);
      const auto decoded = decode_gold_tags(tags, scheme);
      const auto back = retime_segments(decoded, fps, src_fps);
      std::size_t exact = 0;
      for (const auto& g : sorted_gold) {
        auto it = std::lower_bound(back.begin(), back.end(), g.start,
                                   [](const Segment& s, std::int64_t v) { return s.start < v; });
        if (it != back.end() && it->start == g.start && it->end == g.end) ++exact;
      }
      const double n = sorted_gold.empty() ? 1.0 : static_cast<double>(sorted_gold.size());
      rows.push_back({fps, scheme,
                      sorted_gold.empty() ? 1.0 : static_cast<double>(decoded.size()) / n,
                      sorted_gold.empty() ? 1.0 : static_cast<double>(exact) / n});
    }
  }
  return rows;
}

}  // namespace signseg
