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

// Segment annotations ("segments-json v1") and WebVTT output.
//
//   {"fps": 25.0, "tiers": {"sign": [{"start": 3, "end": 9}, ...], "phrase": [...]}}

#pragma once

#include <cstdio>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "signseg/tags.hpp"

namespace signseg {

struct Annotation {
  double fps = 25.0;
  std::vector<Segment> sign;
  std::vector<Segment> phrase;

  const std::vector<Segment>& tier(Tier t) const { return t == Tier::Sign ? sign : phrase; }
  std::vector<Segment>& tier(Tier t) { return t == Tier::Sign ? sign : phrase; }
};

inline Annotation parse_segments_json(std::string_view text) {
  try {
    const auto doc = nlohmann::json::parse(text);
    Annotation a;
    a.fps = doc.at("fps").get<double>();
    if (!(a.fps > 0)) throw Error("segments", "fps must be positive");
    const auto& tiers = doc.at("tiers");
    for (Tier tier : {Tier::Sign, Tier::Phrase}) {
      if (!tiers.contains(to_string(tier))) continue;
      for (const auto& s : tiers.at(to_string(tier))) {
        Segment seg{s.at("start").get<std::int64_t>(), s.at("end").get<std::int64_t>(), tier};
        if (seg.start < 0 || seg.end <= seg.start)
          throw Error("segments", "invalid segment [" + std::to_string(seg.start) + "," +
                                      std::to_string(seg.end) + ")");
        a.tier(tier).push_back(seg);
      }
      a.tier(tier) = sorted_segments(std::move(a.tier(tier)));
    }
    return a;
  } catch (const nlohmann::json::exception& e) {
    throw Error("segments", std::string("malformed segments document: ") + e.what());
  }
}

inline std::string serialize_segments_json(const Annotation& a) {
  nlohmann::ordered_json doc;
  doc["fps"] = a.fps;
  doc["tiers"] = nlohmann::ordered_json::object();
  for (Tier tier : {Tier::Sign, Tier::Phrase}) {
    auto list = nlohmann::ordered_json::array();
    for (const auto& s : a.tier(tier)) list.push_back({{"start", s.start}, {"end", s.end}});
    doc["tiers"][to_string(tier)] = std::move(list);
  }
  return doc.dump(2) + "\n";
}

// HH:MM:SS.mmm for a frame boundary.
inline std::string vtt_timestamp(std::int64_t frame, double fps) {
  const std::int64_t ms = round_half_away(static_cast<double>(frame) * 1000.0 / fps);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%02lld:%02lld:%02lld.%03lld",
                static_cast<long long>(ms / 3600000), static_cast<long long>(ms / 60000 % 60),
                static_cast<long long>(ms / 1000 % 60), static_cast<long long>(ms % 1000));
  return buf;
}

inline std::string to_webvtt(const std::vector<Segment>& segments, double fps, std::string_view label) {
  std::string out = "WEBVTT\n";
  int cue = 1;
  for (const auto& s : segments) {
    out += "\n" + std::to_string(cue) + "\n";
    out += vtt_timestamp(s.start, fps) + " --> " + vtt_timestamp(s.end, fps) + "\n";
    out += std::string(label) + " " + std::to_string(cue) + "\n";
    ++cue;
  }
  return out;
}

}  // namespace signseg
