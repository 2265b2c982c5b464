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

// End-to-end feature pipeline: resample -> normalize -> select -> features,
// plus the glue that turns annotations into per-frame gold tags.

#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "signseg/decode.hpp"
#include "signseg/motion.hpp"
#include "signseg/pose.hpp"
#include "signseg/segments_io.hpp"
#include "signseg/tagger.hpp"

namespace signseg {

inline constexpr double kDefaultPipelineFps = 25.0;

struct PipelineOptions {
  double fps = kDefaultPipelineFps;
  PointSelector selector = body75_selector();
  FeatureOptions features;
};

inline nlohmann::json pipeline_to_json(const PipelineOptions& o) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& e : o.selector.entries)
    entries.push_back({{"component", e.component}, {"point", e.point ? nlohmann::json(*e.point) : nlohmann::json()}});
  return {{"fps", o.fps},
          {"selector", {{"name", o.selector.name}, {"entries", entries}}},
          {"features", {{"flow", o.features.include_flow}, {"handnorm", o.features.include_hand_norm}}}};
}

inline PipelineOptions pipeline_from_json(const nlohmann::json& j) {
  PipelineOptions o;
  if (j.is_null() || j.empty()) return o;
  try {
    o.fps = j.at("fps").get<double>();
    o.selector.name = j.at("selector").value("name", "");
    o.selector.entries.clear();
    for (const auto& e : j.at("selector").at("entries")) {
      PointSelector::Entry entry{e.at("component").get<std::string>(), std::nullopt};
      if (!e.at("point").is_null()) entry.point = e.at("point").get<std::string>();
      o.selector.entries.push_back(entry);
    }
    o.features.include_flow = j.at("features").at("flow").get<bool>();
    o.features.include_hand_norm = j.at("features").at("handnorm").get<bool>();
  } catch (const nlohmann::json::exception& e) {
    throw Error("pipeline", std::string("malformed pipeline description: ") + e.what());
  }
  return o;
}

// The pose sequence after resampling, normalization and point selection.
inline PoseSequence prepare_pose(const PoseSequence& raw, const PipelineOptions& o) {
  const PoseSequence resampled = resample_fps(raw, o.fps);
  const PoseSequence normalized = normalize_pose(resampled);
  return select_points(normalized, o.selector);
}

inline FeatureMatrix pipeline_features(const PoseSequence& raw, const PipelineOptions& o) {
  return assemble_features(prepare_pose(raw, o), o.features);
}

inline std::size_t pipeline_feature_width(const PoseHeader& raw_header, const PipelineOptions& o) {
  const auto [indices, header] = resolve_selector(raw_header, o.selector);
  (void)header;
  return feature_layout(indices.size(), o.features).width();
}

// Gold segments moved to the pipeline frame rate and clipped to `frames`.
inline std::vector<Segment> gold_segments_at(const Annotation& a, Tier tier, double fps,
                                             std::size_t frames) {
  std::vector<Segment> out;
  const auto limit = static_cast<std::int64_t>(frames);
  for (auto s : retime_segments(a.tier(tier), a.fps, fps)) {
    s.end = std::min(s.end, limit);
    if (s.start < s.end) out.push_back(s);
  }
  return out;
}

inline GoldTags gold_tags_for(const Annotation& a, double fps, std::size_t frames) {
  GoldTags g;
  g.sign = encode_tags(gold_segments_at(a, Tier::Sign, fps, frames), frames, TagScheme::BIO, Tier::Sign, fps).tags;
  g.phrase = encode_tags(gold_segments_at(a, Tier::Phrase, fps, frames), frames, TagScheme::BIO, Tier::Phrase, fps).tags;
  return g;
}

// Decodes both tiers into an annotation at the pipeline frame rate.
inline Annotation decode_annotation(const FrameProbs& probs, const DecodeParams& sign_params,
                                    const DecodeParams& phrase_params, double fps) {
  Annotation a;
  a.fps = fps;
  a.sign = decode_segments(to_percent(probs.sign), sign_params, Tier::Sign);
  a.phrase = decode_segments(to_percent(probs.phrase), phrase_params, Tier::Phrase);
  return a;
}

}  // namespace signseg
