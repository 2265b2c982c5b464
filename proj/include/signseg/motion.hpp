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

// Keypoint optical flow and per-frame feature assembly.

#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "signseg/hand.hpp"
#include "signseg/pose.hpp"

namespace signseg {

// Per point, per frame motion magnitude in pose units per second.
struct FlowMatrix {
  std::size_t frames = 0;
  std::size_t points = 0;
  std::vector<double> values;  // frames x points
  std::vector<bool> mask;      // true where both frames are tracked

  double at(std::size_t t, std::size_t k) const { return values[t * points + k]; }
  bool valid(std::size_t t, std::size_t k) const { return mask[t * points + k]; }
};

// flow[t][k] = |p_k(t) - p_k(t-1)| * fps when both frames are tracked, else 0.
inline FlowMatrix optical_flow(const PoseSequence& seq) {
  FlowMatrix flow;
  flow.frames = seq.frames();
  flow.points = seq.points();
  flow.values.assign(flow.frames * flow.points, 0.0);
  flow.mask.assign(flow.frames * flow.points, false);
  for (std::size_t t = 1; t < seq.frames(); ++t) {
    for (std::size_t k = 0; k < seq.points(); ++k) {
      if (!seq.tracked(t, k) || !seq.tracked(t - 1, k)) continue;
      flow.values[t * flow.points + k] = (seq.point(t, k) - seq.point(t - 1, k)).norm() * seq.fps();
      flow.mask[t * flow.points + k] = true;
    }
  }
  return flow;
}

struct FeatureOptions {
  bool include_flow = true;
  bool include_hand_norm = false;

  friend bool operator==(const FeatureOptions&, const FeatureOptions&) = default;
};

enum class FeatureBlock { Coordinates, CoordinatesWithFlow, NormalizedHands };

struct FeatureLayout {
  struct Entry {
    FeatureBlock block;
    std::size_t width;
  };
  std::vector<Entry> blocks;

  std::size_t width() const {
    std::size_t w = 0;
    for (const auto& b : blocks) w += b.width;
    return w;
  }
};

inline FeatureLayout feature_layout(std::size_t points, const FeatureOptions& options) {
  FeatureLayout layout;
  if (options.include_flow)
    layout.blocks.push_back({FeatureBlock::CoordinatesWithFlow, points * 4});
  else
    layout.blocks.push_back({FeatureBlock::Coordinates, points * 3});
  if (options.include_hand_norm)
    layout.blocks.push_back({FeatureBlock::NormalizedHands, 2 * hand_landmark::kCount * 3});
  return layout;
}

struct FeatureMatrix {
  std::size_t frames = 0;
  std::size_t width = 0;
  std::vector<double> values;  // frames x width, row-major
  FeatureLayout layout;

  double at(std::size_t t, std::size_t f) const { return values[t * width + f]; }
};

// Per frame: x, y, z (and flow) for every point, then optionally both hands
// in canonical orientation. Untracked points and hands contribute zeros.
inline FeatureMatrix assemble_features(const PoseSequence& seq, const FeatureOptions& options) {
  if (options.include_hand_norm) {
    for (auto name : {kLeftHand, kRightHand}) {
      const PoseComponent* c = seq.header().find(name);
      if (!c || c->points.size() != hand_landmark::kCount)
        throw Error("features", "hand normalization requires a 21-point " + std::string(name) +
                                    " component");
    }
  }
  FeatureMatrix fm;
  fm.layout = feature_layout(seq.points(), options);
  fm.frames = seq.frames();
  fm.width = fm.layout.width();
  fm.values.assign(fm.frames * fm.width, 0.0);
  const FlowMatrix flow = options.include_flow ? optical_flow(seq) : FlowMatrix{};
  const std::size_t stride = options.include_flow ? 4 : 3;

  for (std::size_t t = 0; t < seq.frames(); ++t) {
    double* row = &fm.values[t * fm.width];
    for (std::size_t k = 0; k < seq.points(); ++k) {
      if (!seq.tracked(t, k)) continue;
      const Vec3 p = seq.point(t, k);
      row[k * stride + 0] = p.x;
      row[k * stride + 1] = p.y;
      row[k * stride + 2] = p.z;
      if (options.include_flow) row[k * stride + 3] = flow.at(t, k);
    }
    if (!options.include_hand_norm) continue;
    double* hands = row + seq.points() * stride;
    for (auto name : {kLeftHand, kRightHand}) {
      const auto hand = hand_at(seq, name, t);
      if (hand) {
        try {
          const HandPose norm = hand_normalize(*hand);
          // Scaled down so the canonical 200-unit bone is comparable to body units.
          for (std::size_t i = 0; i < hand_landmark::kCount; ++i) {
            hands[i * 3 + 0] = norm.points[i].x / kMetacarpalLength;
            hands[i * 3 + 1] = norm.points[i].y / kMetacarpalLength;
            hands[i * 3 + 2] = norm.points[i].z / kMetacarpalLength;
          }
        } catch (const Error&) {
          // Degenerate hands are treated as untracked.
        }
      }
      hands += hand_landmark::kCount * 3;
    }
  }
  return fm;
}

}  // namespace signseg
