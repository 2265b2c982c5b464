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

// Synthetic signing: a holistic skeleton whose dominant hand moves only
// inside annotated signs. Signs within a phrase are separated by short holds,
// phrases by longer rests. Used by tests, demos and the acceptance suite.

#pragma once

#include <cmath>
#include <numbers>
#include <random>
#include <utility>

#include "signseg/hand.hpp"
#include "signseg/pose.hpp"
#include "signseg/segments_io.hpp"

namespace signseg {

struct SyntheticOptions {
  std::size_t frames = 100;
  double fps = 25.0;
  std::uint64_t seed = 1;
  bool with_face = false;
  double jitter = 0.001;      // per-coordinate noise on every tracked point
  double hand_speed = 0.06;   // distance per frame while signing
  int min_sign = 4, max_sign = 8;
  int min_hold = 2, max_hold = 3;
  int min_rest = 6, max_rest = 10;
  int max_signs_per_phrase = 3;
};

// A right hand with the MCP joints in the palm plane, palm facing -z.
inline HandPose template_hand() {
  HandPose h;
  h.handedness = Handedness::Right;
  const double mcp_x[4] = {-0.3, -0.1, 0.1, 0.3};
  h.points[0] = {0, 0, 0};
  h.points[1] = {-0.35, -0.2, 0.02};
  h.points[2] = {-0.5, -0.4, 0.04};
  h.points[3] = {-0.6, -0.6, 0.05};
  h.points[4] = {-0.7, -0.75, 0.06};
  for (int f = 0; f < 4; ++f) {
    const std::size_t base = 5 + static_cast<std::size_t>(f) * 4;
    const double x = mcp_x[f];
    h.points[base] = {x, -1.0, 0};
    h.points[base + 1] = {x * 1.05, -1.35, 0.05};
    h.points[base + 2] = {x * 1.1, -1.6, 0.08};
    h.points[base + 3] = {x * 1.12, -1.8, 0.1};
  }
  return h;
}

struct SyntheticSample {
  PoseSequence pose;
  Annotation gold;
};

inline SyntheticSample synthetic_signing(const SyntheticOptions& opt) {
  std::mt19937_64 rng(opt.seed);
  auto uniform_int = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  std::normal_distribution<double> noise(0.0, opt.jitter > 0 ? opt.jitter : 1.0);

  Annotation gold;
  gold.fps = opt.fps;
  const auto total = static_cast<std::int64_t>(opt.frames);
  std::vector<bool> moving(opt.frames, false);
  std::int64_t t = uniform_int(opt.min_rest / 2, opt.max_rest / 2);
  while (true) {
    const int signs = uniform_int(1, opt.max_signs_per_phrase);
    std::vector<Segment> phrase_signs;
    std::int64_t cursor = t;
    for (int s = 0; s < signs; ++s) {
      const int len = uniform_int(opt.min_sign, opt.max_sign);
      if (cursor + len >= total) break;
      phrase_signs.push_back({cursor, cursor + len, Tier::Sign});
      cursor += len + uniform_int(opt.min_hold, opt.max_hold);
    }
    if (phrase_signs.empty()) break;
    for (const auto& s : phrase_signs) {
      gold.sign.push_back(s);
      for (auto f = s.start; f < s.end; ++f) moving[static_cast<std::size_t>(f)] = true;
    }
    gold.phrase.push_back({phrase_signs.front().start, phrase_signs.back().end, Tier::Phrase});
    t = phrase_signs.back().end + uniform_int(opt.min_rest, opt.max_rest);
    if (t >= total) break;
  }

  PoseHeader header = holistic_header(opt.fps, opt.with_face);
  PoseSequence pose = PoseSequence::empty_frames(header, opt.frames);
  const auto body = *header.component_offset(kBody);
  const auto left = *header.component_offset(kLeftHand);
  const auto right = *header.component_offset(kRightHand);
  const auto face = header.component_offset(kFace);

  // Screen-style units: shoulders 0.3 apart around (0.5, 0.5).
  std::vector<Vec3> body_rest(body_point_names().size());
  for (std::size_t i = 0; i < body_rest.size(); ++i) {
    const double side = body_point_names()[i].starts_with("LEFT") ? 1.0 : -1.0;
    body_rest[i] = {0.5 + side * 0.15, 0.3 + 0.02 * static_cast<double>(i % 11), 0.0};
  }
  body_rest[11] = {0.65, 0.5, 0};  // LEFT_SHOULDER
  body_rest[12] = {0.35, 0.5, 0};  // RIGHT_SHOULDER

  const HandPose hand = template_hand();
  const double hand_scale = 0.05;
  Vec3 right_pos{0.4, 0.55, -0.1};
  const Vec3 left_pos{0.65, 0.8, -0.05};
  double angle = 0;
  const double radius = 0.08;
  for (std::size_t f = 0; f < opt.frames; ++f) {
    if (moving[f]) {
      angle += opt.hand_speed / radius;
      right_pos = Vec3{0.4 + radius * std::cos(angle), 0.55 + radius * std::sin(angle), -0.1};
    }
    auto jitter = [&](Vec3 p) {
      return opt.jitter > 0 ? Vec3{p.x + noise(rng), p.y + noise(rng), p.z + noise(rng)} : p;
    };
    for (std::size_t i = 0; i < body_rest.size(); ++i) {
      Vec3 p = body_rest[i];
      if (i == 16) p = right_pos;  // RIGHT_WRIST follows the hand
      pose.set_point(f, body + i, jitter(p), 1.0);
    }
    for (std::size_t i = 0; i < hand_landmark::kCount; ++i) {
      pose.set_point(f, right + i, jitter(right_pos + hand.points[i] * hand_scale), 1.0);
      Vec3 lp = hand.points[i] * hand_scale;
      lp.x = -lp.x;
      pose.set_point(f, left + i, jitter(left_pos + lp), 1.0);
    }
    if (face) {
      for (std::size_t i = 0; i < 468; ++i) {
        const double a = 2 * std::numbers::pi * static_cast<double>(i) / 468.0;
        pose.set_point(f, *face + i, jitter({0.5 + 0.08 * std::cos(a), 0.25 + 0.1 * std::sin(a), 0}), 1.0);
      }
    }
  }
  return {std::move(pose), std::move(gold)};
}

}  // namespace signseg
