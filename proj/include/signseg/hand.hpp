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

// 3D hand normalization and the hand-geometry consistency benchmark.
//
// Hands follow the 21-landmark layout in hand_point_names(). Coordinates use
// the screen-style convention from pose.hpp (x right, y down, z toward the
// camera). Thresholds compare with strict '>'.

#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "signseg/pose.hpp"

namespace signseg {

enum class Handedness { Left, Right };

namespace hand_landmark {
inline constexpr std::size_t kWrist = 0;
inline constexpr std::size_t kIndexMcp = 5;
inline constexpr std::size_t kMiddleMcp = 9;
inline constexpr std::size_t kMiddleTip = 12;
inline constexpr std::size_t kPinkyMcp = 17;
inline constexpr std::size_t kCount = 21;
}  // namespace hand_landmark

struct HandPose {
  std::array<Vec3, hand_landmark::kCount> points{};
  Handedness handedness = Handedness::Right;

  Vec3 wrist() const { return points[hand_landmark::kWrist]; }
  Vec3 index_mcp() const { return points[hand_landmark::kIndexMcp]; }
  Vec3 middle_mcp() const { return points[hand_landmark::kMiddleMcp]; }
  Vec3 pinky_mcp() const { return points[hand_landmark::kPinkyMcp]; }
};

struct HandGroup {
  std::string label;
  std::vector<HandPose> members;
};

enum class HandPlane { Wall, Floor };
enum class HandView { Front, Sideways, Back };

inline const char* to_string(HandPlane p) { return p == HandPlane::Wall ? "wall" : "floor"; }
inline const char* to_string(HandView v) {
  switch (v) {
    case HandView::Front: return "front";
    case HandView::Sideways: return "sideways";
    default: return "back";
  }
}

inline constexpr double kMetacarpalLength = 200.0;

// Unit normal of the palm triangle WRIST -> I_MCP -> P_MCP (right-hand rule).
inline Vec3 palm_normal(const HandPose& h) {
  const Vec3 n = (h.index_mcp() - h.wrist()).cross(h.pinky_mcp() - h.wrist());
  const double len = n.norm();
  const double scale = std::max((h.index_mcp() - h.wrist()).norm(), (h.pinky_mcp() - h.wrist()).norm());
  if (!(len > 1e-12 * scale * scale) || !(scale > 0))
    throw Error("hand", "palm triangle is degenerate (collinear WRIST, I_MCP, P_MCP)");
  return n * (1.0 / len);
}

namespace detail {

// Row-major 3x3 rotation.
using Mat3 = std::array<double, 9>;

inline Vec3 apply(const Mat3& r, Vec3 v) {
  return {r[0] * v.x + r[1] * v.y + r[2] * v.z, r[3] * v.x + r[4] * v.y + r[5] * v.z,
          r[6] * v.x + r[7] * v.y + r[8] * v.z};
}

// Rotation taking unit vector `from` onto unit vector `to` (Rodrigues).
inline Mat3 rotation_between(Vec3 from, Vec3 to) {
  const Vec3 axis = from.cross(to);
  const double s = axis.norm();
  const double c = from.dot(to);
  if (s < 1e-15) {
    if (c > 0) return {1, 0, 0, 0, 1, 0, 0, 0, 1};
    // Antiparallel: half turn about any axis orthogonal to `from`.
    Vec3 ortho = std::abs(from.x) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
    Vec3 k = from.cross(ortho);
    k = k * (1.0 / k.norm());
    return {2 * k.x * k.x - 1, 2 * k.x * k.y,     2 * k.x * k.z,
            2 * k.y * k.x,     2 * k.y * k.y - 1, 2 * k.y * k.z,
            2 * k.z * k.x,     2 * k.z * k.y,     2 * k.z * k.z - 1};
  }
  const Vec3 k = axis * (1.0 / s);
  const double v = 1 - c;
  return {c + k.x * k.x * v,       k.x * k.y * v - k.z * s, k.x * k.z * v + k.y * s,
          k.y * k.x * v + k.z * s, c + k.y * k.y * v,       k.y * k.z * v - k.x * s,
          k.z * k.x * v - k.y * s, k.z * k.y * v + k.x * s, c + k.z * k.z * v};
}

inline HandPose transformed(const HandPose& h, const Mat3& r) {
  HandPose out = h;
  for (auto& p : out.points) p = apply(r, p);
  return out;
}

inline HandPose mirrored_x(const HandPose& h) {
  HandPose out = h;
  for (auto& p : out.points) p.x = -p.x;
  return out;
}

}  // namespace detail

// Canonical orientation: palm normal on +Z, WRIST->M_MCP on +Y, metacarpal
// length 200, WRIST at the origin. Left hands are mirrored across the YZ
// plane first so both hands share one canonical frame; the result is always
// labelled Right.
inline HandPose hand_normalize(const HandPose& input) {
  HandPose h = input.handedness == Handedness::Left ? detail::mirrored_x(input) : input;
  const double bone = (h.middle_mcp() - h.wrist()).norm();
  if (!(bone > 0)) throw Error("hand", "zero-length middle-finger metacarpal");

  // Rotate about the wrist so translation does not leak into the rotation.
  const Vec3 origin = h.wrist();
  for (auto& p : h.points) p = p - origin;

  h = detail::transformed(h, detail::rotation_between(palm_normal(h), {0, 0, 1}));

  const Vec3 m = h.middle_mcp();
  const double planar = std::hypot(m.x, m.y);
  if (!(planar > 1e-12 * bone))
    throw Error("hand", "middle-finger metacarpal is parallel to the palm normal");
  // Rotation about Z that maps (m.x, m.y) onto +Y.
  const double angle = std::atan2(m.x, m.y);
  const double c = std::cos(angle), s = std::sin(angle);
  h = detail::transformed(h, {c, -s, 0, s, c, 0, 0, 0, 1});

  const double scale = kMetacarpalLength / bone;
  for (auto& p : h.points) p = p * scale;
  // A mirrored left hand is expressed in the right-hand frame, which keeps
  // the operation idempotent for both hands.
  h.handedness = Handedness::Right;
  return h;
}

inline HandPlane estimate_plane(const HandPose& h) {
  const double y = std::abs(h.middle_mcp().y - h.wrist().y) * 1.5;
  const double z = std::abs(h.middle_mcp().z - h.wrist().z);
  return y > z ? HandPlane::Wall : HandPlane::Floor;
}

// atan2(v, u) in degrees; wall angles live in [0, 360), floor angles in [-180, 180).
inline double view_angle_degrees(double u, double v, HandPlane plane) {
  double a = std::atan2(v, u) * 180.0 / std::numbers::pi;
  if (plane == HandPlane::Wall) {
    if (a < 0) a += 360.0;
    if (a >= 360.0) a -= 360.0;
  } else if (a >= 180.0) {
    a -= 360.0;
  }
  return a;
}

inline HandView estimate_view(const HandPose& h) {
  const Vec3 n = palm_normal(h);
  const HandPlane plane = estimate_plane(h);
  if (plane == HandPlane::Wall) {
    const double a = view_angle_degrees(n.z, n.x, plane);
    return a > 210 ? HandView::Front : (a > 150 ? HandView::Sideways : HandView::Back);
  }
  const double a = view_angle_degrees(n.y, n.x, plane);
  return a > 0 ? HandView::Front : (a > -60 ? HandView::Sideways : HandView::Back);
}

// One of eight 45-degree bins of the WRIST->M_MCP direction in the XY plane,
// measured from +Y counterclockwise; bin 0 is centered on +Y.
inline int estimate_rotation(const HandPose& h) {
  const Vec3 d = h.middle_mcp() - h.wrist();
  if (!(std::hypot(d.x, d.y) > 0)) throw Error("hand", "metacarpal has no extent in the XY plane");
  // Counterclockwise from +Y: +Y -> 0, -X -> 90, -Y -> 180, +X -> 270.
  double theta = std::atan2(-d.x, d.y) * 180.0 / std::numbers::pi;
  if (theta < 0) theta += 360.0;
  // Snapped to 1e-9 degrees; bin edges are half-open.
  theta = std::round(theta * 1e9) / 1e9;
  double shifted = std::fmod(theta + 22.5, 360.0);
  if (shifted < 0) shifted += 360.0;
  const int bin = static_cast<int>(std::floor(shifted / 45.0));
  return bin % 8;
}

// Mean over the 21 x 3 coordinate slots of the population standard
// deviation across members.
inline double mean_landmark_std(const std::vector<HandPose>& members) {
  const double n = static_cast<double>(members.size());
  double total = 0;
  for (std::size_t k = 0; k < hand_landmark::kCount; ++k) {
    for (int axis = 0; axis < 3; ++axis) {
      auto coord = [&](const HandPose& h) {
        const Vec3 p = h.points[k];
        return axis == 0 ? p.x : (axis == 1 ? p.y : p.z);
      };
      double mean = 0;
      for (const auto& h : members) mean += coord(h);
      mean /= n;
      double var = 0;
      for (const auto& h : members) var += (coord(h) - mean) * (coord(h) - mean);
      total += std::sqrt(var / n);
    }
  }
  return total / static_cast<double>(hand_landmark::kCount * 3);
}

// Multi-angle consistency error: spread of fully normalized members.
inline double mace(const HandGroup& group) {
  if (group.members.size() < 2) throw Error("hand-bench", "MACE needs at least two members");
  std::vector<HandPose> normalized;
  normalized.reserve(group.members.size());
  for (const auto& h : group.members) normalized.push_back(hand_normalize(h));
  return mean_landmark_std(normalized);
}

// Crop consistency error: spread after moving each wrist to the origin.
inline double cce(const HandGroup& group) {
  if (group.members.size() < 2) throw Error("hand-bench", "CCE needs at least two members");
  std::vector<HandPose> aligned;
  aligned.reserve(group.members.size());
  for (const auto& h : group.members) {
    HandPose a = h;
    const Vec3 w = h.wrist();
    for (auto& p : a.points) p = p - w;
    aligned.push_back(a);
  }
  return mean_landmark_std(aligned);
}

// Extracts the hand component `component` at frame t. Returns nullopt when
// any landmark is untracked.
inline std::optional<HandPose> hand_at(const PoseSequence& seq, std::string_view component,
                                       std::size_t t) {
  const auto offset = seq.header().component_offset(component);
  if (!offset) return std::nullopt;
  if (seq.header().find(component)->points.size() != hand_landmark::kCount) return std::nullopt;
  HandPose h;
  h.handedness = component == kLeftHand ? Handedness::Left : Handedness::Right;
  for (std::size_t i = 0; i < hand_landmark::kCount; ++i) {
    if (!seq.tracked(t, *offset + i)) return std::nullopt;
    h.points[i] = seq.point(t, *offset + i);
  }
  return h;
}

}  // namespace signseg
