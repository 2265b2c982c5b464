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

// Pose-sequence data model and the spatial/temporal transforms applied before
// feature extraction.
//
// Axis convention: screen-style, x to the right, y down, z toward the camera,
// which is what holistic pose estimators emit. Coordinates of points with
// confidence 0 are placeholders and are ignored by every consumer.

#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "signseg/common.hpp"

namespace signseg {

inline constexpr std::string_view kBody = "BODY";
inline constexpr std::string_view kFace = "FACE";
inline constexpr std::string_view kLeftHand = "LEFT_HAND";
inline constexpr std::string_view kRightHand = "RIGHT_HAND";

struct Vec3 {
  double x = 0, y = 0, z = 0;

  friend Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  friend Vec3 operator*(Vec3 a, double s) { return {a.x * s, a.y * s, a.z * s}; }
  friend Vec3 operator*(double s, Vec3 a) { return a * s; }
  friend bool operator==(const Vec3&, const Vec3&) = default;

  double dot(Vec3 o) const { return x * o.x + y * o.y + z * o.z; }
  Vec3 cross(Vec3 o) const {
    return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
  }
  double norm() const { return std::sqrt(dot(*this)); }
};

struct PoseComponent {
  std::string name;
  std::vector<std::string> points;

  friend bool operator==(const PoseComponent&, const PoseComponent&) = default;
};

struct PoseHeader {
  double fps = 25.0;
  std::vector<PoseComponent> components;
  std::string version = "poseseq-json/1";

  std::size_t point_count() const {
    std::size_t k = 0;
    for (const auto& c : components) k += c.points.size();
    return k;
  }

  // Index of the first point of `component` in the flattened point axis.
  std::optional<std::size_t> component_offset(std::string_view component) const {
    std::size_t offset = 0;
    for (const auto& c : components) {
      if (c.name == component) return offset;
      offset += c.points.size();
    }
    return std::nullopt;
  }

  const PoseComponent* find(std::string_view component) const {
    for (const auto& c : components)
      if (c.name == component) return &c;
    return nullptr;
  }

  std::optional<std::size_t> point_index(std::string_view component,
                                         std::string_view point) const {
    const PoseComponent* c = find(component);
    if (!c) return std::nullopt;
    auto it = std::find(c->points.begin(), c->points.end(), point);
    if (it == c->points.end()) return std::nullopt;
    return *component_offset(component) + static_cast<std::size_t>(it - c->points.begin());
  }

  void validate() const {
    if (!(fps > 0) || !std::isfinite(fps))
      throw Error("pose", "fps must be a positive finite number");
    std::set<std::string> names;
    for (const auto& c : components) {
      if (!names.insert(c.name).second)
        throw Error("pose", "duplicate component name '" + c.name + "'");
      std::set<std::string> pts;
      for (const auto& p : c.points)
        if (!pts.insert(p).second)
          throw Error("pose", "duplicate point '" + p + "' in component '" + c.name + "'");
    }
  }

  friend bool operator==(const PoseHeader&, const PoseHeader&) = default;
};

// T x K x 3 coordinates plus T x K confidences, row-major by frame.
class PoseSequence {
 public:
  PoseSequence() = default;

  PoseSequence(PoseHeader header, std::vector<double> coords, std::vector<double> confidence)
      : header_(std::move(header)), coords_(std::move(coords)), conf_(std::move(confidence)) {
    header_.validate();
    const std::size_t k = header_.point_count();
    if (coords_.size() != conf_.size() * 3)
      throw Error("pose", "coordinate and confidence arrays disagree in size");
    if (k == 0) {
      if (!conf_.empty()) throw Error("pose", "frames present but header declares no points");
      frames_ = 0;
    } else {
      if (conf_.size() % k != 0)
        throw Error("pose", "array size is not a multiple of the header point count");
      frames_ = conf_.size() / k;
    }
  }

  // Allocates T frames of untracked points.
  static PoseSequence empty_frames(PoseHeader header, std::size_t frames) {
    const std::size_t k = header.point_count();
    return PoseSequence(std::move(header), std::vector<double>(frames * k * 3, 0.0),
                        std::vector<double>(frames * k, 0.0));
  }

  const PoseHeader& header() const { return header_; }
  double fps() const { return header_.fps; }
  std::size_t frames() const { return frames_; }
  std::size_t points() const { return header_.point_count(); }

  Vec3 point(std::size_t t, std::size_t k) const {
    const double* p = &coords_[(t * points() + k) * 3];
    return {p[0], p[1], p[2]};
  }
  double confidence(std::size_t t, std::size_t k) const { return conf_[t * points() + k]; }
  bool tracked(std::size_t t, std::size_t k) const { return confidence(t, k) > 0.0; }

  void set_point(std::size_t t, std::size_t k, Vec3 v, double conf) {
    double* p = &coords_[(t * points() + k) * 3];
    p[0] = v.x;
    p[1] = v.y;
    p[2] = v.z;
    conf_[t * points() + k] = conf;
  }

  std::span<const double> coords() const { return coords_; }
  std::span<const double> confidences() const { return conf_; }

  friend bool operator==(const PoseSequence& a, const PoseSequence& b) {
    return a.header_ == b.header_ && a.coords_ == b.coords_ && a.conf_ == b.conf_;
  }

 private:
  PoseHeader header_;
  std::vector<double> coords_;
  std::vector<double> conf_;
  std::size_t frames_ = 0;
};

// ---------------------------------------------------------------------------
// Holistic layout: 33 body points, optional 468 face points, two 21-point hands.

inline const std::vector<std::string>& body_point_names() {
  static const std::vector<std::string> names = {
      "NOSE", "LEFT_EYE_INNER", "LEFT_EYE", "LEFT_EYE_OUTER", "RIGHT_EYE_INNER",
      "RIGHT_EYE", "RIGHT_EYE_OUTER", "LEFT_EAR", "RIGHT_EAR", "MOUTH_LEFT",
      "MOUTH_RIGHT", "LEFT_SHOULDER", "RIGHT_SHOULDER", "LEFT_ELBOW", "RIGHT_ELBOW",
      "LEFT_WRIST", "RIGHT_WRIST", "LEFT_PINKY", "RIGHT_PINKY", "LEFT_INDEX",
      "RIGHT_INDEX", "LEFT_THUMB", "RIGHT_THUMB", "LEFT_HIP", "RIGHT_HIP",
      "LEFT_KNEE", "RIGHT_KNEE", "LEFT_ANKLE", "RIGHT_ANKLE", "LEFT_HEEL",
      "RIGHT_HEEL", "LEFT_FOOT_INDEX", "RIGHT_FOOT_INDEX"};
  return names;
}

inline const std::vector<std::string>& hand_point_names() {
  static const std::vector<std::string> names = {
      "WRIST", "T_CMC", "T_MCP", "T_IP",  "T_TIP", "I_MCP", "I_PIP",
      "I_DIP", "I_TIP", "M_MCP", "M_PIP", "M_DIP", "M_TIP", "R_MCP",
      "R_PIP", "R_DIP", "R_TIP", "P_MCP", "P_PIP", "P_DIP", "P_TIP"};
  return names;
}

inline PoseHeader holistic_header(double fps, bool with_face = false) {
  PoseHeader h;
  h.fps = fps;
  h.components.push_back({std::string(kBody), body_point_names()});
  if (with_face) {
    std::vector<std::string> face;
    for (int i = 0; i < 468; ++i) face.push_back(std::to_string(i));
    h.components.push_back({std::string(kFace), std::move(face)});
  }
  h.components.push_back({std::string(kLeftHand), hand_point_names()});
  h.components.push_back({std::string(kRightHand), hand_point_names()});
  return h;
}

inline bool is_leg_point(std::string_view name) {
  for (std::string_view part : {"HIP", "KNEE", "ANKLE", "HEEL", "FOOT_INDEX"})
    if (name.find(part) != std::string_view::npos) return true;
  return false;
}

// ---------------------------------------------------------------------------
// Temporal resampling.

// Output frame i holds input frame floor(i * src / target) (sample and hold),
// clamped to the last frame. Output length is round(T * target / src).
inline PoseSequence resample_fps(const PoseSequence& seq, double target_fps) {
  if (!(target_fps > 0) || !std::isfinite(target_fps))
    throw Error("resample", "target fps must be positive");
  const double src = seq.fps();
  PoseHeader header = seq.header();
  header.fps = target_fps;
  if (src == target_fps) return PoseSequence(header, {seq.coords().begin(), seq.coords().end()},
                                             {seq.confidences().begin(), seq.confidences().end()});

  const std::size_t t_in = seq.frames();
  const std::size_t k = seq.points();
  const auto t_out = static_cast<std::size_t>(
      std::max<std::int64_t>(0, round_half_away(static_cast<double>(t_in) * target_fps / src)));
  std::vector<double> coords(t_out * k * 3);
  std::vector<double> conf(t_out * k);
  for (std::size_t i = 0; i < t_out; ++i) {
    // The small epsilon keeps exact ratios like 2 * 25 / 50 from landing below 1.
    auto j = static_cast<std::size_t>(std::floor(static_cast<double>(i) * src / target_fps + 1e-9));
    j = std::min(j, t_in - 1);
    std::copy_n(seq.coords().begin() + static_cast<std::ptrdiff_t>(j * k * 3), k * 3,
                coords.begin() + static_cast<std::ptrdiff_t>(i * k * 3));
    std::copy_n(seq.confidences().begin() + static_cast<std::ptrdiff_t>(j * k), k,
                conf.begin() + static_cast<std::ptrdiff_t>(i * k));
  }
  return PoseSequence(std::move(header), std::move(coords), std::move(conf));
}

// ---------------------------------------------------------------------------
// Spatial normalization.

struct ShoulderStats {
  double mean_distance = 0;
  Vec3 mean_midpoint;
};

// Weighted by the product of both shoulder confidences; frames where either
// shoulder is untracked contribute nothing.
inline ShoulderStats shoulder_stats(const PoseSequence& seq) {
  const auto left = seq.header().point_index(kBody, "LEFT_SHOULDER");
  const auto right = seq.header().point_index(kBody, "RIGHT_SHOULDER");
  if (!left || !right)
    throw Error("normalize", "BODY component with LEFT_SHOULDER and RIGHT_SHOULDER is required");
  double weight = 0, dist = 0;
  Vec3 mid;
  for (std::size_t t = 0; t < seq.frames(); ++t) {
    const double w = seq.confidence(t, *left) * seq.confidence(t, *right);
    if (!(w > 0)) continue;
    const Vec3 a = seq.point(t, *left), b = seq.point(t, *right);
    weight += w;
    dist += w * (a - b).norm();
    mid = mid + w * 0.5 * (a + b);
  }
  if (!(weight > 0)) throw Error("normalize", "shoulders are never tracked");
  return {dist / weight, mid * (1.0 / weight)};
}

// Scales the sequence so the mean shoulder width is 1, moves the mean shoulder
// midpoint to the origin, and hides leg points (confidence 0, zero coords).
// Leg points stay in the layout so the 33-point body keeps its indices.
inline PoseSequence normalize_pose(const PoseSequence& seq) {
  if (seq.frames() == 0) {
    if (!seq.header().point_index(kBody, "LEFT_SHOULDER") ||
        !seq.header().point_index(kBody, "RIGHT_SHOULDER"))
      throw Error("normalize", "BODY component with LEFT_SHOULDER and RIGHT_SHOULDER is required");
    return seq;
  }
  const ShoulderStats stats = shoulder_stats(seq);
  if (!(stats.mean_distance > 0)) throw Error("normalize", "mean shoulder distance is zero");
  const double scale = 1.0 / stats.mean_distance;

  std::vector<bool> leg(seq.points(), false);
  if (const auto offset = seq.header().component_offset(kBody)) {
    const auto& names = seq.header().find(kBody)->points;
    for (std::size_t i = 0; i < names.size(); ++i) leg[*offset + i] = is_leg_point(names[i]);
  }

  PoseSequence out = PoseSequence::empty_frames(seq.header(), seq.frames());
  for (std::size_t t = 0; t < seq.frames(); ++t) {
    for (std::size_t k = 0; k < seq.points(); ++k) {
      if (leg[k] || !seq.tracked(t, k)) continue;
      out.set_point(t, k, (seq.point(t, k) - stats.mean_midpoint) * scale, seq.confidence(t, k));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Point selection.

struct PointSelector {
  struct Entry {
    std::string component;
    std::optional<std::string> point;  // nullopt selects every point

    friend bool operator==(const Entry&, const Entry&) = default;
  };

  std::string name;
  std::vector<Entry> entries;
};

// BODY plus both hands: 33 + 21 + 21 = 75 points in the holistic layout.
inline PointSelector body75_selector() {
  return {"body75",
          {{std::string(kBody), std::nullopt},
           {std::string(kLeftHand), std::nullopt},
           {std::string(kRightHand), std::nullopt}}};
}

inline PointSelector all_points_selector(const PoseHeader& header) {
  PointSelector sel{"all", {}};
  for (const auto& c : header.components) sel.entries.push_back({c.name, std::nullopt});
  return sel;
}

// Resolves `sel` against `header`: the flattened indices of selected points
// and the header describing them. Consecutive entries on one component are
// kept in one output component.
inline std::pair<std::vector<std::size_t>, PoseHeader> resolve_selector(const PoseHeader& header,
                                                                        const PointSelector& sel) {
  std::vector<std::size_t> indices;
  PoseHeader out;
  out.fps = header.fps;
  out.version = header.version;
  for (const auto& e : sel.entries) {
    const PoseComponent* comp = header.find(e.component);
    if (!comp) throw Error("select", "selector references missing component '" + e.component + "'");
    if (out.components.empty() || out.components.back().name != e.component)
      out.components.push_back({e.component, {}});
    auto& dst = out.components.back().points;
    const std::size_t offset = *header.component_offset(e.component);
    if (!e.point) {
      if (comp->points.empty())
        throw Error("select", "component '" + e.component + "' has no points");
      for (std::size_t i = 0; i < comp->points.size(); ++i) {
        indices.push_back(offset + i);
        dst.push_back(comp->points[i]);
      }
    } else {
      auto idx = header.point_index(e.component, *e.point);
      if (!idx)
        throw Error("select", "selector references missing point '" + e.component + "/" +
                                  *e.point + "'");
      indices.push_back(*idx);
      dst.push_back(*e.point);
    }
  }
  out.validate();
  return {std::move(indices), std::move(out)};
}

inline PoseSequence select_points(const PoseSequence& seq, const PointSelector& sel) {
  auto [indices, header] = resolve_selector(seq.header(), sel);
  const std::size_t k = indices.size();
  std::vector<double> coords(seq.frames() * k * 3);
  std::vector<double> conf(seq.frames() * k);
  for (std::size_t t = 0; t < seq.frames(); ++t) {
    for (std::size_t j = 0; j < k; ++j) {
      const Vec3 p = seq.point(t, indices[j]);
      coords[(t * k + j) * 3 + 0] = p.x;
      coords[(t * k + j) * 3 + 1] = p.y;
      coords[(t * k + j) * 3 + 2] = p.z;
      conf[t * k + j] = seq.confidence(t, indices[j]);
    }
  }
  return PoseSequence(std::move(header), std::move(coords), std::move(conf));
}

}  // namespace signseg
