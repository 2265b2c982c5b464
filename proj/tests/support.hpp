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

// Shared generators and fixtures for the test binaries.

#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "signseg/hand.hpp"
#include "signseg/pose.hpp"
#include "signseg/tags.hpp"

namespace signseg::testing {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(rng_); }
  double normal() { return std::normal_distribution<double>(0, 1)(rng_); }

  Vec3 vec(double lo = -1, double hi = 1) { return {uniform(lo, hi), uniform(lo, hi), uniform(lo, hi)}; }

  // Uniformly distributed rotation (unit quaternion) as a 3x3 matrix.
  std::array<std::array<double, 3>, 3> rotation() {
    double q[4];
    double n = 0;
    for (double& v : q) {
      v = normal();
      n += v * v;
    }
    n = std::sqrt(n);
    const double w = q[0] / n, x = q[1] / n, y = q[2] / n, z = q[3] / n;
    return {{{1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)},
             {2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)},
             {2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)}}};
  }

  // Random non-overlapping segments in [0, frames).
  std::vector<Segment> segments(std::int64_t frames, double density = 0.3, int max_len = 6) {
    std::vector<Segment> out;
    std::int64_t t = 0;
    while (t < frames) {
      if (coin(density)) {
        const std::int64_t len = std::min<std::int64_t>(integer(1, max_len), frames - t);
        out.push_back({t, t + len, Tier::Sign});
        t += len;
      } else {
        ++t;
      }
    }
    return out;
  }

  // Random probability row (b, i, o) summing to 1.
  ProbRow prob_row() {
    ProbRow r{uniform(0.01, 1), uniform(0.01, 1), uniform(0.01, 1)};
    const double s = r[0] + r[1] + r[2];
    for (auto& v : r) v /= s;
    return r;
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

using Mat3x3 = std::array<std::array<double, 3>, 3>;

inline Vec3 apply(const Mat3x3& r, Vec3 v) {
  return {r[0][0] * v.x + r[0][1] * v.y + r[0][2] * v.z, r[1][0] * v.x + r[1][1] * v.y + r[1][2] * v.z,
          r[2][0] * v.x + r[2][1] * v.y + r[2][2] * v.z};
}

inline HandPose transform_hand(const HandPose& h, const Mat3x3& r, double scale, Vec3 shift) {
  HandPose out = h;
  for (auto& p : out.points) p = apply(r, p) * scale + shift;
  return out;
}

// A random plausible hand: template landmarks with per-point perturbation.
inline HandPose random_hand(Gen& g, double wobble = 0.15) {
  HandPose h;
  const double mcp_x[4] = {-0.3, -0.1, 0.1, 0.3};
  h.points[0] = {0, 0, 0};
  for (int j = 1; j <= 4; ++j) h.points[static_cast<std::size_t>(j)] = {-0.2 - 0.15 * j, -0.2 * j, 0.02 * j};
  for (int f = 0; f < 4; ++f)
    for (int j = 0; j < 4; ++j)
      h.points[5 + static_cast<std::size_t>(f * 4 + j)] = {mcp_x[f] * (1 + 0.05 * j), -1.0 - 0.3 * j, 0.03 * j};
  for (std::size_t k = 1; k < 21; ++k) h.points[k] = h.points[k] + g.vec(-wobble, wobble);
  return h;
}

// Random pose sequence over a given header.
inline PoseSequence random_sequence(Gen& g, const PoseHeader& header, std::size_t frames,
                                    double missing_rate = 0.1) {
  PoseSequence seq = PoseSequence::empty_frames(header, frames);
  for (std::size_t t = 0; t < frames; ++t)
    for (std::size_t k = 0; k < seq.points(); ++k) {
      if (g.coin(missing_rate)) continue;
      seq.set_point(t, k, g.vec(-2, 2), g.uniform(0.05, 1.0));
    }
  return seq;
}

// A small header with a BODY component carrying both shoulders.
inline PoseHeader small_header(double fps = 25) {
  PoseHeader h;
  h.fps = fps;
  h.components.push_back({"BODY", {"NOSE", "LEFT_SHOULDER", "RIGHT_SHOULDER", "LEFT_HIP", "LEFT_WRIST"}});
  h.components.push_back({"EXTRA", {"A", "B"}});
  return h;
}

class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("signseg-" + tag + "-" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::string operator/(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

}  // namespace signseg::testing
