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

// "poseseq-json/1" reader and writer.
//
//   { "version": "poseseq-json/1", "fps": 50.0,
//     "components": [{"name": "BODY", "points": ["NOSE", ...]}, ...],
//     "frames": [[[x, y, z, conf], ...K], ...T] }
//
// Numbers are written as the shortest decimal that round-trips.

#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <string_view>

#include <json.hpp>

#include "signseg/pose.hpp"

namespace signseg {

inline constexpr std::string_view kPoseFormatVersion = "poseseq-json/1";

inline PoseSequence parse_pose_json(std::string_view text) {
  using Json = nlohmann::ordered_json;
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::exception& e) {
    throw Error("parse", std::string("malformed pose document: ") + e.what());
  }
  try {
    if (!doc.is_object()) throw Error("parse", "pose document must be a JSON object");
    PoseHeader header;
    header.version = doc.at("version").get<std::string>();
    if (header.version != kPoseFormatVersion)
      throw Error("parse", "unsupported pose format version '" + header.version + "'");
    if (!doc.at("fps").is_number()) throw Error("parse", "fps must be a number");
    header.fps = doc.at("fps").get<double>();
    if (!(header.fps > 0)) throw Error("parse", "fps must be positive");
    for (const auto& c : doc.at("components")) {
      PoseComponent comp;
      comp.name = c.at("name").get<std::string>();
      comp.points = c.at("points").get<std::vector<std::string>>();
      header.components.push_back(std::move(comp));
    }
    header.validate();

    const std::size_t k = header.point_count();
    const auto& frames = doc.at("frames");
    if (!frames.is_array()) throw Error("parse", "frames must be an array");
    std::vector<double> coords;
    std::vector<double> conf;
    coords.reserve(frames.size() * k * 3);
    conf.reserve(frames.size() * k);
    std::size_t t = 0;
    for (const auto& frame : frames) {
      if (!frame.is_array() || frame.size() != k)
        throw Error("parse", "frame " + std::to_string(t) + " has " +
                                 std::to_string(frame.is_array() ? frame.size() : 0) +
                                 " points, header declares " + std::to_string(k));
      for (const auto& p : frame) {
        if (p.is_array() && p.size() == 3)
          throw Error("parse",
                      "points carry no z coordinate; 3D poses [x, y, z, conf] are required");
        if (!p.is_array() || p.size() != 4)
          throw Error("parse", "each point must be [x, y, z, conf]");
        for (int a = 0; a < 3; ++a) coords.push_back(p[a].get<double>());
        const double c = p[3].get<double>();
        if (!(c >= 0.0 && c <= 1.0)) throw Error("parse", "confidence outside [0, 1]");
        conf.push_back(c);
      }
      ++t;
    }
    return PoseSequence(std::move(header), std::move(coords), std::move(conf));
  } catch (const Json::exception& e) {
    throw Error("parse", std::string("malformed pose document: ") + e.what());
  }
}

inline std::string serialize_pose_json(const PoseSequence& seq) {
  using Json = nlohmann::ordered_json;
  for (double v : seq.coords())
    if (!std::isfinite(v)) throw Error("serialize", "refusing to serialize non-finite coordinate");
  for (double v : seq.confidences())
    if (!std::isfinite(v)) throw Error("serialize", "refusing to serialize non-finite confidence");

  Json doc;
  doc["version"] = seq.header().version;
  doc["fps"] = seq.fps();
  doc["components"] = Json::array();
  for (const auto& c : seq.header().components)
    doc["components"].push_back({{"name", c.name}, {"points", c.points}});
  Json frames = Json::array();
  for (std::size_t t = 0; t < seq.frames(); ++t) {
    Json frame = Json::array();
    for (std::size_t k = 0; k < seq.points(); ++k) {
      const Vec3 p = seq.point(t, k);
      frame.push_back(Json::array({p.x, p.y, p.z, seq.confidence(t, k)}));
    }
    frames.push_back(std::move(frame));
  }
  doc["frames"] = std::move(frames);
  return doc.dump();
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("io", "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text_file(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("io", "cannot write '" + path + "'");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
}

inline PoseSequence load_pose_file(const std::string& path) {
  return parse_pose_json(read_text_file(path));
}

// Selector file: {"name": str, "entries": [{"component": str,
// "points": "ALL" | [str, ...]}, ...]}
inline PointSelector parse_selector_json(std::string_view text) {
  try {
    const auto doc = nlohmann::json::parse(text);
    PointSelector sel;
    sel.name = doc.value("name", "");
    for (const auto& e : doc.at("entries")) {
      const auto component = e.at("component").get<std::string>();
      const auto& points = e.at("points");
      if (points.is_string()) {
        if (points.get<std::string>() != "ALL")
          throw Error("select", "points must be \"ALL\" or a list of names");
        sel.entries.push_back({component, std::nullopt});
      } else {
        for (const auto& p : points) sel.entries.push_back({component, p.get<std::string>()});
      }
    }
    return sel;
  } catch (const nlohmann::json::exception& e) {
    throw Error("select", std::string("malformed selector file: ") + e.what());
  }
}

inline PointSelector load_selector_file(const std::string& path) {
  return parse_selector_json(read_text_file(path));
}

}  // namespace signseg
