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

// "tagger-ckpt/1" checkpoints.
//
// Line 1 is a JSON manifest:
//   {"version": "tagger-ckpt/1", "config": {...}, "parameter_count": N,
//    "parameter_count_formula": "...", "parameters": [{"name", "shape"}...],
//    "checksum": "crc32:xxxxxxxx", "pipeline": {...}}
// followed by one line per parameter: "<name> <base64>", where the payload is
// little-endian IEEE-754 float32 values in row-major order. The checksum is
// the CRC-32 of all payload bytes in manifest order.

#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>
#include <zlib.h>

#include "signseg/tagger.hpp"

namespace signseg {

inline constexpr std::string_view kCheckpointVersion = "tagger-ckpt/1";

namespace base64 {

inline constexpr char kAlphabet[] =
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

inline std::string encode(const std::vector<std::uint8_t>& bytes) {
  std::string out;
  out.reserve((bytes.size() + 2) / 3 * 4);
  std::size_t i = 0;
  for (; i + 2 < bytes.size(); i += 3) {
    const std::uint32_t v = (bytes[i] << 16) | (bytes[i + 1] << 8) | bytes[i + 2];
    out += kAlphabet[(v >> 18) & 63];
    out += kAlphabet[(v >> 12) & 63];
    out += kAlphabet[(v >> 6) & 63];
    out += kAlphabet[v & 63];
  }
  if (i < bytes.size()) {
    std::uint32_t v = bytes[i] << 16;
    if (i + 1 < bytes.size()) v |= bytes[i + 1] << 8;
    out += kAlphabet[(v >> 18) & 63];
    out += kAlphabet[(v >> 12) & 63];
    out += i + 1 < bytes.size() ? kAlphabet[(v >> 6) & 63] : '=';
    out += '=';
  }
  return out;
}

inline std::vector<std::uint8_t> decode(std::string_view text) {
  auto value = [](char c) -> int {
    if (c >= 'A' && c <= 'Z') return c - 'A';
    if (c >= 'a' && c <= 'z') return c - 'a' + 26;
    if (c >= '0' && c <= '9') return c - '0' + 52;
    if (c == '+') return 62;
    if (c == '/') return 63;
    return -1;
  };
  std::vector<std::uint8_t> out;
  std::uint32_t acc = 0;
  int bits = 0;
  for (char c : text) {
    if (c == '=') break;
    const int v = value(c);
    if (v < 0) throw Error("checkpoint", "invalid base64 payload");
    acc = (acc << 6) | static_cast<std::uint32_t>(v);
    bits += 6;
    if (bits >= 8) {
      bits -= 8;
      out.push_back(static_cast<std::uint8_t>((acc >> bits) & 0xFF));
    }
  }
  return out;
}

}  // namespace base64

inline nlohmann::json config_to_json(const TaggerConfig& c) {
  return {{"input_dim", c.input_dim},
          {"hidden_dim", c.hidden_dim},
          {"layers", c.layers},
          {"bidirectional", c.bidirectional},
          {"learning_rate", c.learning_rate},
          {"sign_weights", c.sign_weights},
          {"phrase_weights", c.phrase_weights},
          {"seed", c.seed},
          {"dropout", c.dropout},
          {"clip_norm", c.clip_norm}};
}

inline TaggerConfig config_from_json(const nlohmann::json& j) {
  TaggerConfig c;
  c.input_dim = j.at("input_dim").get<int>();
  c.hidden_dim = j.at("hidden_dim").get<int>();
  c.layers = j.at("layers").get<int>();
  c.bidirectional = j.at("bidirectional").get<bool>();
  c.learning_rate = j.at("learning_rate").get<double>();
  c.sign_weights = j.at("sign_weights").get<ClassWeights>();
  c.phrase_weights = j.at("phrase_weights").get<ClassWeights>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.dropout = j.value("dropout", 0.0);
  c.clip_norm = j.value("clip_norm", 0.0);
  c.validate();
  return c;
}

namespace detail {

inline std::vector<std::uint8_t> pack_float32(const Mat<float>& m) {
  std::vector<std::uint8_t> bytes;
  bytes.reserve(static_cast<std::size_t>(m.size()) * 4);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const auto bits = std::bit_cast<std::uint32_t>(m(i, j));
      for (int b = 0; b < 4; ++b) bytes.push_back(static_cast<std::uint8_t>(bits >> (8 * b)));
    }
  }
  return bytes;
}

inline void unpack_float32(const std::vector<std::uint8_t>& bytes, Mat<float>& m) {
  std::size_t k = 0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      std::uint32_t bits = 0;
      for (int b = 0; b < 4; ++b) bits |= static_cast<std::uint32_t>(bytes[k++]) << (8 * b);
      m(i, j) = std::bit_cast<float>(bits);
    }
  }
}

inline std::string crc_string(std::uint32_t crc) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "crc32:%08x", crc);
  return buf;
}

}  // namespace detail

inline std::string serialize_checkpoint(const Tagger& model,
                                        const nlohmann::json& pipeline = nlohmann::json::object()) {
  nlohmann::ordered_json manifest;
  manifest["version"] = kCheckpointVersion;
  manifest["config"] = config_to_json(model.config);
  manifest["parameter_count"] = model.config.parameter_count();
  manifest["parameter_count_formula"] = kParameterCountFormula;
  manifest["parameters"] = nlohmann::ordered_json::array();
  std::string body;
  uLong crc = crc32(0L, Z_NULL, 0);
  model.params.for_each([&](const std::string& name, const Mat<float>& m) {
    for (Eigen::Index k = 0; k < m.size(); ++k)
      if (!std::isfinite(m.data()[k])) throw Error("checkpoint", "parameter " + name + " is not finite");
    const auto bytes = detail::pack_float32(m);
    crc = crc32(crc, bytes.data(), static_cast<uInt>(bytes.size()));
    manifest["parameters"].push_back({{"name", name}, {"shape", {m.rows(), m.cols()}}});
    body += name + " " + base64::encode(bytes) + "\n";
  });
  manifest["checksum"] = detail::crc_string(static_cast<std::uint32_t>(crc));
  manifest["pipeline"] = pipeline;
  return manifest.dump() + "\n" + body;
}

struct LoadedCheckpoint {
  Tagger model;
  nlohmann::json pipeline;
};

inline LoadedCheckpoint parse_checkpoint(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line)) throw Error("checkpoint", "empty checkpoint");
  nlohmann::json manifest;
  try {
    manifest = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw Error("checkpoint", std::string("malformed manifest: ") + e.what());
  }
  const auto version = manifest.value("version", std::string());
  if (version != kCheckpointVersion)
    throw Error("checkpoint", "unsupported checkpoint version '" + version + "'");

  // Payload first: a truncated file shows up as a checksum failure.
  std::vector<std::pair<std::string, std::vector<std::uint8_t>>> blocks;
  uLong crc = crc32(0L, Z_NULL, 0);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto space = line.find(' ');
    if (space == std::string::npos) throw Error("checkpoint", "checksum mismatch (damaged parameter block)");
    auto bytes = base64::decode(std::string_view(line).substr(space + 1));
    crc = crc32(crc, bytes.data(), static_cast<uInt>(bytes.size()));
    blocks.emplace_back(line.substr(0, space), std::move(bytes));
  }
  if (detail::crc_string(static_cast<std::uint32_t>(crc)) != manifest.value("checksum", std::string()))
    throw Error("checkpoint", "checksum mismatch: file is truncated or corrupted");

  TaggerConfig config;
  try {
    config = config_from_json(manifest.at("config"));
  } catch (const nlohmann::json::exception& e) {
    throw Error("checkpoint", std::string("malformed config: ") + e.what());
  }
  if (manifest.value("parameter_count", std::int64_t{-1}) != config.parameter_count())
    throw Error("checkpoint", "manifest parameter_count does not match its config");

  Tagger model{config, TaggerParams<float>::zeros(config)};
  std::size_t idx = 0;
  model.params.for_each([&](const std::string& name, Mat<float>& m) {
    if (idx >= blocks.size() || blocks[idx].first != name)
      throw Error("checkpoint", "config does not match stored arrays: expected parameter " + name);
    const auto& bytes = blocks[idx].second;
    if (bytes.size() != static_cast<std::size_t>(m.size()) * 4)
      throw Error("checkpoint", "config does not match stored arrays: parameter " + name + " has " +
                                    std::to_string(bytes.size() / 4) + " values, expected " +
                                    std::to_string(m.size()));
    detail::unpack_float32(bytes, m);
    ++idx;
  });
  if (idx != blocks.size()) throw Error("checkpoint", "config does not match stored arrays: extra parameters");
  return {std::move(model), manifest.value("pipeline", nlohmann::json::object())};
}

inline void save_model(const Tagger& model, const std::string& path,
                       const nlohmann::json& pipeline = nlohmann::json::object()) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("checkpoint", "cannot write '" + path + "'");
  out << serialize_checkpoint(model, pipeline);
}

inline LoadedCheckpoint load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("checkpoint", "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_checkpoint(ss.str());
}

}  // namespace signseg
