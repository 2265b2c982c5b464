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

// Subcommand implementations. Kept out of main() so tests can drive them.

#pragma once

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "signseg/checkpoint.hpp"
#include "signseg/decode.hpp"
#include "signseg/hand.hpp"
#include "signseg/metrics.hpp"
#include "signseg/pipeline.hpp"
#include "signseg/pose_io.hpp"
#include "signseg/segments_io.hpp"
#include "signseg/synthetic.hpp"
#include "signseg/training.hpp"

namespace signseg::cli {

namespace fs = std::filesystem;

inline std::string config_dir() {
#ifdef SIGNSEG_CONFIG_DIR
  if (const char* env = std::getenv("SIGNSEG_CONFIG_DIR")) return env;
  return SIGNSEG_CONFIG_DIR;
#else
  if (const char* env = std::getenv("SIGNSEG_CONFIG_DIR")) return env;
  return "config";
#endif
}

// "body75", "face-contour-128", a selector JSON path, or a comma-separated
// concatenation of those.
inline PointSelector resolve_selector_spec(const std::string& spec) {
  PointSelector out;
  out.name = spec;
  std::stringstream ss(spec);
  std::string part;
  while (std::getline(ss, part, ',')) {
    PointSelector sel;
    if (part == "body75") {
      sel = body75_selector();
    } else if (part == "face-contour-128") {
      sel = load_selector_file((fs::path(config_dir()) / "face_contour_128.json").string());
    } else if (fs::exists(part)) {
      sel = load_selector_file(part);
    } else {
      throw Error("select", "unknown selector '" + part + "'");
    }
    out.entries.insert(out.entries.end(), sel.entries.begin(), sel.entries.end());
  }
  if (out.entries.empty()) throw Error("select", "empty selector");
  return out;
}

inline FeatureOptions parse_feature_list(const std::string& list) {
  FeatureOptions o{false, false};
  std::stringstream ss(list);
  std::string part;
  while (std::getline(ss, part, ',')) {
    if (part == "flow") o.include_flow = true;
    else if (part == "handnorm") o.include_hand_norm = true;
    else if (part == "none" || part.empty()) continue;
    else throw Error("features", "unknown feature '" + part + "' (expected flow, handnorm or none)");
  }
  return o;
}

inline std::string feature_list(const FeatureOptions& o) {
  std::string s;
  if (o.include_flow) s += "flow";
  if (o.include_hand_norm) s += s.empty() ? "handnorm" : ",handnorm";
  return s.empty() ? "none" : s;
}

inline std::string stem_of(const fs::path& p, std::string_view suffix) {
  std::string name = p.filename().string();
  if (name.size() > suffix.size() && name.ends_with(suffix)) return name.substr(0, name.size() - suffix.size());
  return p.stem().string();
}

inline void write_run_config(const fs::path& dir, const nlohmann::ordered_json& config) {
  fs::create_directories(dir);
  write_text_file((dir / "run-config.json").string(), config.dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// Data directories: <stem>.pose.json paired with <stem>.segments.json.

struct DataPair {
  std::string stem;
  fs::path pose;
  fs::path segments;
};

inline std::vector<DataPair> find_pairs(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw Error("data", "data directory '" + dir.string() + "' does not exist");
  std::map<std::string, DataPair> by_stem;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const auto name = entry.path().filename().string();
    if (name.ends_with(".pose.json")) {
      auto& p = by_stem[stem_of(entry.path(), ".pose.json")];
      p.pose = entry.path();
    } else if (name.ends_with(".segments.json")) {
      auto& p = by_stem[stem_of(entry.path(), ".segments.json")];
      p.segments = entry.path();
    }
  }
  std::vector<DataPair> pairs;
  std::vector<std::string> missing;
  for (auto& [stem, p] : by_stem) {
    p.stem = stem;
    if (p.pose.empty()) missing.push_back(stem + ".pose.json");
    else if (p.segments.empty()) missing.push_back(stem + ".segments.json");
    else pairs.push_back(p);
  }
  if (!missing.empty()) {
    std::string msg = "unpaired files, missing:";
    for (const auto& m : missing) msg += " " + m;
    throw Error("data", msg);
  }
  if (pairs.empty()) throw Error("data", "no <name>.pose.json / <name>.segments.json pairs in '" + dir.string() + "'");
  return pairs;
}

inline std::vector<TrainingExample> load_examples(const std::vector<DataPair>& pairs, const PipelineOptions& po) {
  std::vector<TrainingExample> out;
  for (const auto& p : pairs) {
    const auto features = pipeline_features(load_pose_file(p.pose.string()), po);
    const auto gold = parse_segments_json(read_text_file(p.segments.string()));
    out.push_back({p.stem, features, gold_tags_for(gold, po.fps, features.frames)});
  }
  return out;
}

// ---------------------------------------------------------------------------
// segment

struct SegmentArgs {
  std::vector<std::string> inputs;
  std::string model;
  std::string out_dir = ".";
  DecodeParams sign_params;
  DecodeParams phrase_params;
  std::optional<double> fps;
  std::optional<std::string> selector;
  std::optional<std::string> features;
  bool emit_probs = false;
  int workers = 1;
};

struct PipelineFromModel {
  PipelineOptions options;
  Tagger model;
};

inline PipelineFromModel load_pipeline(const std::string& model_path, const std::optional<double>& fps,
                                       const std::optional<std::string>& selector,
                                       const std::optional<std::string>& features) {
  auto ckpt = load_model(model_path);
  PipelineOptions po = pipeline_from_json(ckpt.pipeline);
  if (fps) po.fps = *fps;
  if (selector) po.selector = resolve_selector_spec(*selector);
  if (features) po.features = parse_feature_list(*features);
  return {po, std::move(ckpt.model)};
}

inline nlohmann::ordered_json probs_to_json(const FrameProbs& probs, double fps) {
  nlohmann::ordered_json j;
  j["fps"] = fps;
  j["tiers"]["sign"] = probs.sign;
  j["tiers"]["phrase"] = probs.phrase;
  return j;
}

inline FrameProbs probs_from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    FrameProbs p;
    p.sign = j.at("tiers").at("sign").get<std::vector<ProbRow>>();
    p.phrase = j.at("tiers").at("phrase").get<std::vector<ProbRow>>();
    if (p.sign.size() != p.phrase.size()) throw Error("probs", "tiers disagree in frame count");
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw Error("probs", std::string("malformed probabilities file: ") + e.what());
  }
}

// Segments one pose sequence. Returns the decoded annotation.
inline Annotation segment_sequence(const PoseSequence& raw, const PipelineFromModel& pm,
                                   const DecodeParams& sign_params, const DecodeParams& phrase_params,
                                   FrameProbs* probs_out = nullptr) {
  const auto& po = pm.options;
  const std::size_t width = pipeline_feature_width(raw.header(), po);
  if (width != static_cast<std::size_t>(pm.model.config.input_dim))
    throw Error("features", "assembled feature width " + std::to_string(width) +
                                " does not match checkpoint input_dim " +
                                std::to_string(pm.model.config.input_dim));
  if (raw.frames() == 0) {
    Annotation empty;
    empty.fps = po.fps;
    if (probs_out) *probs_out = {};
    return empty;
  }
  const auto features = pipeline_features(raw, po);
  const FrameProbs probs = predict(pm.model, features);
  if (probs_out) *probs_out = probs;
  return decode_annotation(probs, sign_params, phrase_params, po.fps);
}

inline int run_segment(const SegmentArgs& args, std::ostream& err = std::cerr) {
  if (args.inputs.empty()) throw Error("segment", "no input pose files");
  const auto pm = load_pipeline(args.model, args.fps, args.selector, args.features);
  fs::create_directories(args.out_dir);

  nlohmann::ordered_json run;
  run["command"] = "segment";
  run["inputs"] = args.inputs;
  run["model"] = args.model;
  run["pipeline"] = pipeline_to_json(pm.options);
  run["sign_decode"] = {{"threshold_b", args.sign_params.threshold_b},
                        {"threshold_o", args.sign_params.threshold_o},
                        {"mode", args.sign_params.mode == DecodeMode::Argmax ? "argmax" : "threshold"},
                        {"strict_bio", args.sign_params.strict_bio}};
  run["phrase_decode"] = {{"threshold_b", args.phrase_params.threshold_b},
                          {"threshold_o", args.phrase_params.threshold_o},
                          {"mode", args.phrase_params.mode == DecodeMode::Argmax ? "argmax" : "threshold"},
                          {"strict_bio", args.phrase_params.strict_bio}};
  write_run_config(args.out_dir, run);

  std::mutex write_mutex;
  std::atomic<std::size_t> next{0};
  std::atomic<int> failures{0};
  auto worker = [&]() {
    for (std::size_t i = next++; i < args.inputs.size(); i = next++) {
      const fs::path input = args.inputs[i];
      try {
        const auto raw = load_pose_file(input.string());
        FrameProbs probs;
        const auto annotation = segment_sequence(raw, pm, args.sign_params, args.phrase_params, &probs);
        const std::string stem = stem_of(input, ".pose.json");
        const fs::path base = fs::path(args.out_dir) / stem;
        std::lock_guard lock(write_mutex);
        write_text_file(base.string() + ".segments.json", serialize_segments_json(annotation));
        write_text_file(base.string() + ".phrase.vtt", to_webvtt(annotation.phrase, annotation.fps, "phrase"));
        write_text_file(base.string() + ".sign.vtt", to_webvtt(annotation.sign, annotation.fps, "sign"));
        if (args.emit_probs)
          write_text_file(base.string() + ".probs.json", probs_to_json(probs, pm.options.fps).dump() + "\n");
      } catch (const Error& e) {
        std::lock_guard lock(write_mutex);
        err << "segment: " << e.stage() << ": " << input.string() << ": " << e.what() << "\n";
        ++failures;
      }
    }
  };
  const int n = std::max(1, std::min<int>(args.workers, static_cast<int>(args.inputs.size())));
  std::vector<std::thread> pool;
  for (int w = 1; w < n; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return failures == 0 ? 0 : 1;
}

// ---------------------------------------------------------------------------
// train

struct TrainArgs {
  std::string data_dir;
  std::string val_dir;
  std::string out_dir = "run";
  PipelineOptions pipeline;
  std::string selector_spec = "body75";
  TaggerConfig config;
  TrainOptions options;
};

inline int run_train(const TrainArgs& args, std::ostream& log = std::cerr) {
  const auto train_pairs = find_pairs(args.data_dir);
  const auto train = load_examples(train_pairs, args.pipeline);
  std::vector<TrainingExample> val;
  if (!args.val_dir.empty()) val = load_examples(find_pairs(args.val_dir), args.pipeline);

  TaggerConfig config = args.config;
  config.input_dim = static_cast<int>(train.front().features.width);
  fit_class_weights(config, train);

  fs::create_directories(args.out_dir);
  nlohmann::ordered_json run;
  run["command"] = "train";
  run["data"] = args.data_dir;
  run["validation"] = args.val_dir.empty() ? args.data_dir : args.val_dir;
  run["pipeline"] = pipeline_to_json(args.pipeline);
  run["model"] = config_to_json(config);
  run["max_steps"] = args.options.max_steps;
  run["eval_every"] = args.options.eval_every;
  run["patience"] = args.options.patience;
  write_run_config(args.out_dir, run);

  std::ofstream csv(fs::path(args.out_dir) / "train-log.csv");
  csv << "step,loss,sign_f1,phrase_f1,val_f1\n";
  const auto outcome = train_tagger(config, train, val, args.options, [&](const TrainLogRow& r) {
    csv << r.step << ',' << r.loss << ',' << r.sign_f1 << ',' << r.phrase_f1 << ',' << r.val_f1 << '\n';
    log << "step " << r.step << "  loss " << r.loss << "  val frame-F1 sign " << r.sign_f1 << " phrase "
        << r.phrase_f1 << "\n";
  });
  save_model(outcome.best, (fs::path(args.out_dir) / "model.ckpt").string(), pipeline_to_json(args.pipeline));
  log << "best val frame-F1 " << outcome.best_f1 << " at step " << outcome.best_step << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// tune

struct TuneArgs {
  std::string data_dir;
  std::string model;  // empty: read <stem>.probs.json instead of poses
  std::vector<double> grid = default_threshold_grid();
  std::string tier = "both";
  std::string out_dir = ".";
};

inline std::vector<std::pair<FrameProbs, Annotation>> load_dev_set(const TuneArgs& args, double* fps_out) {
  std::vector<std::pair<FrameProbs, Annotation>> dev;
  if (!fs::is_directory(args.data_dir))
    throw Error("data", "data directory '" + args.data_dir + "' does not exist");
  if (!args.model.empty()) {
    const auto pm = load_pipeline(args.model, std::nullopt, std::nullopt, std::nullopt);
    *fps_out = pm.options.fps;
    for (const auto& p : find_pairs(args.data_dir)) {
      const auto features = pipeline_features(load_pose_file(p.pose.string()), pm.options);
      dev.emplace_back(predict(pm.model, features), parse_segments_json(read_text_file(p.segments.string())));
    }
    return dev;
  }
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(args.data_dir))
    if (e.path().filename().string().ends_with(".probs.json")) files.push_back(e.path());
  std::sort(files.begin(), files.end());
  if (files.empty()) throw Error("data", "no <name>.probs.json files in '" + args.data_dir + "'");
  for (const auto& f : files) {
    const auto stem = stem_of(f, ".probs.json");
    const auto seg = fs::path(args.data_dir) / (stem + ".segments.json");
    if (!fs::exists(seg)) throw Error("data", "missing " + seg.filename().string());
    const auto doc = nlohmann::json::parse(read_text_file(f.string()));
    *fps_out = doc.value("fps", kDefaultPipelineFps);
    dev.emplace_back(probs_from_json(read_text_file(f.string())), parse_segments_json(read_text_file(seg.string())));
  }
  return dev;
}

inline int run_tune(const TuneArgs& args, std::ostream& out = std::cout) {
  double fps = kDefaultPipelineFps;
  const auto dev_raw = load_dev_set(args, &fps);
  std::vector<Tier> tiers;
  if (args.tier == "sign" || args.tier == "both") tiers.push_back(Tier::Sign);
  if (args.tier == "phrase" || args.tier == "both") tiers.push_back(Tier::Phrase);
  if (tiers.empty()) throw Error("tune", "tier must be sign, phrase or both");

  fs::create_directories(args.out_dir);
  nlohmann::ordered_json best;
  for (Tier tier : tiers) {
    std::vector<DevItem> dev;
    for (const auto& [probs, gold] : dev_raw) {
      const auto& rows = probs.tier(tier);
      dev.push_back({to_percent(rows), gold_segments_at(gold, tier, fps, rows.size())});
    }
    const auto result = tune_thresholds(dev, args.grid, tier);
    std::ofstream csv(fs::path(args.out_dir) / (std::string("tune-") + to_string(tier) + ".csv"));
    csv << "threshold_b,threshold_o,iou,percentage\n";
    for (const auto& c : result.table)
      csv << c.threshold_b << ',' << c.threshold_o << ',' << c.iou << ',' << c.percentage << '\n';
    best[to_string(tier)] = {{"threshold_b", result.threshold_b}, {"threshold_o", result.threshold_o}};
    out << to_string(tier) << ": threshold_b=" << result.threshold_b << " threshold_o=" << result.threshold_o
        << " (" << result.table.size() << " grid cells)\n";
  }
  write_text_file((fs::path(args.out_dir) / "tuned-thresholds.json").string(), best.dump(2) + "\n");
  return 0;
}

// ---------------------------------------------------------------------------
// eval

struct EvalArgs {
  std::string pred;
  std::string gold;
  std::string probs;  // optional; enables argmax frame-F1 and ROC-AUC
  std::size_t bins = 20;
  std::string json_out;
};

inline nlohmann::ordered_json report_to_json(const EvalReport& r) {
  nlohmann::ordered_json j;
  for (Tier tier : {Tier::Sign, Tier::Phrase}) {
    const auto& t = r.tier(tier);
    nlohmann::ordered_json tj;
    tj["frame_f1"] = t.frame_f1;
    tj["iou"] = t.iou;
    tj["percentage"] = t.percentage;
    tj["roc_auc_o"] = t.has_auc ? nlohmann::ordered_json(t.roc_auc_o) : nlohmann::ordered_json();
    tj["segment_length_density"] = {{"edges_seconds", t.segment_length_density.edges},
                                    {"density", t.segment_length_density.density}};
    j[to_string(tier)] = tj;
  }
  return j;
}

inline EvalReport evaluate(const Annotation& pred_in, const Annotation& gold_in, const FrameProbs* probs,
                           std::size_t bins) {
  // Evaluate at the gold frame rate.
  Annotation pred = pred_in;
  for (Tier tier : {Tier::Sign, Tier::Phrase}) pred.tier(tier) = retime_segments(pred_in.tier(tier), pred_in.fps, gold_in.fps);
  std::int64_t frames = 0;
  for (const Annotation* a : {static_cast<const Annotation*>(&pred), &gold_in})
    for (Tier tier : {Tier::Sign, Tier::Phrase})
      for (const auto& s : a->tier(tier)) frames = std::max(frames, s.end);
  if (probs) frames = std::max<std::int64_t>(frames, static_cast<std::int64_t>(probs->frames()));

  EvalReport report;
  for (Tier tier : {Tier::Sign, Tier::Phrase}) {
    auto& t = report.tier(tier);
    const auto n = static_cast<std::size_t>(frames);
    const auto gold_tags = encode_tags(gold_in.tier(tier), n, TagScheme::BIO, tier).tags;
    std::vector<Tag> pred_tags;
    if (probs && probs->tier(tier).size() == n) {
      pred_tags = argmax_tags(probs->tier(tier));
      try {
        t.roc_auc_o = roc_auc_o(probs->tier(tier), gold_tags);
        t.has_auc = true;
      } catch (const Error&) {
        t.has_auc = false;
      }
    } else {
      pred_tags = encode_tags(pred.tier(tier), n, TagScheme::BIO, tier).tags;
    }
    t.frame_f1 = frame_f1(pred_tags, gold_tags);
    t.iou = segment_iou(pred.tier(tier), gold_in.tier(tier), frames);
    t.percentage = gold_in.tier(tier).empty() ? (pred.tier(tier).empty() ? 1.0 : 0.0)
                                              : percentage_of_segments(pred.tier(tier), gold_in.tier(tier));
    if (!pred.tier(tier).empty()) t.segment_length_density = length_density(pred.tier(tier), gold_in.fps, bins);
  }
  return report;
}

inline int run_eval(const EvalArgs& args, std::ostream& out = std::cout) {
  const auto pred = parse_segments_json(read_text_file(args.pred));
  const auto gold = parse_segments_json(read_text_file(args.gold));
  FrameProbs probs;
  if (!args.probs.empty()) probs = probs_from_json(read_text_file(args.probs));
  const auto report = evaluate(pred, gold, args.probs.empty() ? nullptr : &probs, args.bins);
  out << std::left << std::setw(8) << "tier" << std::setw(10) << "F1" << std::setw(10) << "IoU"
      << std::setw(10) << "%" << "AUC(O)\n";
  for (Tier tier : {Tier::Sign, Tier::Phrase}) {
    const auto& t = report.tier(tier);
    out << std::setw(8) << to_string(tier) << std::setw(10) << std::setprecision(4) << t.frame_f1
        << std::setw(10) << t.iou << std::setw(10) << t.percentage;
    if (t.has_auc) out << t.roc_auc_o;
    else out << "-";
    out << "\n";
  }
  if (!args.json_out.empty()) write_text_file(args.json_out, report_to_json(report).dump(2) + "\n");
  return 0;
}

// ---------------------------------------------------------------------------
// bio-fidelity

struct FidelityArgs {
  std::string gold;
  std::string tier = "sign";
  std::vector<double> fps_list = {50, 25, 12.5, 10, 5, 2, 1};
};

inline int run_bio_fidelity(const FidelityArgs& args, std::ostream& out = std::cout) {
  const auto gold = parse_segments_json(read_text_file(args.gold));
  const Tier tier = args.tier == "phrase" ? Tier::Phrase : Tier::Sign;
  out << "fps,scheme,fraction,exact_fraction\n";
  for (const auto& row : fidelity_experiment(gold.tier(tier), args.fps_list, gold.fps))
    out << row.fps << ',' << to_string(row.scheme) << ',' << row.reproduced_fraction << ','
        << row.exact_fraction << '\n';
  return 0;
}

// ---------------------------------------------------------------------------
// hand-bench

struct HandBenchArgs {
  std::string manifest;
  std::string dir;  // defaults to the manifest's directory
  std::string overlay;
};

// First frame's fully tracked hand, preferring the right hand.
inline HandPose first_hand(const PoseSequence& seq, const std::string& file) {
  for (auto name : {kRightHand, kLeftHand})
    for (std::size_t t = 0; t < seq.frames(); ++t)
      if (auto h = hand_at(seq, name, t)) return *h;
  throw Error("hand-bench", "no fully tracked 21-point hand in '" + file + "'");
}

inline int run_hand_bench(const HandBenchArgs& args, std::ostream& out = std::cout) {
  const auto manifest = nlohmann::json::parse(read_text_file(args.manifest));
  const fs::path root = args.dir.empty() ? fs::path(args.manifest).parent_path() : fs::path(args.dir);
  std::ofstream overlay;
  if (!args.overlay.empty()) {
    overlay.open(args.overlay);
    overlay << "label,member,landmark,x,y,z\n";
  }
  out << "label,mace,cce\n";
  for (const auto& g : manifest.at("groups")) {
    HandGroup group;
    group.label = g.at("label").get<std::string>();
    for (const auto& f : g.at("files")) {
      const auto path = (root / f.get<std::string>()).string();
      group.members.push_back(first_hand(load_pose_file(path), path));
    }
    out << group.label << ',' << mace(group) << ',' << cce(group) << '\n';
    if (overlay) {
      for (std::size_t m = 0; m < group.members.size(); ++m) {
        const auto h = hand_normalize(group.members[m]);
        for (std::size_t k = 0; k < hand_landmark::kCount; ++k)
          overlay << group.label << ',' << m << ',' << hand_point_names()[k] << ',' << h.points[k].x << ','
                  << h.points[k].y << ',' << h.points[k].z << '\n';
      }
    }
  }
  return 0;
}

// ---------------------------------------------------------------------------
// flow-dump

struct FlowDumpArgs {
  std::string input;
  PipelineOptions pipeline;
  bool raw = false;
};

inline int run_flow_dump(const FlowDumpArgs& args, std::ostream& out = std::cout) {
  const auto raw = load_pose_file(args.input);
  const auto seq = args.raw ? raw : prepare_pose(raw, args.pipeline);
  const auto flow = optical_flow(seq);
  std::vector<std::string> names;
  for (const auto& c : seq.header().components)
    for (const auto& p : c.points) names.push_back(c.name + "/" + p);
  out << "frame,point,value\n";
  for (std::size_t t = 0; t < flow.frames; ++t)
    for (std::size_t k = 0; k < flow.points; ++k) out << t << ',' << names[k] << ',' << flow.at(t, k) << '\n';
  return 0;
}

// ---------------------------------------------------------------------------
// synth

struct SynthArgs {
  std::string out_dir = "synthetic";
  int count = 4;
  SyntheticOptions options;
};

inline int run_synth(const SynthArgs& args, std::ostream& out = std::cout) {
  fs::create_directories(args.out_dir);
  for (int i = 0; i < args.count; ++i) {
    SyntheticOptions o = args.options;
    o.seed = args.options.seed + static_cast<std::uint64_t>(i);
    const auto sample = synthetic_signing(o);
    const std::string stem = (fs::path(args.out_dir) / ("synthetic-" + std::to_string(i))).string();
    write_text_file(stem + ".pose.json", serialize_pose_json(sample.pose));
    write_text_file(stem + ".segments.json", serialize_segments_json(sample.gold));
    out << stem << ".pose.json\n";
  }
  return 0;
}

}  // namespace signseg::cli
