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

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"
#include "json_config.hpp"

namespace {

using namespace signseg;
using namespace signseg::cli;

struct DecodeFlags {
  double threshold_b = 50;
  double threshold_o = 50;
  std::optional<double> phrase_threshold_b;
  std::optional<double> phrase_threshold_o;
  std::string mode = "threshold";
  bool strict_bio = false;

  DecodeParams sign() const {
    DecodeParams p;
    p.threshold_b = threshold_b;
    p.threshold_o = threshold_o;
    p.mode = mode == "argmax" ? DecodeMode::Argmax : DecodeMode::Threshold;
    p.strict_bio = strict_bio;
    p.validate();
    return p;
  }
  DecodeParams phrase() const {
    DecodeParams p = sign();
    if (phrase_threshold_b) p.threshold_b = *phrase_threshold_b;
    if (phrase_threshold_o) p.threshold_o = *phrase_threshold_o;
    p.validate();
    return p;
  }
};

void add_decode_flags(CLI::App* app, DecodeFlags& f) {
  app->add_option("--threshold-b", f.threshold_b, "B threshold in percent (both tiers)")->capture_default_str();
  app->add_option("--threshold-o", f.threshold_o, "O threshold in percent (both tiers)")->capture_default_str();
  app->add_option("--phrase-threshold-b", f.phrase_threshold_b, "B threshold for the phrase tier");
  app->add_option("--phrase-threshold-o", f.phrase_threshold_o, "O threshold for the phrase tier");
  app->add_option("--mode", f.mode, "Decoding mode")
      ->check(CLI::IsMember({"threshold", "argmax"}))
      ->capture_default_str();
  app->add_flag("--strict-bio", f.strict_bio, "Start a new segment at a B frame that closes the previous one");
}

struct PipelineFlags {
  double fps = kDefaultPipelineFps;
  std::string selector = "body75";
  std::string features = "flow";

  PipelineOptions resolve() const {
    PipelineOptions o;
    if (!(fps > 0)) throw Error("resample", "fps must be positive");
    o.fps = fps;
    o.selector = resolve_selector_spec(selector);
    o.features = parse_feature_list(features);
    return o;
  }
};

void add_pipeline_flags(CLI::App* app, PipelineFlags& f) {
  app->add_option("--fps", f.fps, "Pipeline frame rate")->capture_default_str();
  app->add_option("--selector", f.selector, "body75, face-contour-128, a selector file, or a comma list")
      ->capture_default_str();
  app->add_option("--features", f.features, "Comma list of flow, handnorm (or none)")->capture_default_str();
}

std::vector<double> parse_number_list(const std::string& s, const char* stage) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, ',')) {
    try {
      out.push_back(std::stod(part));
    } catch (const std::exception&) {
      throw Error(stage, "not a number: '" + part + "'");
    }
  }
  return out;
}

// Runs `body` with `path` as stdout replacement when non-empty.
template <typename Fn>
int with_output(const std::string& path, Fn body) {
  if (path.empty()) return body(std::cout);
  std::ofstream out(path);
  if (!out) throw Error("io", "cannot write '" + path + "'");
  return body(out);
}

void write_manifest_next_to(const std::string& output, const CLI::App* sub) {
  if (output.empty()) return;
  const auto dir = std::filesystem::path(output).parent_path();
  nlohmann::ordered_json run;
  run["command"] = sub->get_name();
  run["options"] = nlohmann::ordered_json::parse(sub->config_to_str(true, false));
  write_run_config(dir.empty() ? std::filesystem::path(".") : dir, run);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sign language segmentation from pose sequences"};
  app.require_subcommand(1);
  app.config_formatter(std::make_shared<JsonConfig>(&app));
  app.set_config("--config", "", "JSON config file (also SIGNSEG_CONFIG)")->envname("SIGNSEG_CONFIG");

  // segment
  SegmentArgs seg;
  DecodeFlags seg_decode;
  std::optional<double> seg_fps;
  std::optional<std::string> seg_selector, seg_features;
  auto* segment = app.add_subcommand("segment", "Segment pose files into signs and phrases");
  segment->add_option("inputs", seg.inputs, "Pose files (poseseq-json)")->required();
  segment->add_option("--model", seg.model, "Checkpoint")->required();
  segment->add_option("--out", seg.out_dir, "Output directory")->capture_default_str();
  segment->add_option("--fps", seg_fps, "Override the checkpoint pipeline frame rate");
  segment->add_option("--selector", seg_selector, "Override the checkpoint point selector");
  segment->add_option("--features", seg_features, "Override the checkpoint feature set");
  segment->add_option("--workers", seg.workers, "Parallel files")->capture_default_str()->check(CLI::PositiveNumber);
  segment->add_flag("--emit-probs", seg.emit_probs, "Also write per-frame probabilities");
  add_decode_flags(segment, seg_decode);

  // train
  TrainArgs tr;
  PipelineFlags tr_pipe;
  auto* train = app.add_subcommand("train", "Train a tagger on <name>.pose.json + <name>.segments.json pairs");
  train->add_option("--data", tr.data_dir, "Training directory")->required();
  train->add_option("--val", tr.val_dir, "Validation directory (defaults to the training set)");
  train->add_option("--out", tr.out_dir, "Output directory")->capture_default_str();
  train->add_option("--hidden", tr.config.hidden_dim, "LSTM hidden size")->capture_default_str();
  train->add_option("--layers", tr.config.layers, "LSTM layers")->capture_default_str();
  train->add_option("--lr", tr.config.learning_rate, "Adam learning rate")->capture_default_str();
  train->add_option("--dropout", tr.config.dropout, "Dropout between layers")->capture_default_str();
  train->add_option("--clip-norm", tr.config.clip_norm, "Global gradient norm clip (0 = off)")
      ->capture_default_str();
  train->add_option("--steps", tr.options.max_steps, "Maximum optimizer steps")->capture_default_str();
  train->add_option("--eval-every", tr.options.eval_every, "Steps between validations")->capture_default_str();
  train->add_option("--patience", tr.options.patience, "Validations without improvement before stopping")
      ->capture_default_str();
  train->add_option("--target-f1", tr.options.target_f1, "Stop once validation frame-F1 reaches this")
      ->capture_default_str();
  train->add_option("--seed", tr.config.seed, "Random seed")->capture_default_str();
  bool tr_unidirectional = false;
  train->add_flag("--unidirectional", tr_unidirectional, "Forward-only LSTM");
  add_pipeline_flags(train, tr_pipe);

  // tune
  TuneArgs tu;
  std::string tu_grid;
  auto* tune = app.add_subcommand("tune", "Grid-search decoding thresholds on a dev set");
  tune->add_option("--data", tu.data_dir, "Dev directory")->required();
  tune->add_option("--model", tu.model, "Checkpoint; without it <name>.probs.json files are read");
  tune->add_option("--grid", tu_grid, "Comma list of thresholds (default 10..90)");
  tune->add_option("--tier", tu.tier, "sign, phrase or both")
      ->check(CLI::IsMember({"sign", "phrase", "both"}))
      ->capture_default_str();
  tune->add_option("--out", tu.out_dir, "Output directory")->capture_default_str();

  // eval
  EvalArgs ev;
  auto* eval = app.add_subcommand("eval", "Compare predicted segments against gold");
  eval->add_option("--pred", ev.pred, "Predicted segments-json")->required();
  eval->add_option("--gold", ev.gold, "Gold segments-json")->required();
  eval->add_option("--probs", ev.probs, "Per-frame probabilities for frame-F1 and ROC-AUC");
  eval->add_option("--bins", ev.bins, "Segment length histogram bins")->capture_default_str();
  eval->add_option("--json", ev.json_out, "Write the report as JSON");

  // bio-fidelity
  FidelityArgs fi;
  std::string fi_fps, fi_out;
  auto* fidelity = app.add_subcommand("bio-fidelity", "Segment recovery after tag round trips at lower frame rates");
  fidelity->add_option("--gold", fi.gold, "Gold segments-json")->required();
  fidelity->add_option("--tier", fi.tier, "sign or phrase")
      ->check(CLI::IsMember({"sign", "phrase"}))
      ->capture_default_str();
  fidelity->add_option("--fps-list", fi_fps, "Comma list of frame rates");
  fidelity->add_option("--out", fi_out, "CSV output (default stdout)");

  // hand-bench
  HandBenchArgs hb;
  std::string hb_out;
  auto* hand = app.add_subcommand("hand-bench", "MACE/CCE consistency of hand groups");
  hand->add_option("--manifest", hb.manifest, "{\"groups\":[{\"label\",\"files\"}]}")->required();
  hand->add_option("--dir", hb.dir, "Root for relative file names (default: manifest directory)");
  hand->add_option("--overlay", hb.overlay, "CSV of normalized landmarks for overlay plots");
  hand->add_option("--out", hb_out, "CSV output (default stdout)");

  // flow-dump
  FlowDumpArgs fd;
  PipelineFlags fd_pipe;
  std::string fd_out;
  auto* flow = app.add_subcommand("flow-dump", "Per-point optical flow as CSV");
  flow->add_option("input", fd.input, "Pose file")->required();
  flow->add_flag("--raw", fd.raw, "Skip resampling, normalization and selection");
  flow->add_option("--out", fd_out, "CSV output (default stdout)");
  add_pipeline_flags(flow, fd_pipe);

  // synth
  SynthArgs sy;
  auto* synth = app.add_subcommand("synth", "Write synthetic signing sequences with gold segments");
  synth->add_option("--out", sy.out_dir, "Output directory")->capture_default_str();
  synth->add_option("--count", sy.count, "Number of sequences")->capture_default_str();
  synth->add_option("--frames", sy.options.frames, "Frames per sequence")->capture_default_str();
  synth->add_option("--fps", sy.options.fps, "Frame rate")->capture_default_str();
  synth->add_option("--seed", sy.options.seed, "Random seed")->capture_default_str();
  synth->add_flag("--face", sy.options.with_face, "Include 468 face points");

  CLI11_PARSE(app, argc, argv);

  const CLI::App* active = app.get_subcommands().front();
  try {
    if (active == segment) {
      seg.sign_params = seg_decode.sign();
      seg.phrase_params = seg_decode.phrase();
      seg.fps = seg_fps;
      seg.selector = seg_selector;
      seg.features = seg_features;
      return run_segment(seg);
    }
    if (active == train) {
      tr.pipeline = tr_pipe.resolve();
      tr.config.bidirectional = !tr_unidirectional;
      return run_train(tr);
    }
    if (active == tune) {
      if (!tu_grid.empty()) tu.grid = parse_number_list(tu_grid, "tune");
      return run_tune(tu);
    }
    if (active == eval) {
      write_manifest_next_to(ev.json_out, eval);
      return run_eval(ev);
    }
    if (active == fidelity) {
      if (!fi_fps.empty()) fi.fps_list = parse_number_list(fi_fps, "bio-fidelity");
      write_manifest_next_to(fi_out, fidelity);
      return with_output(fi_out, [&](std::ostream& os) { return run_bio_fidelity(fi, os); });
    }
    if (active == hand) {
      write_manifest_next_to(hb_out, hand);
      return with_output(hb_out, [&](std::ostream& os) { return run_hand_bench(hb, os); });
    }
    if (active == flow) {
      fd.pipeline = fd_pipe.resolve();
      write_manifest_next_to(fd_out, flow);
      return with_output(fd_out, [&](std::ostream& os) { return run_flow_dump(fd, os); });
    }
    if (active == synth) return run_synth(sy);
  } catch (const Error& e) {
    std::cerr << active->get_name() << ": " << e.stage() << ": " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << active->get_name() << ": " << e.what() << "\n";
    return 1;
  }
  return 1;
}
