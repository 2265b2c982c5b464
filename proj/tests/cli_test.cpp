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

#include <gtest/gtest.h>

#include <cstdlib>
#include <sstream>

#include "commands.hpp"
#include "fixtures.hpp"
#include "support.hpp"

namespace signseg {
namespace {

namespace fs = std::filesystem;
using testing::TempDir;

std::string contents(const std::string& path) { return read_text_file(path); }

std::size_t count_lines(const std::string& text) {
  return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

// A small trained model on synthetic data; shared by the segment tests.
class TrainedModel : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = new TempDir("cli-model");
    cli::SynthArgs synth;
    synth.out_dir = *dir_ / "data";
    synth.count = 2;
    synth.options.frames = 40;
    std::ostringstream sink;
    ASSERT_EQ(cli::run_synth(synth, sink), 0);
    cli::TrainArgs train;
    train.data_dir = synth.out_dir;
    train.out_dir = *dir_ / "run";
    train.config.hidden_dim = 8;
    train.config.layers = 1;
    train.options.max_steps = 4;
    train.options.eval_every = 2;
    ASSERT_EQ(cli::run_train(train, sink), 0);
  }
  static void TearDownTestSuite() {
    delete dir_;
    dir_ = nullptr;
  }

  static std::string model() { return *dir_ / "run/model.ckpt"; }
  static std::string data(const std::string& name) { return *dir_ / ("data/" + name); }

  static TempDir* dir_;
};

TempDir* TrainedModel::dir_ = nullptr;

TEST_F(TrainedModel, TrainWritesArtifacts) {
  const auto log = contents(*dir_ / "run/train-log.csv");
  EXPECT_EQ(log.substr(0, log.find('\n')), "step,loss,sign_f1,phrase_f1,val_f1");
  EXPECT_EQ(count_lines(log), 3u);
  const auto run = nlohmann::json::parse(contents(*dir_ / "run/run-config.json"));
  EXPECT_EQ(run.at("command"), "train");
  EXPECT_EQ(run.at("model").at("input_dim"), 300);
}

TEST_F(TrainedModel, SegmentWritesOutputs) {
  TempDir out("cli-seg");
  cli::SegmentArgs args;
  args.inputs = {data("synthetic-0.pose.json"), data("synthetic-1.pose.json")};
  args.model = model();
  args.out_dir = out.path().string();
  args.emit_probs = true;
  args.workers = 2;
  std::ostringstream err;
  ASSERT_EQ(cli::run_segment(args, err), 0) << err.str();
  for (const char* stem : {"synthetic-0", "synthetic-1"}) {
    const auto seg = parse_segments_json(contents(out / (std::string(stem) + ".segments.json")));
    EXPECT_EQ(seg.fps, 25);
    EXPECT_EQ(contents(out / (std::string(stem) + ".sign.vtt")).substr(0, 6), "WEBVTT");
    const auto probs = cli::probs_from_json(contents(out / (std::string(stem) + ".probs.json")));
    EXPECT_EQ(probs.frames(), 40u);
  }
  EXPECT_TRUE(fs::exists(out / "run-config.json"));
}

TEST_F(TrainedModel, SegmentEmptyPose) {
  TempDir out("cli-empty");
  auto raw = load_pose_file(data("synthetic-0.pose.json"));
  const auto empty = PoseSequence::empty_frames(raw.header(), 0);
  write_text_file(out / "empty.pose.json", serialize_pose_json(empty));
  cli::SegmentArgs args;
  args.inputs = {out / "empty.pose.json"};
  args.model = model();
  args.out_dir = out / "res";
  std::ostringstream err;
  ASSERT_EQ(cli::run_segment(args, err), 0) << err.str();
  const auto seg = parse_segments_json(contents(out / "res/empty.segments.json"));
  EXPECT_TRUE(seg.sign.empty());
  EXPECT_TRUE(seg.phrase.empty());
  EXPECT_EQ(contents(out / "res/empty.phrase.vtt"), "WEBVTT\n");
}

TEST_F(TrainedModel, SegmentRejectsFlatPoses) {
  TempDir out("cli-2d");
  auto doc = nlohmann::json::parse(contents(data("synthetic-0.pose.json")));
  for (auto& frame : doc["frames"])
    for (auto& p : frame) p = nlohmann::json::array({p[0], p[1], p[3]});
  write_text_file(out / "flat.pose.json", doc.dump());
  cli::SegmentArgs args;
  args.inputs = {out / "flat.pose.json"};
  args.model = model();
  args.out_dir = out / "res";
  std::ostringstream err;
  EXPECT_NE(cli::run_segment(args, err), 0);
  EXPECT_NE(err.str().find("z coordinate"), std::string::npos) << err.str();
  EXPECT_FALSE(fs::exists(out / "res/flat.segments.json"));
}

TEST_F(TrainedModel, SegmentReportsWidthMismatch) {
  TempDir out("cli-width");
  cli::SegmentArgs args;
  args.inputs = {data("synthetic-0.pose.json")};
  args.model = model();
  args.out_dir = out.path().string();
  args.features = "flow,handnorm";
  std::ostringstream err;
  EXPECT_NE(cli::run_segment(args, err), 0);
  EXPECT_NE(err.str().find("segment: features:"), std::string::npos) << err.str();
  EXPECT_NE(err.str().find("426"), std::string::npos) << err.str();
}

TEST_F(TrainedModel, TuneFromModel) {
  TempDir out("cli-tune-model");
  cli::TuneArgs args;
  args.data_dir = data("");
  args.model = model();
  args.tier = "sign";
  args.out_dir = out.path().string();
  std::ostringstream sink;
  ASSERT_EQ(cli::run_tune(args, sink), 0);
  EXPECT_EQ(count_lines(contents(out / "tune-sign.csv")), 82u);
  EXPECT_FALSE(fs::exists(out / "tune-phrase.csv"));
}

TEST(CliTrain, DataErrors) {
  TempDir dir("cli-train-err");
  cli::TrainArgs args;
  args.out_dir = dir / "run";
  args.data_dir = dir / "missing";
  EXPECT_THROW(cli::run_train(args), Error);
  fs::create_directories(dir / "empty");
  args.data_dir = dir / "empty";
  EXPECT_THROW(cli::run_train(args), Error);
  fs::create_directories(dir / "half");
  write_text_file(dir / "half/a.pose.json", "{}");
  args.data_dir = dir / "half";
  try {
    cli::run_train(args);
    FAIL() << "expected an unpaired-file error";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("a.segments.json"), std::string::npos) << e.what();
  }
}

TEST(CliTrain, SameSeedSameModel) {
  TempDir dir("cli-train-seed");
  cli::SynthArgs synth;
  synth.out_dir = dir / "data";
  synth.count = 2;
  synth.options.frames = 30;
  std::ostringstream sink;
  cli::run_synth(synth, sink);
  cli::TrainArgs args;
  args.data_dir = synth.out_dir;
  args.config.hidden_dim = 6;
  args.config.layers = 1;
  args.config.seed = 17;
  args.options.max_steps = 4;
  args.options.eval_every = 2;
  args.out_dir = dir / "a";
  cli::run_train(args, sink);
  args.out_dir = dir / "b";
  cli::run_train(args, sink);
  EXPECT_EQ(contents(dir / "a/train-log.csv"), contents(dir / "b/train-log.csv"));
  EXPECT_EQ(contents(dir / "a/model.ckpt"), contents(dir / "b/model.ckpt"));
}

TEST(CliEval, IdenticalPredictionIsPerfect) {
  TempDir dir("cli-eval");
  Annotation a;
  a.fps = 25;
  a.sign = {{2, 6, Tier::Sign}, {6, 9, Tier::Sign}, {14, 20, Tier::Sign}};
  a.phrase = {{2, 20, Tier::Phrase}};
  write_text_file(dir / "a.segments.json", serialize_segments_json(a));
  cli::EvalArgs args;
  args.pred = dir / "a.segments.json";
  args.gold = args.pred;
  args.json_out = dir / "report.json";
  std::ostringstream out;
  ASSERT_EQ(cli::run_eval(args, out), 0);
  const auto report = nlohmann::json::parse(contents(args.json_out));
  for (const char* tier : {"sign", "phrase"}) {
    EXPECT_DOUBLE_EQ(report[tier]["frame_f1"].get<double>(), 1.0);
    EXPECT_DOUBLE_EQ(report[tier]["iou"].get<double>(), 1.0);
    EXPECT_DOUBLE_EQ(report[tier]["percentage"].get<double>(), 1.0);
    EXPECT_TRUE(report[tier]["roc_auc_o"].is_null());
  }
  EXPECT_NE(out.str().find("sign"), std::string::npos);
}

TEST(CliEval, RetimesPredictionToGoldRate) {
  Annotation gold, pred;
  gold.fps = 50;
  gold.sign = {{4, 10, Tier::Sign}};
  pred.fps = 25;
  pred.sign = {{2, 5, Tier::Sign}};
  const auto report = cli::evaluate(pred, gold, nullptr, 10);
  EXPECT_DOUBLE_EQ(report.sign.iou, 1.0);
  EXPECT_DOUBLE_EQ(report.sign.percentage, 1.0);
}

TEST(CliFidelity, IoLosesAdjacentSegments) {
  TempDir dir("cli-fid");
  Annotation a;
  a.fps = 50;
  a.sign = {{10, 30, Tier::Sign}, {30, 50, Tier::Sign}, {80, 100, Tier::Sign}};
  write_text_file(dir / "g.segments.json", serialize_segments_json(a));
  cli::FidelityArgs args;
  args.gold = dir / "g.segments.json";
  args.fps_list = {50, 25};
  std::ostringstream out;
  ASSERT_EQ(cli::run_bio_fidelity(args, out), 0);
  std::istringstream lines(out.str());
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line, "fps,scheme,fraction,exact_fraction");
  std::map<std::string, double> fraction;
  while (std::getline(lines, line)) {
    std::stringstream ss(line);
    std::string fps, scheme, value;
    std::getline(ss, fps, ',');
    std::getline(ss, scheme, ',');
    std::getline(ss, value, ',');
    fraction[fps + "/" + scheme] = std::stod(value);
  }
  ASSERT_EQ(fraction.size(), 4u);
  EXPECT_DOUBLE_EQ(fraction["25/BIO"], 1.0);
  EXPECT_LT(fraction["25/IO"], fraction["25/BIO"]);
}

TEST(CliTune, OverSegmentingProbabilities) {
  TempDir dir("cli-tune");
  const auto dev = testing::over_segmenting_fixture();
  for (std::size_t n = 0; n < dev.size(); ++n) {
    FrameProbs probs;
    for (const auto& r : dev[n].percent_rows) probs.phrase.push_back({r[0] / 100, r[1] / 100, r[2] / 100});
    probs.sign = probs.phrase;
    Annotation gold;
    gold.fps = 25;
    gold.phrase = dev[n].gold;
    const std::string stem = dir / ("item" + std::to_string(n));
    write_text_file(stem + ".probs.json", cli::probs_to_json(probs, 25).dump());
    write_text_file(stem + ".segments.json", serialize_segments_json(gold));
  }
  cli::TuneArgs args;
  args.data_dir = dir.path().string();
  args.tier = "phrase";
  args.out_dir = dir / "out";
  std::ostringstream out;
  ASSERT_EQ(cli::run_tune(args, out), 0);
  EXPECT_EQ(count_lines(contents(dir / "out/tune-phrase.csv")), 82u);
  const auto best = nlohmann::json::parse(contents(dir / "out/tuned-thresholds.json"));
  EXPECT_GE(best["phrase"]["threshold_b"].get<double>(), 80);
}

TEST(CliTune, MissingSegmentsFile) {
  TempDir dir("cli-tune-missing");
  write_text_file(dir / "x.probs.json", R"({"fps":25,"tiers":{"sign":[],"phrase":[]}})");
  cli::TuneArgs args;
  args.data_dir = dir.path().string();
  EXPECT_THROW(cli::run_tune(args), Error);
}

TEST(CliHandBench, GroupsAndOverlay) {
  TempDir dir("cli-hand");
  testing::Gen g(3);
  const auto base = testing::random_hand(g);
  nlohmann::json manifest;
  manifest["groups"] = nlohmann::json::array();
  nlohmann::json files = nlohmann::json::array();
  for (int m = 0; m < 3; ++m) {
    SyntheticOptions o;
    o.frames = 1;
    auto pose = synthetic_signing(o).pose;
    const auto moved = testing::transform_hand(base, g.rotation(), g.uniform(0.5, 2), g.vec());
    const auto offset = *pose.header().component_offset(kRightHand);
    for (std::size_t k = 0; k < 21; ++k) pose.set_point(0, offset + k, moved.points[k], 1.0);
    const std::string name = "m" + std::to_string(m) + ".pose.json";
    write_text_file(dir / name, serialize_pose_json(pose));
    files.push_back(name);
  }
  manifest["groups"].push_back({{"label", "flat"}, {"files", files}});
  write_text_file(dir / "manifest.json", manifest.dump());
  cli::HandBenchArgs args;
  args.manifest = dir / "manifest.json";
  args.overlay = dir / "overlay.csv";
  std::ostringstream out;
  ASSERT_EQ(cli::run_hand_bench(args, out), 0);
  std::istringstream lines(out.str());
  std::string header, row;
  std::getline(lines, header);
  std::getline(lines, row);
  EXPECT_EQ(header, "label,mace,cce");
  EXPECT_EQ(row.substr(0, 5), "flat,");
  EXPECT_LT(std::stod(row.substr(5, row.find(',', 5) - 5)), 1e-6);
  EXPECT_EQ(count_lines(contents(args.overlay)), 1u + 3 * 21);
}

TEST(CliFlowDump, OneRowPerFramePoint) {
  TempDir dir("cli-flow");
  SyntheticOptions o;
  o.frames = 4;
  const auto pose = synthetic_signing(o).pose;
  write_text_file(dir / "p.pose.json", serialize_pose_json(pose));
  cli::FlowDumpArgs args;
  args.input = dir / "p.pose.json";
  args.raw = true;
  std::ostringstream out;
  ASSERT_EQ(cli::run_flow_dump(args, out), 0);
  EXPECT_EQ(count_lines(out.str()), 1 + 4 * pose.points());
  EXPECT_NE(out.str().find("\n0,BODY/NOSE,0\n"), std::string::npos);
}

#ifdef SIGNSEG_CLI_PATH

int run_binary(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " " + SIGNSEG_CLI_PATH + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST(CliBinary, ExitCodes) {
  TempDir dir("cli-bin");
  EXPECT_NE(run_binary(""), 0);
  EXPECT_NE(run_binary("eval --pred " + (dir / "nope.json") + " --gold " + (dir / "nope.json")), 0);
  EXPECT_EQ(run_binary("synth --out " + (dir / "s") + " --count 1 --frames 20"), 0);
  EXPECT_TRUE(fs::exists(dir / "s/synthetic-0.pose.json"));
  EXPECT_NE(run_binary("train --data " + (dir / "missing")), 0);
}

TEST(CliBinary, FlagsOverrideConfigFile) {
  TempDir dir("cli-bin-config");
  Annotation a;
  a.fps = 50;
  a.sign = {{10, 30, Tier::Sign}, {30, 50, Tier::Sign}};
  write_text_file(dir / "g.segments.json", serialize_segments_json(a));
  write_text_file(dir / "config.json", R"({"bio-fidelity": {"fps-list": "50,25", "tier": "sign"}})");
  const std::string env = "SIGNSEG_CONFIG=" + (dir / "config.json");
  ASSERT_EQ(run_binary("bio-fidelity --gold " + (dir / "g.segments.json") + " --out " + (dir / "a.csv"), env), 0);
  EXPECT_EQ(count_lines(contents(dir / "a.csv")), 5u);
  ASSERT_EQ(run_binary("bio-fidelity --gold " + (dir / "g.segments.json") + " --fps-list 10 --out " +
                           (dir / "b.csv"),
                       env),
            0);
  EXPECT_EQ(count_lines(contents(dir / "b.csv")), 3u);
}

#endif

}  // namespace
}  // namespace signseg
