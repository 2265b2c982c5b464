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

#include <cmath>
#include <numbers>

#include "signseg/checkpoint.hpp"
#include "signseg/pipeline.hpp"
#include "signseg/synthetic.hpp"
#include "signseg/tagger.hpp"
#include "signseg/training.hpp"
#include "support.hpp"

namespace signseg {
namespace {

using testing::Gen;

FeatureMatrix random_features(Gen& g, std::size_t frames, std::size_t width) {
  FeatureMatrix fm;
  fm.frames = frames;
  fm.width = width;
  for (std::size_t k = 0; k < frames * width; ++k) fm.values.push_back(g.uniform(-1, 1));
  return fm;
}

GoldTags random_gold(Gen& g, std::size_t frames) {
  const auto t = static_cast<std::int64_t>(frames);
  return {encode_tags(g.segments(t, 0.3, 5), frames, TagScheme::BIO).tags,
          encode_tags(g.segments(t, 0.2, 8), frames, TagScheme::BIO).tags};
}

TaggerConfig small_config(int input, int hidden, int layers, std::uint64_t seed = 3) {
  TaggerConfig c;
  c.input_dim = input;
  c.hidden_dim = hidden;
  c.layers = layers;
  c.seed = seed;
  return c;
}

template <typename S>
bool same_params(const TaggerParams<S>& a, const TaggerParams<S>& b) {
  std::vector<const Mat<S>*> left;
  a.for_each([&](const std::string&, const Mat<S>& m) { left.push_back(&m); });
  std::size_t i = 0;
  bool same = true;
  b.for_each([&](const std::string&, const Mat<S>& m) {
    same = same && left[i]->rows() == m.rows() && left[i]->cols() == m.cols() && *left[i] == m;
    ++i;
  });
  return same;
}

TEST(Tagger, InitIsDeterministic) {
  const auto cfg = small_config(12, 16, 2, 99);
  EXPECT_TRUE(same_params(init_model<float>(cfg).params, init_model<float>(cfg).params));
  auto other = cfg;
  other.seed = 100;
  EXPECT_FALSE(same_params(init_model<float>(cfg).params, init_model<float>(other).params));
}

TEST(Tagger, ParameterCount) {
  const auto cfg = small_config(300, 256, 4);
  EXPECT_EQ(cfg.parameter_count(), 5855494);
  EXPECT_EQ(TaggerParams<float>::zeros(cfg).size(), cfg.parameter_count());
  for (bool bi : {false, true}) {
    auto c = small_config(7, 5, 3);
    c.bidirectional = bi;
    EXPECT_EQ(TaggerParams<double>::zeros(c).size(), c.parameter_count());
  }
}

TEST(Tagger, InvalidConfig) {
  EXPECT_THROW(init_model<float>(small_config(4, 0, 1)), Error);
  EXPECT_THROW(init_model<float>(small_config(0, 4, 1)), Error);
  auto c = small_config(4, 4, 1);
  c.sign_weights = {1, 0, 1};
  EXPECT_THROW(init_model<float>(c), Error);
  c = small_config(4, 4, 1);
  c.dropout = 1.0;
  EXPECT_THROW(init_model<float>(c), Error);
}

TEST(Tagger, EmptySequence) {
  Gen g(1);
  const auto model = init_model<float>(small_config(6, 8, 2));
  const auto probs = predict(model, random_features(g, 0, 6));
  EXPECT_TRUE(probs.sign.empty());
  EXPECT_TRUE(probs.phrase.empty());
}

TEST(Tagger, WidthMismatch) {
  Gen g(1);
  const auto model = init_model<float>(small_config(6, 8, 2));
  EXPECT_THROW(predict(model, random_features(g, 4, 5)), Error);
}

TEST(Tagger, RowsAreDistributions) {
  Gen g(2);
  const auto model = init_model<float>(small_config(10, 16, 2));
  const auto probs = predict(model, random_features(g, 17, 10));
  ASSERT_EQ(probs.frames(), 17u);
  for (const auto* rows : {&probs.sign, &probs.phrase})
    for (const auto& r : *rows) {
      EXPECT_NEAR(r[0] + r[1] + r[2], 1.0, 1e-6);
      for (double v : r) EXPECT_GT(v, 0.0);
    }
}

// Swapping the two directions of every layer (and the column blocks that read
// them) and reversing time must reverse the output.
TEST(Tagger, DirectionSwapReversesOutput) {
  Gen g(5);
  const auto cfg = small_config(6, 5, 3, 11);
  const auto model = init_model<double>(cfg);
  auto swapped = model;
  const Eigen::Index h = cfg.hidden_dim;
  auto swap_blocks = [h](Mat<double>& m) {
    Mat<double> left = m.leftCols(h);
    m.leftCols(h) = m.rightCols(h);
    m.rightCols(h) = left;
  };
  for (std::size_t l = 0; l < swapped.params.lstm.size(); ++l) {
    std::swap(swapped.params.lstm[l][0], swapped.params.lstm[l][1]);
    if (l > 0)
      for (auto& cell : swapped.params.lstm[l]) swap_blocks(cell.w_ih);
  }
  swap_blocks(swapped.params.sign_w);
  swap_blocks(swapped.params.phrase_w);

  const std::size_t t_len = 9;
  const auto x = random_features(g, t_len, 6);
  FeatureMatrix reversed = x;
  for (std::size_t t = 0; t < t_len; ++t)
    for (std::size_t f = 0; f < 6; ++f) reversed.values[t * 6 + f] = x.values[(t_len - 1 - t) * 6 + f];

  const auto a = predict(model, x), b = predict(swapped, reversed);
  for (std::size_t t = 0; t < t_len; ++t)
    for (int c = 0; c < kTagCount; ++c) {
      EXPECT_NEAR(a.sign[t][c], b.sign[t_len - 1 - t][c], 1e-12);
      EXPECT_NEAR(a.phrase[t][c], b.phrase[t_len - 1 - t][c], 1e-12);
    }
}

TEST(Loss, UniformIsLogThreePerTier) {
  FrameProbs probs;
  const ProbRow u{1.0 / 3, 1.0 / 3, 1.0 / 3};
  probs.sign.assign(4, u);
  probs.phrase.assign(4, u);
  const GoldTags gold{{Tag::B, Tag::I, Tag::O, Tag::O}, {Tag::O, Tag::O, Tag::B, Tag::I}};
  EXPECT_NEAR(weighted_cross_entropy(probs, gold, {1, 1, 1}, {1, 1, 1}), 2 * std::log(3.0), 1e-12);
}

TEST(Loss, PerfectIsZero) {
  FrameProbs probs;
  probs.sign = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  probs.phrase = probs.sign;
  const GoldTags gold{{Tag::B, Tag::I, Tag::O}, {Tag::B, Tag::I, Tag::O}};
  EXPECT_EQ(weighted_cross_entropy(probs, gold, {1, 1, 1}, {1, 1, 1}), 0.0);
}

TEST(Loss, WeightsScaleClassTerms) {
  FrameProbs probs;
  probs.sign = {{0.5, 0.25, 0.25}};
  probs.phrase = {{0.25, 0.25, 0.5}};
  const GoldTags gold{{Tag::B}, {Tag::O}};
  EXPECT_NEAR(weighted_cross_entropy(probs, gold, {4, 1, 1}, {1, 1, 0.5}), (4 + 0.5) * std::log(2.0), 1e-12);
}

TEST(Loss, LengthMismatch) {
  FrameProbs probs;
  probs.sign = {{1, 0, 0}};
  probs.phrase = {{1, 0, 0}};
  EXPECT_THROW(weighted_cross_entropy(probs, {{Tag::B, Tag::O}, {Tag::B}}, {1, 1, 1}, {1, 1, 1}), Error);
}

TEST(Loss, ModelLossMatchesProbabilities) {
  Gen g(8);
  auto cfg = small_config(5, 6, 2);
  cfg.sign_weights = {2, 1, 0.5};
  const auto model = init_model<double>(cfg);
  const auto x = random_features(g, 11, 5);
  const auto gold = random_gold(g, 11);
  const auto fwd = forward(model, x);
  EXPECT_NEAR(sequence_loss(model, fwd.cache, gold),
              weighted_cross_entropy(fwd.probs, gold, cfg.sign_weights, cfg.phrase_weights), 1e-10);
}

TEST(ClassWeights, InverseFrequency) {
  const auto w = class_weights_from_counts({1, 5, 18});
  EXPECT_NEAR(w[0], 8.0, 1e-12);
  EXPECT_NEAR(w[1], 1.6, 1e-12);
  EXPECT_NEAR(w[2], 24.0 / 54.0, 1e-12);
  const auto absent = class_weights_from_counts({0, 2, 2});
  EXPECT_EQ(absent[0], 1.0);
  EXPECT_NEAR(absent[1], 4.0 / 6.0, 1e-12);
}

TEST(Gradient, MatchesFiniteDifferences) {
  for (std::uint64_t seed : {1, 2, 3}) {
    Gen g(seed * 31);
    auto cfg = small_config(4, 8, 2, seed);
    cfg.sign_weights = {3, 1.2, 0.6};
    cfg.phrase_weights = {2, 0.8, 0.9};
    const auto model = init_model<double>(cfg);
    const auto res = gradient_check(model, random_features(g, 5, 4), random_gold(g, 5));
    EXPECT_LT(res.max_relative_error, 1e-4) << "seed " << seed;
    EXPECT_EQ(res.per_group.size(), 2u + 2 * 2 * 3 + 4);
  }
}

TEST(Gradient, UnidirectionalMatches) {
  Gen g(4);
  auto cfg = small_config(3, 6, 2, 4);
  cfg.bidirectional = false;
  const auto res = gradient_check(init_model<double>(cfg), random_features(g, 6, 3), random_gold(g, 6));
  EXPECT_LT(res.max_relative_error, 1e-4);
}

TEST(Gradient, DetectsTamperedHead) {
  Gen g(6);
  const auto model = init_model<double>(small_config(4, 8, 2, 6));
  const auto res = gradient_check(model, random_features(g, 5, 4), random_gold(g, 5), 1e-4,
                                  [](TaggerParams<double>& grads) { grads.sign_w *= 1.1; });
  EXPECT_GT(res.max_relative_error, 1e-2);
  EXPECT_GT(res.per_group.at("sign_head.weight"), 1e-2);
  EXPECT_LT(res.per_group.at("proj.weight"), 1e-4);
}

TEST(Gradient, RejectsNonPositiveStep) {
  Gen g(6);
  const auto model = init_model<double>(small_config(4, 4, 1));
  EXPECT_THROW(gradient_check(model, random_features(g, 3, 4), random_gold(g, 3), 0.0), Error);
}

TEST(Training, ZeroLearningRateKeepsParameters) {
  Gen g(9);
  auto cfg = small_config(5, 8, 2);
  cfg.learning_rate = 0;
  auto model = init_model<float>(cfg);
  const auto before = model.params;
  auto adam = AdamState<float>::create(cfg);
  const auto x = random_features(g, 10, 5);
  const auto gold = random_gold(g, 10);
  for (int s = 0; s < 3; ++s) train_step(model, x, gold, adam);
  EXPECT_TRUE(same_params(before, model.params));
}

TEST(Training, SameSeedSameTrajectory) {
  Gen g(10);
  auto cfg = small_config(5, 8, 2);
  cfg.dropout = 0.2;
  const auto x = random_features(g, 12, 5);
  const auto gold = random_gold(g, 12);
  auto run = [&]() {
    auto model = init_model<float>(cfg);
    auto adam = AdamState<float>::create(cfg);
    std::mt19937_64 rng(5);
    std::vector<double> losses;
    for (int s = 0; s < 10; ++s) losses.push_back(train_step(model, x, gold, adam, &rng));
    return losses;
  };
  EXPECT_EQ(run(), run());
}

TEST(Training, OverfitsSingleSequence) {
  SyntheticOptions o;
  o.frames = 30;
  o.seed = 5;
  const auto sample = synthetic_signing(o);
  const PipelineOptions po;
  const auto x = pipeline_features(sample.pose, po);
  const auto gold = gold_tags_for(sample.gold, po.fps, x.frames);
  TaggerConfig cfg;
  cfg.input_dim = static_cast<int>(x.width);
  cfg.seed = 1;
  auto model = init_model<float>(cfg);
  auto adam = AdamState<float>::create(cfg);
  std::vector<double> losses;
  for (int s = 0; s < 200; ++s) losses.push_back(train_step(model, x, gold, adam));
  EXPECT_LT(sequence_loss(model, forward(model, x).cache, gold), 0.01);

  int increases = 0;
  for (std::size_t s = 1; s < 20; ++s) increases += losses[s] > losses[s - 1] + 1e-6;
  EXPECT_LE(increases, 2);
}

TEST(Training, ClipNormBoundsUpdate) {
  Gen g(13);
  auto cfg = small_config(5, 8, 1);
  cfg.clip_norm = 1e-3;
  auto model = init_model<float>(cfg);
  auto adam = AdamState<float>::create(cfg);
  const auto x = random_features(g, 8, 5);
  const auto gold = random_gold(g, 8);
  train_step(model, x, gold, adam);
  // Clipping rescales the gradient, but Adam's first step is scale-free.
  EXPECT_EQ(adam.step, 1);
  double m_norm = 0;
  adam.m.for_each([&](const std::string&, const Mat<float>& m) { m_norm += m.squaredNorm(); });
  EXPECT_NEAR(std::sqrt(m_norm), 0.1 * 1e-3, 1e-6);
}

TEST(Training, TrainTaggerIsReproducible) {
  Gen g(14);
  std::vector<TrainingExample> set;
  for (int n = 0; n < 3; ++n) set.push_back({"s" + std::to_string(n), random_features(g, 15, 4), random_gold(g, 15)});
  auto cfg = small_config(4, 8, 1, 21);
  fit_class_weights(cfg, set);
  TrainOptions opt;
  opt.max_steps = 20;
  opt.eval_every = 5;
  const auto a = train_tagger(cfg, set, {}, opt);
  const auto b = train_tagger(cfg, set, {}, opt);
  EXPECT_EQ(a.step_losses, b.step_losses);
  ASSERT_EQ(a.log.size(), 4u);
  EXPECT_EQ(a.log.back().step, 20);
  EXPECT_TRUE(same_params(a.best.params, b.best.params));
  EXPECT_THROW(train_tagger(cfg, {}, {}, opt), Error);
}

TEST(Checkpoint, RoundTripIsBitIdentical) {
  Gen g(15);
  auto cfg = small_config(7, 6, 2, 4);
  cfg.sign_weights = {8, 1.6, 0.5};
  const auto model = init_model<float>(cfg);
  const nlohmann::json pipeline = {{"fps", 25}};
  testing::TempDir dir("ckpt");
  const auto path = dir / "model.ckpt";
  save_model(model, path, pipeline);
  const auto loaded = load_model(path);
  EXPECT_TRUE(same_params(model.params, loaded.model.params));
  EXPECT_EQ(config_to_json(loaded.model.config), config_to_json(cfg));
  EXPECT_EQ(loaded.pipeline, pipeline);
  const auto x = random_features(g, 6, 7);
  const auto a = predict(model, x), b = predict(loaded.model, x);
  EXPECT_EQ(a.sign, b.sign);
  EXPECT_EQ(a.phrase, b.phrase);
}

TEST(Checkpoint, TruncationFailsChecksum) {
  const auto text = serialize_checkpoint(init_model<float>(small_config(5, 4, 1)));
  try {
    parse_checkpoint(text.substr(0, text.size() - 40));
    FAIL() << "expected a checksum error";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("checksum"), std::string::npos) << e.what();
  }
}

TEST(Checkpoint, ConfigMismatch) {
  const auto text = serialize_checkpoint(init_model<float>(small_config(5, 4, 1)));
  const auto newline = text.find('\n');
  auto manifest = nlohmann::json::parse(text.substr(0, newline));
  manifest["config"]["hidden_dim"] = 5;
  auto cfg = small_config(5, 5, 1);
  manifest["parameter_count"] = cfg.parameter_count();
  try {
    parse_checkpoint(manifest.dump() + text.substr(newline));
    FAIL() << "expected a config error";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("config does not match"), std::string::npos) << e.what();
  }
}

TEST(Checkpoint, VersionMismatch) {
  const auto text = serialize_checkpoint(init_model<float>(small_config(5, 4, 1)));
  const auto newline = text.find('\n');
  auto manifest = nlohmann::json::parse(text.substr(0, newline));
  manifest["version"] = "tagger-ckpt/0";
  try {
    parse_checkpoint(manifest.dump() + text.substr(newline));
    FAIL() << "expected a version error";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("version"), std::string::npos) << e.what();
  }
}

TEST(Checkpoint, RefusesNonFinite) {
  auto model = init_model<float>(small_config(5, 4, 1));
  model.params.sign_b(0, 0) = std::numeric_limits<float>::quiet_NaN();
  EXPECT_THROW(serialize_checkpoint(model), Error);
}

}  // namespace
}  // namespace signseg
