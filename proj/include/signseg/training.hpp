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

// Training loop with validation frame-F1 model selection and early stopping.

#pragma once

#include <algorithm>
#include <functional>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "signseg/metrics.hpp"
#include "signseg/tagger.hpp"

namespace signseg {

struct TrainingExample {
  std::string name;
  FeatureMatrix features;
  GoldTags gold;
};

struct TrainOptions {
  int max_steps = 500;
  int eval_every = 25;
  int patience = 0;         // evaluations without improvement before stopping; 0 disables
  double target_f1 = 1.0;   // stop as soon as validation F1 reaches this
};

struct TrainLogRow {
  int step = 0;
  double loss = 0;           // mean training loss since the previous evaluation
  double sign_f1 = 0;
  double phrase_f1 = 0;
  double val_f1 = 0;         // mean of the two tiers
};

struct TrainOutcome {
  Tagger best;
  int best_step = 0;
  double best_f1 = -1;
  std::vector<TrainLogRow> log;
  std::vector<double> step_losses;
};

struct FrameF1 {
  double sign = 0;
  double phrase = 0;
  double mean() const { return 0.5 * (sign + phrase); }
};

// Frame-level macro F1 with argmax predictions, pooled over all frames of the set.
template <typename Scalar>
FrameF1 evaluate_frame_f1(const TaggerModel<Scalar>& model, const std::vector<TrainingExample>& set) {
  std::vector<Tag> pred_sign, gold_sign, pred_phrase, gold_phrase;
  for (const auto& ex : set) {
    const auto probs = predict(model, ex.features);
    for (auto t : argmax_tags(probs.sign)) pred_sign.push_back(t);
    for (auto t : argmax_tags(probs.phrase)) pred_phrase.push_back(t);
    gold_sign.insert(gold_sign.end(), ex.gold.sign.begin(), ex.gold.sign.end());
    gold_phrase.insert(gold_phrase.end(), ex.gold.phrase.begin(), ex.gold.phrase.end());
  }
  return {frame_f1(pred_sign, gold_sign), frame_f1(pred_phrase, gold_phrase)};
}

// Sets config class weights from the training tag frequencies of each tier.
inline void fit_class_weights(TaggerConfig& config, const std::vector<TrainingExample>& train) {
  std::vector<const std::vector<Tag>*> sign, phrase;
  for (const auto& ex : train) {
    sign.push_back(&ex.gold.sign);
    phrase.push_back(&ex.gold.phrase);
  }
  config.sign_weights = class_weights_from_tags(sign);
  config.phrase_weights = class_weights_from_tags(phrase);
}

using TrainProgress = std::function<void(const TrainLogRow&)>;

// One sequence per optimizer step, visiting the training set in a freshly
// shuffled order every epoch.
inline TrainOutcome train_tagger(const TaggerConfig& config, const std::vector<TrainingExample>& train,
                                 const std::vector<TrainingExample>& validation, const TrainOptions& options,
                                 const TrainProgress& progress = {}) {
  if (train.empty()) throw Error("train", "training set is empty");
  Tagger model = init_model<float>(config);
  AdamState<float> adam = AdamState<float>::create(config);
  std::mt19937_64 rng(config.seed ^ 0x9e3779b97f4a7c15ULL);
  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), 0);
  std::size_t cursor = order.size();

  TrainOutcome out;
  out.best = model;
  const auto& val = validation.empty() ? train : validation;
  int stale = 0;
  double window_loss = 0;
  int window = 0;
  for (int step = 1; step <= options.max_steps; ++step) {
    if (cursor == order.size()) {
      std::shuffle(order.begin(), order.end(), rng);
      cursor = 0;
    }
    const auto& ex = train[order[cursor++]];
    const double loss = train_step(model, ex.features, ex.gold, adam, &rng);
    out.step_losses.push_back(loss);
    window_loss += loss;
    ++window;

    if (step % options.eval_every == 0 || step == options.max_steps) {
      const FrameF1 f1 = evaluate_frame_f1(model, val);
      TrainLogRow row{step, window_loss / window, f1.sign, f1.phrase, f1.mean()};
      window_loss = 0;
      window = 0;
      out.log.push_back(row);
      if (progress) progress(row);
      if (row.val_f1 > out.best_f1) {
        out.best_f1 = row.val_f1;
        out.best_step = step;
        out.best = model;
        stale = 0;
      } else {
        ++stale;
      }
      if (out.best_f1 >= options.target_f1) break;
      if (options.patience > 0 && stale >= options.patience) break;
    }
  }
  return out;
}

}  // namespace signseg
