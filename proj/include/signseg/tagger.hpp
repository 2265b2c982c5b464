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

// Frame tagger: affine input projection, a stack of (bi)directional LSTM
// layers and two softmax heads (sign, phrase), trained with class-weighted
// cross-entropy through full-sequence backpropagation and Adam.
//
// Matrices keep time along columns: a T-frame sequence of D-dim vectors is a
// D x T matrix. LSTM gate rows are ordered input, forget, cell, output.

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <type_traits>
#include <vector>

#include <Eigen/Dense>

#include "signseg/motion.hpp"
#include "signseg/tags.hpp"

namespace signseg {

using ClassWeights = std::array<double, kTagCount>;

struct TaggerConfig {
  int input_dim = 0;
  int hidden_dim = 256;
  int layers = 4;
  bool bidirectional = true;
  double learning_rate = 1e-3;
  ClassWeights sign_weights{1, 1, 1};
  ClassWeights phrase_weights{1, 1, 1};
  std::uint64_t seed = 0;
  double dropout = 0.0;    // between recurrent layers and before the heads
  double clip_norm = 0.0;  // global gradient norm; 0 disables

  int directions() const { return bidirectional ? 2 : 1; }
  int encoder_dim() const { return hidden_dim * directions(); }

  const ClassWeights& weights(Tier t) const { return t == Tier::Sign ? sign_weights : phrase_weights; }

  void validate() const {
    if (input_dim <= 0 || hidden_dim <= 0 || layers <= 0)
      throw Error("tagger", "input_dim, hidden_dim and layers must be positive");
    for (const auto* w : {&sign_weights, &phrase_weights})
      for (double v : *w)
        if (!(v > 0) || !std::isfinite(v)) throw Error("tagger", "class weights must be positive");
    if (!(learning_rate >= 0)) throw Error("tagger", "learning rate must be non-negative");
    if (!(dropout >= 0 && dropout < 1)) throw Error("tagger", "dropout must lie in [0, 1)");
    if (!(clip_norm >= 0)) throw Error("tagger", "clip norm must be non-negative");
  }

  // Closed form of the number of trainable scalars:
  //   in*H + H                                     projection
  //   + sum_l dirs * (4H * (in_l + H) + 4H)        in_0 = H, in_l = H * dirs
  //   + 2 * (3 * H * dirs + 3)                     heads
  std::int64_t parameter_count() const {
    const std::int64_t h = hidden_dim, d = directions();
    std::int64_t n = static_cast<std::int64_t>(input_dim) * h + h;
    for (int l = 0; l < layers; ++l) {
      const std::int64_t in = l == 0 ? h : h * d;
      n += d * (4 * h * (in + h) + 4 * h);
    }
    n += 2 * (3 * h * d + 3);
    return n;
  }
};

inline constexpr const char* kParameterCountFormula =
    "in*H + H + sum_l dirs*(4H*(in_l + H) + 4H) + 2*(3*H*dirs + 3); in_0 = H, in_l = H*dirs";

// Weights w_c = N / (3 * count_c) from tag frequencies; absent classes get 1.
inline ClassWeights class_weights_from_counts(const std::array<std::size_t, kTagCount>& counts) {
  double total = 0;
  for (auto c : counts) total += static_cast<double>(c);
  ClassWeights w{1, 1, 1};
  for (int c = 0; c < kTagCount; ++c)
    if (counts[c] > 0) w[c] = total / (kTagCount * static_cast<double>(counts[c]));
  return w;
}

inline ClassWeights class_weights_from_tags(const std::vector<const std::vector<Tag>*>& corpus) {
  std::array<std::size_t, kTagCount> counts{0, 0, 0};
  for (const auto* tags : corpus)
    for (Tag t : *tags) ++counts[static_cast<int>(t)];
  return class_weights_from_counts(counts);
}

template <typename Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
struct LstmCellParams {
  Mat<Scalar> w_ih;  // 4H x in
  Mat<Scalar> w_hh;  // 4H x H
  Mat<Scalar> bias;  // 4H x 1
};

template <typename Scalar>
struct TaggerParams {
  Mat<Scalar> proj_w;  // H x input
  Mat<Scalar> proj_b;  // H x 1
  std::vector<std::vector<LstmCellParams<Scalar>>> lstm;  // [layer][direction]
  Mat<Scalar> sign_w;    // 3 x encoder_dim
  Mat<Scalar> sign_b;    // 3 x 1
  Mat<Scalar> phrase_w;  // 3 x encoder_dim
  Mat<Scalar> phrase_b;  // 3 x 1

  static TaggerParams zeros(const TaggerConfig& cfg) {
    const int h = cfg.hidden_dim, d = cfg.directions();
    TaggerParams p;
    p.proj_w = Mat<Scalar>::Zero(h, cfg.input_dim);
    p.proj_b = Mat<Scalar>::Zero(h, 1);
    p.lstm.resize(static_cast<std::size_t>(cfg.layers));
    for (int l = 0; l < cfg.layers; ++l) {
      const int in = l == 0 ? h : h * d;
      for (int dir = 0; dir < d; ++dir)
        p.lstm[static_cast<std::size_t>(l)].push_back(
            {Mat<Scalar>::Zero(4 * h, in), Mat<Scalar>::Zero(4 * h, h), Mat<Scalar>::Zero(4 * h, 1)});
    }
    p.sign_w = Mat<Scalar>::Zero(kTagCount, h * d);
    p.sign_b = Mat<Scalar>::Zero(kTagCount, 1);
    p.phrase_w = Mat<Scalar>::Zero(kTagCount, h * d);
    p.phrase_b = Mat<Scalar>::Zero(kTagCount, 1);
    return p;
  }

  // Visits every parameter tensor with its stable name, in checkpoint order.
  template <typename F>
  void for_each(F&& f) {
    f(std::string("proj.weight"), proj_w);
    f(std::string("proj.bias"), proj_b);
    for (std::size_t l = 0; l < lstm.size(); ++l) {
      for (std::size_t d = 0; d < lstm[l].size(); ++d) {
        const std::string prefix =
            "lstm." + std::to_string(l) + (d == 0 ? ".forward." : ".backward.");
        f(prefix + "w_ih", lstm[l][d].w_ih);
        f(prefix + "w_hh", lstm[l][d].w_hh);
        f(prefix + "bias", lstm[l][d].bias);
      }
    }
    f(std::string("sign_head.weight"), sign_w);
    f(std::string("sign_head.bias"), sign_b);
    f(std::string("phrase_head.weight"), phrase_w);
    f(std::string("phrase_head.bias"), phrase_b);
  }

  template <typename F>
  void for_each(F&& f) const {
    const_cast<TaggerParams*>(this)->for_each(
        [&](const std::string& name, Mat<Scalar>& m) { f(name, static_cast<const Mat<Scalar>&>(m)); });
  }

  std::int64_t size() const {
    std::int64_t n = 0;
    for_each([&](const std::string&, const Mat<Scalar>& m) { n += m.size(); });
    return n;
  }
};

template <typename Scalar>
struct TaggerModel {
  TaggerConfig config;
  TaggerParams<Scalar> params;
};

// Training and inference use float; gradient checks use double.
using Tagger = TaggerModel<float>;

template <typename Scalar>
TaggerModel<Scalar> init_model(const TaggerConfig& config) {
  config.validate();
  TaggerModel<Scalar> model{config, TaggerParams<Scalar>::zeros(config)};
  std::mt19937_64 rng(config.seed);
  const double bound = 1.0 / std::sqrt(static_cast<double>(config.hidden_dim));
  std::uniform_real_distribution<double> uniform(-bound, bound);
  model.params.for_each([&](const std::string&, Mat<Scalar>& m) {
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      for (Eigen::Index i = 0; i < m.rows(); ++i) m(i, j) = static_cast<Scalar>(uniform(rng));
  });
  const int h = config.hidden_dim;
  for (auto& layer : model.params.lstm)
    for (auto& cell : layer) cell.bias.block(h, 0, h, 1).setConstant(Scalar(1));
  return model;
}

template <typename To, typename From>
TaggerModel<To> cast_model(const TaggerModel<From>& m) {
  TaggerModel<To> out{m.config, TaggerParams<To>::zeros(m.config)};
  std::vector<const Mat<From>*> src;
  m.params.for_each([&](const std::string&, const Mat<From>& x) { src.push_back(&x); });
  std::size_t i = 0;
  out.params.for_each([&](const std::string&, Mat<To>& x) { x = src[i++]->template cast<To>(); });
  return out;
}

// ---------------------------------------------------------------------------
// Forward pass.

template <typename Scalar>
struct DirectionCache {
  Mat<Scalar> gates;  // 4H x T activated gates (i, f, g, o)
  Mat<Scalar> cell;   // H x T
  Mat<Scalar> hidden; // H x T
};

template <typename Scalar>
struct ForwardCache {
  Mat<Scalar> input;                   // F x T
  std::vector<Mat<Scalar>> layer_in;   // per layer, after dropout
  std::vector<Mat<Scalar>> drop_mask;  // per layer input (layers >= 1) and heads; empty when unused
  std::vector<std::vector<DirectionCache<Scalar>>> dirs;
  Mat<Scalar> encoder;      // encoder_dim x T, after dropout
  Mat<Scalar> sign_logits;  // 3 x T
  Mat<Scalar> phrase_logits;
};

template <typename Scalar>
struct ForwardResult {
  FrameProbs probs;
  ForwardCache<Scalar> cache;
};

namespace detail {

template <typename Scalar>
Mat<Scalar> features_to_columns(const FeatureMatrix& features) {
  using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  Eigen::Map<const RowMajor> rows(features.values.data(), static_cast<Eigen::Index>(features.frames),
                                  static_cast<Eigen::Index>(features.width));
  return rows.transpose().template cast<Scalar>();
}

template <typename Scalar>
Scalar sigmoid(Scalar x) {
  return Scalar(1) / (Scalar(1) + std::exp(-x));
}

template <typename Scalar>
void run_direction(const LstmCellParams<Scalar>& p, const Mat<Scalar>& in, bool reverse,
                   DirectionCache<Scalar>& out) {
  const Eigen::Index h = p.w_hh.cols();
  const Eigen::Index t_len = in.cols();
  Mat<Scalar> pre = p.w_ih * in;
  pre.colwise() += p.bias.col(0);
  out.gates.resize(4 * h, t_len);
  out.cell.resize(h, t_len);
  out.hidden.resize(h, t_len);
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> h_prev = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Zero(h);
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> c_prev = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Zero(h);
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> g(4 * h);
  for (Eigen::Index step = 0; step < t_len; ++step) {
    const Eigen::Index t = reverse ? t_len - 1 - step : step;
    g.noalias() = p.w_hh * h_prev;
    g += pre.col(t);
    for (Eigen::Index k = 0; k < h; ++k) {
      const Scalar i = sigmoid(g(k));
      const Scalar f = sigmoid(g(h + k));
      const Scalar c_hat = std::tanh(g(2 * h + k));
      const Scalar o = sigmoid(g(3 * h + k));
      const Scalar c = f * c_prev(k) + i * c_hat;
      out.gates(k, t) = i;
      out.gates(h + k, t) = f;
      out.gates(2 * h + k, t) = c_hat;
      out.gates(3 * h + k, t) = o;
      out.cell(k, t) = c;
      out.hidden(k, t) = o * std::tanh(c);
    }
    h_prev = out.hidden.col(t);
    c_prev = out.cell.col(t);
  }
}

template <typename Scalar>
Mat<Scalar> dropout_mask(Eigen::Index rows, Eigen::Index cols, double rate, std::mt19937_64& rng) {
  std::bernoulli_distribution keep(1.0 - rate);
  Mat<Scalar> m(rows, cols);
  const Scalar scale = static_cast<Scalar>(1.0 / (1.0 - rate));
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = keep(rng) ? scale : Scalar(0);
  return m;
}

template <typename Scalar>
std::vector<ProbRow> softmax_rows(const Mat<Scalar>& logits) {
  std::vector<ProbRow> rows(static_cast<std::size_t>(logits.cols()));
  for (Eigen::Index t = 0; t < logits.cols(); ++t) {
    const double mx = static_cast<double>(logits.col(t).maxCoeff());
    double sum = 0;
    ProbRow r{};
    for (int c = 0; c < kTagCount; ++c) {
      r[c] = std::exp(static_cast<double>(logits(c, t)) - mx);
      sum += r[c];
    }
    for (auto& v : r) v /= sum;
    rows[static_cast<std::size_t>(t)] = r;
  }
  return rows;
}

}  // namespace detail

// `rng` enables dropout (training only); inference passes nullptr.
template <typename Scalar>
ForwardResult<Scalar> forward(const TaggerModel<Scalar>& model, const FeatureMatrix& features,
                              std::mt19937_64* rng = nullptr) {
  const TaggerConfig& cfg = model.config;
  if (features.width != static_cast<std::size_t>(cfg.input_dim))
    throw Error("forward", "feature width " + std::to_string(features.width) +
                               " does not match model input_dim " + std::to_string(cfg.input_dim));
  const bool drop = rng && cfg.dropout > 0;
  const auto& p = model.params;
  ForwardResult<Scalar> res;
  auto& cache = res.cache;
  cache.input = detail::features_to_columns<Scalar>(features);
  const Eigen::Index t_len = cache.input.cols();

  Mat<Scalar> layer_in = p.proj_w * cache.input;
  layer_in.colwise() += p.proj_b.col(0);
  cache.dirs.resize(static_cast<std::size_t>(cfg.layers));
  cache.drop_mask.assign(static_cast<std::size_t>(cfg.layers) + 1, Mat<Scalar>());
  for (int l = 0; l < cfg.layers; ++l) {
    const auto li = static_cast<std::size_t>(l);
    if (drop && l > 0) {
      cache.drop_mask[li] = detail::dropout_mask<Scalar>(layer_in.rows(), t_len, cfg.dropout, *rng);
      layer_in = layer_in.cwiseProduct(cache.drop_mask[li]);
    }
    cache.layer_in.push_back(layer_in);
    cache.dirs[li].resize(static_cast<std::size_t>(cfg.directions()));
    for (int d = 0; d < cfg.directions(); ++d)
      detail::run_direction(p.lstm[li][static_cast<std::size_t>(d)], layer_in, d == 1,
                            cache.dirs[li][static_cast<std::size_t>(d)]);
    Mat<Scalar> out(cfg.encoder_dim(), t_len);
    for (int d = 0; d < cfg.directions(); ++d)
      out.middleRows(d * cfg.hidden_dim, cfg.hidden_dim) = cache.dirs[li][static_cast<std::size_t>(d)].hidden;
    layer_in = std::move(out);
  }
  if (drop) {
    cache.drop_mask.back() = detail::dropout_mask<Scalar>(layer_in.rows(), t_len, cfg.dropout, *rng);
    layer_in = layer_in.cwiseProduct(cache.drop_mask.back());
  }
  cache.encoder = std::move(layer_in);
  cache.sign_logits = p.sign_w * cache.encoder;
  cache.sign_logits.colwise() += p.sign_b.col(0);
  cache.phrase_logits = p.phrase_w * cache.encoder;
  cache.phrase_logits.colwise() += p.phrase_b.col(0);
  res.probs.sign = detail::softmax_rows(cache.sign_logits);
  res.probs.phrase = detail::softmax_rows(cache.phrase_logits);
  return res;
}

template <typename Scalar>
FrameProbs predict(const TaggerModel<Scalar>& model, const FeatureMatrix& features) {
  return forward(model, features).probs;
}

// ---------------------------------------------------------------------------
// Loss.

struct GoldTags {
  std::vector<Tag> sign;
  std::vector<Tag> phrase;

  const std::vector<Tag>& tier(Tier t) const { return t == Tier::Sign ? sign : phrase; }
};

// Sum over tiers of the per-frame mean of -w[gold] * log p[gold].
inline double weighted_cross_entropy(const FrameProbs& probs, const GoldTags& gold,
                                     const ClassWeights& sign_weights,
                                     const ClassWeights& phrase_weights) {
  double total = 0;
  for (Tier tier : {Tier::Sign, Tier::Phrase}) {
    const auto& rows = probs.tier(tier);
    const auto& tags = gold.tier(tier);
    if (rows.size() != tags.size())
      throw Error("loss", std::string(to_string(tier)) + " probabilities and gold tags differ in length");
    if (rows.empty()) continue;
    const auto& w = tier == Tier::Sign ? sign_weights : phrase_weights;
    double sum = 0;
    for (std::size_t t = 0; t < rows.size(); ++t) {
      const int c = static_cast<int>(tags[t]);
      sum -= w[c] * std::log(rows[t][c]);
    }
    total += sum / static_cast<double>(rows.size());
  }
  return total;
}

namespace detail {

// Loss accumulator: at least double, wider when the parameters are.
template <typename Scalar>
using LossScalar = std::conditional_t<(sizeof(Scalar) > sizeof(double)), Scalar, double>;

// Loss from logits with a numerically stable log-softmax; fills d(loss)/d(logits).
template <typename Scalar>
LossScalar<Scalar> head_loss(const Mat<Scalar>& logits, const std::vector<Tag>& gold, const ClassWeights& w,
                             Mat<Scalar>* grad) {
  using Acc = LossScalar<Scalar>;
  const Eigen::Index t_len = logits.cols();
  if (static_cast<std::size_t>(t_len) != gold.size())
    throw Error("loss", "gold tags and frames differ in length");
  if (grad) grad->setZero(kTagCount, t_len);
  if (t_len == 0) return 0;
  Acc sum = 0;
  const Acc inv_t = Acc(1) / static_cast<Acc>(t_len);
  for (Eigen::Index t = 0; t < t_len; ++t) {
    const Acc mx = static_cast<Acc>(logits.col(t).maxCoeff());
    Acc z = 0;
    for (int c = 0; c < kTagCount; ++c) z += std::exp(static_cast<Acc>(logits(c, t)) - mx);
    const Acc log_z = mx + std::log(z);
    const int y = static_cast<int>(gold[static_cast<std::size_t>(t)]);
    sum += static_cast<Acc>(w[y]) * (log_z - static_cast<Acc>(logits(y, t)));
    if (grad) {
      for (int c = 0; c < kTagCount; ++c) {
        const Acc pc = std::exp(static_cast<Acc>(logits(c, t)) - log_z);
        (*grad)(c, t) = static_cast<Scalar>(static_cast<Acc>(w[y]) * (pc - (c == y ? Acc(1) : Acc(0))) * inv_t);
      }
    }
  }
  return sum * inv_t;
}

}  // namespace detail

template <typename Scalar>
detail::LossScalar<Scalar> sequence_loss(const TaggerModel<Scalar>& model, const ForwardCache<Scalar>& cache,
                     const GoldTags& gold) {
  return detail::head_loss<Scalar>(cache.sign_logits, gold.sign, model.config.sign_weights, nullptr) +
         detail::head_loss<Scalar>(cache.phrase_logits, gold.phrase, model.config.phrase_weights, nullptr);
}

// ---------------------------------------------------------------------------
// Backward pass.

template <typename Scalar>
double backward(const TaggerModel<Scalar>& model, const ForwardCache<Scalar>& cache,
                const GoldTags& gold, TaggerParams<Scalar>& grads) {
  const TaggerConfig& cfg = model.config;
  const auto& p = model.params;
  grads = TaggerParams<Scalar>::zeros(cfg);
  const Eigen::Index t_len = cache.input.cols();
  const Eigen::Index h = cfg.hidden_dim;

  Mat<Scalar> d_sign, d_phrase;
  const double loss =
      detail::head_loss<Scalar>(cache.sign_logits, gold.sign, cfg.sign_weights, &d_sign) +
      detail::head_loss<Scalar>(cache.phrase_logits, gold.phrase, cfg.phrase_weights, &d_phrase);
  if (t_len == 0) return loss;

  grads.sign_w.noalias() = d_sign * cache.encoder.transpose();
  grads.sign_b = d_sign.rowwise().sum();
  grads.phrase_w.noalias() = d_phrase * cache.encoder.transpose();
  grads.phrase_b = d_phrase.rowwise().sum();
  Mat<Scalar> d_out = p.sign_w.transpose() * d_sign;
  d_out.noalias() += p.phrase_w.transpose() * d_phrase;
  if (cache.drop_mask.back().size()) d_out = d_out.cwiseProduct(cache.drop_mask.back());

  Mat<Scalar> dg(4 * h, t_len);
  Mat<Scalar> h_prev(h, t_len);
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> dh_next(h), dc_next(h);
  for (int l = cfg.layers - 1; l >= 0; --l) {
    const auto li = static_cast<std::size_t>(l);
    const Mat<Scalar>& in = cache.layer_in[li];
    Mat<Scalar> d_in = Mat<Scalar>::Zero(in.rows(), t_len);
    for (int d = 0; d < cfg.directions(); ++d) {
      const auto di = static_cast<std::size_t>(d);
      const auto& c = cache.dirs[li][di];
      const auto& cell = p.lstm[li][di];
      auto& g = grads.lstm[li][di];
      const bool reverse = d == 1;
      dh_next.setZero();
      dc_next.setZero();
      for (Eigen::Index step = t_len - 1; step >= 0; --step) {
        const Eigen::Index t = reverse ? t_len - 1 - step : step;
        const Eigen::Index t_prev = reverse ? t + 1 : t - 1;
        const bool has_prev = step > 0;
        for (Eigen::Index k = 0; k < h; ++k) {
          const Scalar i = c.gates(k, t), f = c.gates(h + k, t);
          const Scalar c_hat = c.gates(2 * h + k, t), o = c.gates(3 * h + k, t);
          const Scalar tc = std::tanh(c.cell(k, t));
          const Scalar dh = d_out(d * h + k, t) + dh_next(k);
          const Scalar dc = dh * o * (Scalar(1) - tc * tc) + dc_next(k);
          const Scalar c_before = has_prev ? c.cell(k, t_prev) : Scalar(0);
          dg(k, t) = dc * c_hat * i * (Scalar(1) - i);
          dg(h + k, t) = dc * c_before * f * (Scalar(1) - f);
          dg(2 * h + k, t) = dc * i * (Scalar(1) - c_hat * c_hat);
          dg(3 * h + k, t) = dh * tc * o * (Scalar(1) - o);
          dc_next(k) = dc * f;
          h_prev(k, t) = has_prev ? c.hidden(k, t_prev) : Scalar(0);
        }
        dh_next.noalias() = cell.w_hh.transpose() * dg.col(t);
      }
      g.w_hh.noalias() = dg * h_prev.transpose();
      g.w_ih.noalias() = dg * in.transpose();
      g.bias = dg.rowwise().sum();
      d_in.noalias() += cell.w_ih.transpose() * dg;
    }
    if (cache.drop_mask[li].size()) d_in = d_in.cwiseProduct(cache.drop_mask[li]);
    d_out = std::move(d_in);
  }
  grads.proj_w.noalias() = d_out * cache.input.transpose();
  grads.proj_b = d_out.rowwise().sum();
  return loss;
}

// ---------------------------------------------------------------------------
// Optimizer.

template <typename Scalar>
struct AdamState {
  TaggerParams<Scalar> m;
  TaggerParams<Scalar> v;
  std::int64_t step = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  static AdamState create(const TaggerConfig& cfg) {
    return {TaggerParams<Scalar>::zeros(cfg), TaggerParams<Scalar>::zeros(cfg)};
  }
};

template <typename Scalar>
void adam_update(TaggerModel<Scalar>& model, const TaggerParams<Scalar>& grads, AdamState<Scalar>& state) {
  ++state.step;
  double scale = 1.0;
  if (model.config.clip_norm > 0) {
    double sq = 0;
    grads.for_each([&](const std::string&, const Mat<Scalar>& g) {
      sq += static_cast<double>(g.squaredNorm());
    });
    const double norm = std::sqrt(sq);
    if (norm > model.config.clip_norm) scale = model.config.clip_norm / norm;
  }
  const double b1 = state.beta1, b2 = state.beta2;
  const double corr1 = 1.0 - std::pow(b1, static_cast<double>(state.step));
  const double corr2 = 1.0 - std::pow(b2, static_cast<double>(state.step));
  const double lr = model.config.learning_rate;
  std::vector<const Mat<Scalar>*> g_list;
  std::vector<Mat<Scalar>*> m_list, v_list;
  grads.for_each([&](const std::string&, const Mat<Scalar>& x) { g_list.push_back(&x); });
  state.m.for_each([&](const std::string&, Mat<Scalar>& x) { m_list.push_back(&x); });
  state.v.for_each([&](const std::string&, Mat<Scalar>& x) { v_list.push_back(&x); });
  std::size_t idx = 0;
  model.params.for_each([&](const std::string&, Mat<Scalar>& w) {
    const auto g = (g_list[idx]->array() * static_cast<Scalar>(scale)).eval();
    auto& m = *m_list[idx];
    auto& v = *v_list[idx];
    m.array() = static_cast<Scalar>(b1) * m.array() + static_cast<Scalar>(1 - b1) * g;
    v.array() = static_cast<Scalar>(b2) * v.array() + static_cast<Scalar>(1 - b2) * g.square();
    if (lr != 0) {
      w.array() -= static_cast<Scalar>(lr) * (m.array() / static_cast<Scalar>(corr1)) /
                   ((v.array() / static_cast<Scalar>(corr2)).sqrt() + static_cast<Scalar>(state.epsilon));
    }
    ++idx;
  });
}

// One full-sequence update. Returns the loss before the update.
template <typename Scalar>
double train_step(TaggerModel<Scalar>& model, const FeatureMatrix& features, const GoldTags& gold,
                  AdamState<Scalar>& state, std::mt19937_64* dropout_rng = nullptr) {
  const auto fwd = forward(model, features, dropout_rng);
  TaggerParams<Scalar> grads;
  const double loss = backward(model, fwd.cache, gold, grads);
  if (!std::isfinite(loss))
    throw Error("train", "non-finite loss at optimizer step " + std::to_string(state.step + 1));
  adam_update(model, grads, state);
  return loss;
}

// ---------------------------------------------------------------------------
// Gradient check.

struct GradientCheckResult {
  double max_relative_error = 0;
  std::map<std::string, double> per_group;  // parameter name -> max relative error
};

using GradientTamper = std::function<void(TaggerParams<double>&)>;

// Central finite differences against the analytic gradient for every scalar
// parameter. Error per entry: |a - f| / max(|a|, |f|, 1e-8). The differences
// are taken in extended precision. `tamper` edits the analytic gradient
// before comparison (mutation tests).
inline GradientCheckResult gradient_check(const TaggerModel<double>& model, const FeatureMatrix& features,
                                          const GoldTags& gold, double eps = 1e-4,
                                          const GradientTamper& tamper = {}) {
  if (!(eps > 0)) throw Error("gradient-check", "eps must be positive");
  TaggerParams<double> analytic;
  backward(model, forward(model, features).cache, gold, analytic);
  if (tamper) tamper(analytic);

  using Wide = long double;
  TaggerModel<Wide> probe = cast_model<Wide>(model);
  std::vector<const Mat<double>*> grads;
  analytic.for_each([&](const std::string&, const Mat<double>& g) { grads.push_back(&g); });
  auto loss_at = [&]() -> Wide { return sequence_loss(probe, forward(probe, features).cache, gold); };

  GradientCheckResult result;
  std::size_t idx = 0;
  const Wide step = eps;
  probe.params.for_each([&](const std::string& name, Mat<Wide>& w) {
    double worst = 0;
    for (Eigen::Index k = 0; k < w.size(); ++k) {
      const Wide saved = w.data()[k];
      w.data()[k] = saved + step;
      const Wide up = loss_at();
      w.data()[k] = saved - step;
      const Wide down = loss_at();
      w.data()[k] = saved;
      const double numeric = static_cast<double>((up - down) / (2 * step));
      const double a = grads[idx]->data()[k];
      const double denom = std::max({std::abs(a), std::abs(numeric), 1e-8});
      worst = std::max(worst, std::abs(a - numeric) / denom);
    }
    result.per_group[name] = worst;
    result.max_relative_error = std::max(result.max_relative_error, worst);
    ++idx;
  });
  return result;
}

}  // namespace signseg
