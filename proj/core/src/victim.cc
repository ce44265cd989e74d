// Copyright 2026 The advtrain Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "advtrain/victim.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "advtrain/error.h"

namespace advtrain {

namespace {

constexpr double kProbFloor = 1e-12;

ModelParams ZerosLike(const ModelParams& p) {
  ModelParams z;
  z.w1 = Matrix(p.w1.rows, p.w1.cols);
  z.b1.assign(p.b1.size(), 0.0);
  z.w2 = Matrix(p.w2.rows, p.w2.cols);
  z.b2.assign(p.b2.size(), 0.0);
  return z;
}

// Ids of the tokens the model sees; an empty text becomes one OOV token.
std::vector<int> InputIds(const EmbeddingStore& store, const TokenizedText& text) {
  std::vector<int> ids;
  ids.reserve(std::max<std::size_t>(1, text.size()));
  for (const Token& t : text.tokens) ids.push_back(store.IdOrOov(t));
  if (ids.empty()) ids.push_back(EmbeddingStore::kOovId);
  return ids;
}

ForwardTrace RunForward(const Classifier& model, const std::vector<int>& ids) {
  const ModelParams& p = model.params();
  const EmbeddingStore& store = model.store();
  const std::size_t n = ids.size();
  const std::size_t d = p.dim();
  const std::size_t h = p.hidden();
  const std::size_t c = p.num_classes();

  ForwardTrace tr;
  tr.input_embs = Matrix(n, d);
  tr.token_hidden = Matrix(n, h);
  tr.input_mean.assign(d, 0.0);
  tr.pooled.assign(h, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto e = store.Row(ids[i]);
    std::copy(e.begin(), e.end(), tr.input_embs.row(i).begin());
    for (std::size_t j = 0; j < d; ++j) tr.input_mean[j] += e[j];
    auto t = tr.token_hidden.row(i);
    for (std::size_t r = 0; r < h; ++r) {
      t[r] = std::tanh(Dot(p.w1.row(r), e) + p.b1[r]);
      tr.pooled[r] += t[r];
    }
  }
  const double inv_n = 1.0 / static_cast<double>(n);
  for (double& x : tr.input_mean) x *= inv_n;
  for (double& x : tr.pooled) x *= inv_n;

  tr.logits.resize(c);
  for (std::size_t k = 0; k < c; ++k) tr.logits[k] = Dot(p.w2.row(k), tr.pooled) + p.b2[k];
  const double mx = *std::max_element(tr.logits.begin(), tr.logits.end());
  tr.probs.resize(c);
  double z = 0.0;
  for (std::size_t k = 0; k < c; ++k) {
    tr.probs[k] = std::exp(tr.logits[k] - mx);
    z += tr.probs[k];
  }
  for (double& q : tr.probs) q /= z;
  return tr;
}

// Backpropagates the cross-entropy loss from a trace. Fills whichever of the
// outputs are non-null.
void RunBackward(const Classifier& model, const ForwardTrace& tr, int label,
                 ParamGradients* grads, std::vector<Vector>* input_grads) {
  const ModelParams& p = model.params();
  const std::size_t n = tr.input_embs.rows;
  const std::size_t d = p.dim();
  const std::size_t h = p.hidden();
  const std::size_t c = p.num_classes();

  Vector dz = tr.probs;
  dz[label] -= 1.0;

  Vector dpooled(h, 0.0);
  for (std::size_t k = 0; k < c; ++k) {
    const auto w = p.w2.row(k);
    for (std::size_t r = 0; r < h; ++r) dpooled[r] += w[r] * dz[k];
  }
  if (grads) {
    for (std::size_t k = 0; k < c; ++k) {
      auto g = grads->w2.row(k);
      for (std::size_t r = 0; r < h; ++r) g[r] = dz[k] * tr.pooled[r];
      grads->b2[k] = dz[k];
    }
    std::fill(grads->w1.data.begin(), grads->w1.data.end(), 0.0);
    std::fill(grads->b1.begin(), grads->b1.end(), 0.0);
  }
  if (input_grads) input_grads->assign(n, Vector(d, 0.0));

  const double inv_n = 1.0 / static_cast<double>(n);
  Vector da(h);
  for (std::size_t i = 0; i < n; ++i) {
    const auto t = tr.token_hidden.row(i);
    for (std::size_t r = 0; r < h; ++r) da[r] = dpooled[r] * inv_n * (1.0 - t[r] * t[r]);
    const auto e = tr.input_embs.row(i);
    if (grads) {
      for (std::size_t r = 0; r < h; ++r) {
        auto g = grads->w1.row(r);
        for (std::size_t j = 0; j < d; ++j) g[j] += da[r] * e[j];
        grads->b1[r] += da[r];
      }
    }
    if (input_grads) {
      Vector& ge = (*input_grads)[i];
      for (std::size_t r = 0; r < h; ++r) {
        const auto w = p.w1.row(r);
        for (std::size_t j = 0; j < d; ++j) ge[j] += w[j] * da[r];
      }
    }
  }
}

void AdamUpdate(std::span<double> param, std::span<const double> grad,
                std::span<double> m, std::span<double> v, double lr,
                double decay, const OptimizerConfig& cfg, double bc1,
                double bc2) {
  for (std::size_t i = 0; i < param.size(); ++i) {
    m[i] = cfg.beta1 * m[i] + (1.0 - cfg.beta1) * grad[i];
    v[i] = cfg.beta2 * v[i] + (1.0 - cfg.beta2) * grad[i] * grad[i];
    const double mhat = m[i] / bc1;
    const double vhat = v[i] / bc2;
    param[i] *= 1.0 - lr * decay;
    param[i] -= lr * mhat / (std::sqrt(vhat) + cfg.epsilon);
  }
}

void CheckLabel(const Classifier& model, int label) {
  if (label < 0 || static_cast<std::size_t>(label) >= model.num_classes()) {
    throw Error(ErrorCode::kLabelOutOfRange, "label " + std::to_string(label));
  }
}

}  // namespace

Classifier::Classifier(std::shared_ptr<const EmbeddingStore> store,
                       ModelParams params)
    : store_(std::move(store)), params_(std::move(params)) {
  if (!store_) throw Error(ErrorCode::kInvalidArgument, "classifier needs an embedding store");
  const auto& p = params_;
  if (p.w1.cols != store_->dim() || p.b1.size() != p.w1.rows ||
      p.w2.cols != p.w1.rows || p.b2.size() != p.w2.rows || p.w2.rows < 2) {
    throw Error(ErrorCode::kInvalidArgument, "inconsistent model parameter shapes");
  }
}

Classifier Classifier::Initialize(std::shared_ptr<const EmbeddingStore> store,
                                  std::size_t hidden, std::size_t num_classes,
                                  std::uint64_t seed) {
  if (!store) throw Error(ErrorCode::kInvalidArgument, "classifier needs an embedding store");
  if (hidden == 0 || num_classes < 2) {
    throw Error(ErrorCode::kInvalidArgument, "need hidden >= 1 and at least two classes");
  }
  std::mt19937_64 rng(seed);
  auto glorot = [&](Matrix& m) {
    const double limit = std::sqrt(6.0 / static_cast<double>(m.rows + m.cols));
    std::uniform_real_distribution<double> dist(-limit, limit);
    for (double& x : m.data) x = dist(rng);
  };
  ModelParams p;
  p.w1 = Matrix(hidden, store->dim());
  p.b1.assign(hidden, 0.0);
  p.w2 = Matrix(num_classes, hidden);
  p.b2.assign(num_classes, 0.0);
  glorot(p.w1);
  glorot(p.w2);
  return Classifier(std::move(store), std::move(p));
}

ForwardTrace Forward(const Classifier& model, const TokenizedText& text,
                     QueryMeter* meter) {
  if (meter) meter->Consume();
  return RunForward(model, InputIds(model.store(), text));
}

double Loss(const ForwardTrace& trace, int label) {
  if (label < 0 || static_cast<std::size_t>(label) >= trace.probs.size()) {
    throw Error(ErrorCode::kLabelOutOfRange, "label " + std::to_string(label));
  }
  return -std::log(std::max(trace.probs.at(label), kProbFloor));
}

int Argmax(std::span<const double> values) {
  return static_cast<int>(std::max_element(values.begin(), values.end()) - values.begin());
}

InputGradients BackwardToInputs(const Classifier& model,
                                const TokenizedText& text, int label,
                                QueryMeter* meter) {
  CheckLabel(model, label);
  if (meter) meter->Consume();
  const auto ids = InputIds(model.store(), text);
  const ForwardTrace tr = RunForward(model, ids);
  InputGradients out;
  RunBackward(model, tr, label, nullptr, &out.per_token);
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (ids[i] < 0) std::fill(out.per_token[i].begin(), out.per_token[i].end(), 0.0);
  }
  if (text.empty()) out.per_token.clear();
  return out;
}

ParamGradients LossGradients(const Classifier& model, const TokenizedText& text,
                             int label, double* loss_out) {
  CheckLabel(model, label);
  const ForwardTrace tr = RunForward(model, InputIds(model.store(), text));
  ParamGradients g = ZerosLike(model.params());
  RunBackward(model, tr, label, &g, nullptr);
  if (loss_out) *loss_out = Loss(tr, label);
  return g;
}

Vector SentenceEmbedding(const ForwardTrace& trace, RepresentationLayer layer) {
  return layer == RepresentationLayer::kClassifierInput ? trace.pooled
                                                        : trace.input_mean;
}

OptimizerConfig TransformerFineTuningPreset() {
  OptimizerConfig cfg;
  cfg.learning_rate = 5e-5;
  cfg.weight_decay = 0.01;
  cfg.warmup_steps = 500;
  return cfg;
}

OptimizerState OptimizerState::ForModel(const Classifier& model,
                                        const OptimizerConfig& config) {
  OptimizerState s;
  s.config = config;
  s.first_moment = ZerosLike(model.params());
  s.second_moment = ZerosLike(model.params());
  return s;
}

double OptimizerState::CurrentLearningRate() const {
  if (config.warmup_steps <= 0 || step >= config.warmup_steps) return config.learning_rate;
  return config.learning_rate * static_cast<double>(step) /
         static_cast<double>(config.warmup_steps);
}

double TrainStep(Classifier& model, std::span<const WeightedExample> batch,
                 OptimizerState& opt, std::vector<double>* example_losses) {
  if (batch.empty()) throw Error(ErrorCode::kInvalidArgument, "empty batch");
  if (example_losses) example_losses->assign(batch.size(), 0.0);
  ParamGradients total = ZerosLike(model.params());
  double weight_sum = 0.0;
  double loss_sum = 0.0;
  for (std::size_t b = 0; b < batch.size(); ++b) {
    const WeightedExample& ex = batch[b];
    if (!(ex.weight >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "negative example weight");
    // Zero-weight examples are skipped outright so that they leave no trace,
    // not even a signed zero, in the accumulated gradient.
    if (ex.weight == 0.0) continue;
    double loss = 0.0;
    const ParamGradients g = LossGradients(model, *ex.text, ex.label, &loss);
    if (example_losses) (*example_losses)[b] = loss;
    auto axpy = [w = ex.weight](std::span<double> acc, std::span<const double> x) {
      for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += w * x[i];
    };
    axpy(total.w1.data, g.w1.data);
    axpy(total.b1, g.b1);
    axpy(total.w2.data, g.w2.data);
    axpy(total.b2, g.b2);
    weight_sum += ex.weight;
    loss_sum += ex.weight * loss;
  }
  if (weight_sum == 0.0) return 0.0;
  for (auto* v : {&total.w1.data, &total.b1, &total.w2.data, &total.b2}) {
    for (double& x : *v) x /= weight_sum;
  }

  ++opt.step;
  const double lr = opt.CurrentLearningRate();
  const auto& cfg = opt.config;
  const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(opt.step));
  const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(opt.step));
  ModelParams& p = model.mutable_params();
  AdamUpdate(p.w1.data, total.w1.data, opt.first_moment.w1.data,
             opt.second_moment.w1.data, lr, cfg.weight_decay, cfg, bc1, bc2);
  AdamUpdate(p.b1, total.b1, opt.first_moment.b1, opt.second_moment.b1, lr, 0.0,
             cfg, bc1, bc2);
  AdamUpdate(p.w2.data, total.w2.data, opt.first_moment.w2.data,
             opt.second_moment.w2.data, lr, cfg.weight_decay, cfg, bc1, bc2);
  AdamUpdate(p.b2, total.b2, opt.first_moment.b2, opt.second_moment.b2, lr, 0.0,
             cfg, bc1, bc2);
  return loss_sum / weight_sum;
}

}  // namespace advtrain
