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

#ifndef ADVTRAIN_VICTIM_H_
#define ADVTRAIN_VICTIM_H_

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "advtrain/embedding.h"
#include "advtrain/matrix.h"
#include "advtrain/query_meter.h"
#include "advtrain/text.h"

namespace advtrain {

// theta. Embeddings are frozen and live in the EmbeddingStore.
struct ModelParams {
  Matrix w1;  // hidden x dim
  Vector b1;  // hidden
  Matrix w2;  // classes x hidden
  Vector b2;  // classes

  std::size_t dim() const { return w1.cols; }
  std::size_t hidden() const { return w1.rows; }
  std::size_t num_classes() const { return w2.rows; }
  bool operator==(const ModelParams&) const = default;
};

// Same shapes as ModelParams.
using ParamGradients = ModelParams;

// Intermediate values of one forward pass:
//   t_i    = tanh(W1 e_i + b1)          per token
//   pooled = mean_i t_i
//   probs  = softmax(W2 pooled + b2)
// An empty token sequence is evaluated as a single OOV (zero) token.
struct ForwardTrace {
  Matrix input_embs;    // n x dim
  Matrix token_hidden;  // n x hidden
  Vector input_mean;    // dim; mean of input_embs
  Vector pooled;        // hidden; consumed by the output layer
  Vector logits;
  Vector probs;
};

struct InputGradients {
  // d loss / d e_i per token. OOV tokens get a zero vector: their gradient is
  // discarded since no substitution candidates exist for them.
  std::vector<Vector> per_token;
};

enum class RepresentationLayer {
  kClassifierInput,  // pooled hidden vector fed to the output layer
  kInputMean,        // mean of frozen input embeddings
};

class Classifier {
 public:
  Classifier(std::shared_ptr<const EmbeddingStore> store, ModelParams params);

  // Glorot-uniform weights, zero biases.
  static Classifier Initialize(std::shared_ptr<const EmbeddingStore> store,
                               std::size_t hidden, std::size_t num_classes,
                               std::uint64_t seed);

  const EmbeddingStore& store() const { return *store_; }
  const std::shared_ptr<const EmbeddingStore>& store_ptr() const {
    return store_;
  }
  const ModelParams& params() const { return params_; }
  ModelParams& mutable_params() { return params_; }
  std::size_t num_classes() const { return params_.num_classes(); }

 private:
  std::shared_ptr<const EmbeddingStore> store_;
  ModelParams params_;
};

// One model query; consumes one unit from `meter` when given.
ForwardTrace Forward(const Classifier& model, const TokenizedText& text,
                     QueryMeter* meter = nullptr);

// -log max(probs[y], 1e-12).
double Loss(const ForwardTrace& trace, int label);

int Argmax(std::span<const double> values);

// Exact gradient of the loss w.r.t. every input embedding. Counts as one
// query (one forward and one backward pass).
InputGradients BackwardToInputs(const Classifier& model,
                                const TokenizedText& text, int label,
                                QueryMeter* meter = nullptr);

// Gradient of the loss w.r.t. W1, b1, W2, b2. Unmetered; used by training.
ParamGradients LossGradients(const Classifier& model, const TokenizedText& text,
                             int label, double* loss_out = nullptr);

Vector SentenceEmbedding(
    const ForwardTrace& trace,
    RepresentationLayer layer = RepresentationLayer::kClassifierInput);

struct OptimizerConfig {
  double learning_rate = 1e-3;
  double weight_decay = 0.01;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  // Linear warm-up from 0 to learning_rate over this many steps; 0 disables.
  long warmup_steps = 0;

  bool operator==(const OptimizerConfig&) const = default;
};

// Preset matching large-model fine-tuning (lr 5e-5, 500 warm-up steps).
OptimizerConfig TransformerFineTuningPreset();

struct OptimizerState {
  OptimizerConfig config;
  long step = 0;
  ModelParams first_moment;
  ModelParams second_moment;

  static OptimizerState ForModel(const Classifier& model,
                                 const OptimizerConfig& config);
  double CurrentLearningRate() const;
};

struct WeightedExample {
  const TokenizedText* text = nullptr;
  int label = 0;
  double weight = 1.0;
};

// One AdamW (decoupled weight decay) update on W1, b1, W2, b2 using the
// weight-normalized gradient sum_i w_i g_i / sum_i w_i. Weight decay applies
// to the weight matrices only. A batch whose weights sum to zero is a no-op
// (no moment update, no step count). Returns the weighted mean loss; when
// `example_losses` is given it receives each example's loss (0 for
// zero-weight examples, which are not evaluated).
double TrainStep(Classifier& model, std::span<const WeightedExample> batch,
                 OptimizerState& opt,
                 std::vector<double>* example_losses = nullptr);

}  // namespace advtrain

#endif  // ADVTRAIN_VICTIM_H_
