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

#ifndef ADVTRAIN_EVAL_H_
#define ADVTRAIN_EVAL_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "advtrain/attack.h"
#include "advtrain/dataset.h"
#include "advtrain/victim.h"

namespace advtrain {

struct AttackSummary {
  std::size_t total_attacked = 0;
  std::size_t successes = 0;
  double success_rate = 0.0;
};

// Failed and Exhausted both count as unsuccessful. kEmptyResults if empty.
AttackSummary AttackSuccessRate(std::span<const AttackResult> results);

// Fraction of examples whose prediction equals the label.
// kEmptySet if empty.
double RobustAccuracy(const Classifier& model,
                      std::span<const LabeledExample> adversarial_set);
// kEmptyDataset if empty.
double Accuracy(const Classifier& model, const Dataset& data);

struct LimeConfig {
  int n_samples = 1000;
  double kernel_width = 0.25;
  double ridge = 1e-3;
  int max_attempts = 3;

  bool operator==(const LimeConfig&) const = default;
};

struct ExplanationWeights {
  std::vector<double> weights;  // one per token
  double intercept = 0.0;
  int n_samples = 0;
  double kernel_width = 0.0;
};

using MaskScoreFn = std::function<double(const std::vector<bool>& keep)>;

// Simplified LIME: random keep/drop masks (p = 0.5 per token), kernel
// exp(-(1 - s)^2 / w^2) with s the kept fraction, ridge-regularized weighted
// least squares of score on mask (unpenalized intercept). Retries with a
// derived seed when every mask is identical; kDegenerateDesign after
// max_attempts.
ExplanationWeights FitLimeSurrogate(std::size_t num_tokens,
                                    const MaskScoreFn& score,
                                    const LimeConfig& cfg, std::uint64_t seed);

// Score = model confidence in `label` on the text with masked tokens deleted.
// Requires >= 2 tokens.
ExplanationWeights LimeExplain(const Classifier& model,
                               const TokenizedText& text, int label,
                               const LimeConfig& cfg, std::uint64_t seed);

// Positions by descending weight, ties by position.
std::vector<std::size_t> RankByExplanation(const ExplanationWeights& w);

using ConfidenceFn = std::function<double(const TokenizedText&, int label)>;

struct AopcReport {
  int k = 0;
  // deltas[i][k-1] = f(x_(0)) - f(x_(k)) for example i; examples shorter than
  // k + 1 tokens have fewer entries.
  std::vector<std::vector<double>> deltas;
  std::vector<double> per_example;
  double mean = 0.0;
};

// AOPC = 1/(K+1) sum_k 1/N sum_i f(x_(0)) - f(x_(k)), with x_(k) the text
// without its top-k ranked tokens. Examples with n < K + 1 tokens use
// K_i = n - 1 and still enter the mean with weight 1.
AopcReport Aopc(const ConfidenceFn& confidence,
                std::span<const LabeledExample> examples,
                std::span<const std::vector<std::size_t>> rankings, int k = 10);
AopcReport Aopc(const Classifier& model,
                std::span<const LabeledExample> examples,
                std::span<const std::vector<std::size_t>> rankings, int k = 10);

using TextPair = std::pair<TokenizedText, TokenizedText>;

// Mean ||rep(x) - rep(x_adv)||_2. kEmptySet if empty.
double RepresentationDistance(
    const Classifier& model, std::span<const TextPair> pairs,
    RepresentationLayer layer = RepresentationLayer::kClassifierInput);

}  // namespace advtrain

#endif  // ADVTRAIN_EVAL_H_
