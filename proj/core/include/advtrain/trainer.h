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

#ifndef ADVTRAIN_TRAINER_H_
#define ADVTRAIN_TRAINER_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <string_view>
#include <vector>

#include "advtrain/attack.h"
#include "advtrain/dataset.h"
#include "advtrain/victim.h"

namespace advtrain {

struct TrainingConfig {
  int n_clean = 1;
  int n_adv = 3;
  double gamma = 0.2;
  double alpha = 1.0;
  AttackConfig attack = [] {
    AttackConfig cfg;
    cfg.query_budget = kTrainingQueryBudget;
    return cfg;
  }();
  std::size_t batch_size = 32;
  std::size_t hidden = 64;
  std::uint64_t seed = 0;
  OptimizerConfig optimizer;
  // Attack-generation threads; training itself is single-threaded.
  int workers = 1;

  // Throws Error(kConfigError).
  void Validate() const;
  bool operator==(const TrainingConfig&) const = default;
};

enum class EpochKind { kClean, kAdversarial };
std::string_view EpochKindName(EpochKind kind);

struct EpochReport {
  int epoch = 0;
  EpochKind kind = EpochKind::kClean;
  double mean_clean_loss = 0.0;
  double mean_adv_loss = 0.0;
  std::size_t adv_generated = 0;
  std::size_t adv_failed_skipped = 0;
  std::size_t attacks_launched = 0;
  long attack_queries = 0;
  double wall_seconds = 0.0;
};

// clean + alpha * adversarial.
double CombinedLoss(double clean_loss, double adv_loss, double alpha);

// Number of successes at which generation stops: the smallest m with
// m >= gamma * n.
std::size_t AdversarialTarget(std::size_t dataset_size, double gamma);

// Random permutation of 0..n-1 determined by `seed`.
std::vector<std::size_t> ShuffledOrder(std::size_t n, std::uint64_t seed);

// Shuffled order cut into consecutive batches (last one may be short).
std::vector<std::vector<std::size_t>> EpochBatches(std::size_t n,
                                                   std::size_t batch_size,
                                                   std::uint64_t seed);

// Per-epoch seeds for the training-pass shuffle and the attack order.
std::uint64_t BatchSeed(std::uint64_t base_seed, int epoch);
std::uint64_t AttackOrderSeed(std::uint64_t base_seed, int epoch);

struct AdversarialSet {
  std::vector<LabeledExample> examples;
  std::vector<std::size_t> source_indices;  // index into D per example
  std::vector<std::size_t> attack_order;    // shuffled order of D
  std::size_t attacks_launched = 0;
  std::size_t failed_skipped = 0;
  long queries = 0;
};

// Attacks D in shuffled order until ceil(gamma |D|) successes or D runs out.
// Failed and exhausted attacks are skipped. With workers > 1, attacks run in
// parallel chunks but the result equals the sequential one.
AdversarialSet GenerateAdversarialSet(const Classifier& model,
                                      const Dataset& data, double gamma,
                                      const AttackConfig& attack_cfg,
                                      const AttackContext& ctx,
                                      std::uint64_t order_seed,
                                      int workers = 1);

// One pass of train steps over `examples` in the batches given by `batches`
// (indices into `examples`), with per-example `weights`. Examples at index
// >= clean_count are adversarial; their mean loss is reported separately.
void TrainOnBatches(Classifier& model, OptimizerState& opt,
                    std::span<const LabeledExample> examples,
                    std::span<const double> weights,
                    std::span<const std::vector<std::size_t>> batches,
                    std::size_t clean_count, EpochReport& report);

// Throws Error(kEmptyDataset) on an empty D.
EpochReport RunCleanEpoch(Classifier& model, OptimizerState& opt,
                          const Dataset& data, const TrainingConfig& cfg,
                          int epoch);

// Generates D_adv against the current model, then trains on D + D_adv with
// clean weight 1 and adversarial weight alpha.
EpochReport RunAdversarialEpoch(Classifier& model, OptimizerState& opt,
                                const Dataset& data, const TrainingConfig& cfg,
                                const AttackContext& ctx, int epoch,
                                AdversarialSet* generated = nullptr);

struct TrainResult {
  Classifier model;
  OptimizerState optimizer;
  std::vector<EpochReport> reports;
};

using EpochCallback = std::function<void(
    const Classifier&, const OptimizerState&, const EpochReport&)>;

// n_clean clean epochs followed by n_adv adversarial epochs from a freshly
// initialized model. `on_epoch` runs after every epoch (checkpointing).
TrainResult Train(std::shared_ptr<const EmbeddingStore> store,
                  const Dataset& data, const TrainingConfig& cfg,
                  const AttackContext& ctx, const EpochCallback& on_epoch = {});

}  // namespace advtrain

#endif  // ADVTRAIN_TRAINER_H_
