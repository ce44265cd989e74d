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

#include "advtrain/trainer.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <random>

#include "advtrain/error.h"
#include "advtrain/hash.h"

namespace advtrain {

namespace {

constexpr std::uint64_t kStreamBatches = 1;
constexpr std::uint64_t kStreamAttackOrder = 2;
constexpr std::uint64_t kStreamInit = 3;

double Seconds(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - since).count();
}

}  // namespace

void TrainingConfig::Validate() const {
  if (n_clean < 0 || n_adv < 0 || n_clean + n_adv < 1) {
    throw Error(ErrorCode::kConfigError, "need n_clean, n_adv >= 0 and n_clean + n_adv >= 1");
  }
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw Error(ErrorCode::kConfigError, "gamma must be in [0, 1]");
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw Error(ErrorCode::kConfigError, "alpha must be >= 0");
  if (batch_size < 1) throw Error(ErrorCode::kConfigError, "batch_size must be >= 1");
  if (hidden < 1) throw Error(ErrorCode::kConfigError, "hidden must be >= 1");
  if (workers < 1) throw Error(ErrorCode::kConfigError, "workers must be >= 1");
  if (!(optimizer.learning_rate >= 0.0) || !(optimizer.weight_decay >= 0.0) ||
      !(optimizer.beta1 >= 0.0 && optimizer.beta1 < 1.0) ||
      !(optimizer.beta2 >= 0.0 && optimizer.beta2 < 1.0) || !(optimizer.epsilon > 0.0) ||
      optimizer.warmup_steps < 0) {
    throw Error(ErrorCode::kConfigError, "invalid optimizer settings");
  }
  attack.Validate();
}

std::string_view EpochKindName(EpochKind kind) {
  return kind == EpochKind::kClean ? "clean" : "adversarial";
}

double CombinedLoss(double clean_loss, double adv_loss, double alpha) {
  return clean_loss + alpha * adv_loss;
}

std::size_t AdversarialTarget(std::size_t dataset_size, double gamma) {
  return static_cast<std::size_t>(std::ceil(gamma * static_cast<double>(dataset_size)));
}

std::vector<std::size_t> ShuffledOrder(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  return order;
}

std::vector<std::vector<std::size_t>> EpochBatches(std::size_t n,
                                                   std::size_t batch_size,
                                                   std::uint64_t seed) {
  const auto order = ShuffledOrder(n, seed);
  std::vector<std::vector<std::size_t>> batches;
  for (std::size_t b = 0; b < n; b += batch_size) {
    batches.emplace_back(order.begin() + b, order.begin() + std::min(n, b + batch_size));
  }
  return batches;
}

std::uint64_t BatchSeed(std::uint64_t base_seed, int epoch) {
  return MixSeed(base_seed, static_cast<std::uint64_t>(epoch), kStreamBatches);
}

std::uint64_t AttackOrderSeed(std::uint64_t base_seed, int epoch) {
  return MixSeed(base_seed, static_cast<std::uint64_t>(epoch), kStreamAttackOrder);
}

AdversarialSet GenerateAdversarialSet(const Classifier& model,
                                      const Dataset& data, double gamma,
                                      const AttackConfig& attack_cfg,
                                      const AttackContext& ctx,
                                      std::uint64_t order_seed, int workers) {
  AdversarialSet out;
  const std::size_t n = data.size();
  const std::size_t target = AdversarialTarget(n, gamma);
  out.attack_order = ShuffledOrder(n, order_seed);
  if (target == 0) return out;

  // Attacks are independent, so a chunk can be attacked in parallel and its
  // results consumed in order; anything past the stopping point is dropped
  // and never counted.
  const std::size_t chunk = workers <= 1 ? 1 : static_cast<std::size_t>(workers) * 4;
  std::size_t next = 0;
  while (out.examples.size() < target && next < n) {
    const std::size_t end = std::min(n, next + chunk);
    std::vector<LabeledExample> batch;
    for (std::size_t j = next; j < end; ++j) batch.push_back(data.examples[out.attack_order[j]]);
    const auto results = AttackAll(model, batch, attack_cfg, ctx, workers);
    for (std::size_t j = 0; j < results.size() && out.examples.size() < target; ++j) {
      const AttackResult& r = results[j];
      ++out.attacks_launched;
      out.queries += r.queries_used;
      if (r.status == AttackStatus::kSuccess) {
        out.examples.push_back({r.perturbed, r.original.label});
        out.source_indices.push_back(out.attack_order[next + j]);
      } else {
        ++out.failed_skipped;
      }
    }
    next = end;
  }
  return out;
}

void TrainOnBatches(Classifier& model, OptimizerState& opt,
                    std::span<const LabeledExample> examples,
                    std::span<const double> weights,
                    std::span<const std::vector<std::size_t>> batches,
                    std::size_t clean_count, EpochReport& report) {
  double clean_sum = 0.0, adv_sum = 0.0;
  std::size_t clean_n = 0, adv_n = 0;
  std::vector<WeightedExample> batch;
  std::vector<double> losses;
  for (const auto& indices : batches) {
    batch.clear();
    for (std::size_t i : indices) {
      batch.push_back({&examples[i].text, examples[i].label, weights[i]});
    }
    TrainStep(model, batch, opt, &losses);
    for (std::size_t b = 0; b < indices.size(); ++b) {
      if (weights[indices[b]] == 0.0) continue;
      if (indices[b] < clean_count) {
        clean_sum += losses[b];
        ++clean_n;
      } else {
        adv_sum += losses[b];
        ++adv_n;
      }
    }
  }
  report.mean_clean_loss = clean_n ? clean_sum / static_cast<double>(clean_n) : 0.0;
  report.mean_adv_loss = adv_n ? adv_sum / static_cast<double>(adv_n) : 0.0;
}

EpochReport RunCleanEpoch(Classifier& model, OptimizerState& opt,
                          const Dataset& data, const TrainingConfig& cfg,
                          int epoch) {
  if (data.empty()) throw Error(ErrorCode::kEmptyDataset, "cannot train on an empty dataset");
  const auto start = std::chrono::steady_clock::now();
  EpochReport report;
  report.epoch = epoch;
  report.kind = EpochKind::kClean;
  const std::vector<double> weights(data.size(), 1.0);
  const auto batches = EpochBatches(data.size(), cfg.batch_size, BatchSeed(cfg.seed, epoch));
  TrainOnBatches(model, opt, data.examples, weights, batches, data.size(), report);
  report.wall_seconds = Seconds(start);
  return report;
}

EpochReport RunAdversarialEpoch(Classifier& model, OptimizerState& opt,
                                const Dataset& data, const TrainingConfig& cfg,
                                const AttackContext& ctx, int epoch,
                                AdversarialSet* generated) {
  if (data.empty()) throw Error(ErrorCode::kEmptyDataset, "cannot train on an empty dataset");
  const auto start = std::chrono::steady_clock::now();
  EpochReport report;
  report.epoch = epoch;
  report.kind = EpochKind::kAdversarial;

  AdversarialSet adv = GenerateAdversarialSet(model, data, cfg.gamma, cfg.attack, ctx,
                                              AttackOrderSeed(cfg.seed, epoch), cfg.workers);
  report.adv_generated = adv.examples.size();
  report.adv_failed_skipped = adv.failed_skipped;
  report.attacks_launched = adv.attacks_launched;
  report.attack_queries = adv.queries;

  std::vector<LabeledExample> combined = data.examples;
  combined.insert(combined.end(), adv.examples.begin(), adv.examples.end());
  std::vector<double> weights(data.size(), 1.0);
  weights.resize(combined.size(), cfg.alpha);
  const auto batches = EpochBatches(combined.size(), cfg.batch_size, BatchSeed(cfg.seed, epoch));
  TrainOnBatches(model, opt, combined, weights, batches, data.size(), report);

  if (generated) *generated = std::move(adv);
  report.wall_seconds = Seconds(start);
  return report;
}

TrainResult Train(std::shared_ptr<const EmbeddingStore> store,
                  const Dataset& data, const TrainingConfig& cfg,
                  const AttackContext& ctx, const EpochCallback& on_epoch) {
  cfg.Validate();
  if (data.empty()) throw Error(ErrorCode::kEmptyDataset, "cannot train on an empty dataset");
  const std::size_t classes = std::max<std::size_t>(2, data.class_names.size());
  Classifier model = Classifier::Initialize(std::move(store), cfg.hidden, classes,
                                            MixSeed(cfg.seed, 0, kStreamInit));
  OptimizerState opt = OptimizerState::ForModel(model, cfg.optimizer);
  std::vector<EpochReport> reports;
  int epoch = 0;
  for (int e = 0; e < cfg.n_clean; ++e, ++epoch) {
    reports.push_back(RunCleanEpoch(model, opt, data, cfg, epoch));
    if (on_epoch) on_epoch(model, opt, reports.back());
  }
  for (int e = 0; e < cfg.n_adv; ++e, ++epoch) {
    reports.push_back(RunAdversarialEpoch(model, opt, data, cfg, ctx, epoch));
    if (on_epoch) on_epoch(model, opt, reports.back());
  }
  return {std::move(model), std::move(opt), std::move(reports)};
}

}  // namespace advtrain
