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
#include <cmath>
#include <random>
#include <set>

#include "advtrain/error.h"
#include "advtrain/eval.h"
#include "gtest/gtest.h"
#include "support/fixtures.h"

namespace advtrain {
namespace {

using testing::ToyFixture;

Dataset Prefix(const Dataset& d, std::size_t n) {
  Dataset out;
  out.class_names = d.class_names;
  out.examples.assign(d.examples.begin(), d.examples.begin() + std::min(n, d.size()));
  return out;
}

// A victim whose bias decides every prediction regardless of the text.
Classifier BiasedClassifier(std::shared_ptr<const EmbeddingStore> store, double b0, double b1) {
  Classifier model = testing::ZeroClassifier(std::move(store), 4, 2);
  model.mutable_params().b2 = {b0, b1};
  return model;
}

Dataset LabelZeroCorpus(const EmbeddingStore& store, std::size_t n) {
  Dataset d;
  d.class_names = {"a", "b"};
  std::mt19937_64 rng(5);
  for (std::size_t i = 0; i < n; ++i) {
    d.examples.push_back({testing::RandomText(store, 6, rng), 0});
  }
  return d;
}

struct SmallWorld {
  SmallWorld()
      : store(testing::RandomStore(50, 4, 3)),
        cache(NeighborCache::Build(*store, 10, 0.8)),
        encoder(*store),
        proposer(*store, cache, 10) {}
  AttackContext ctx() const { return {*store, lexicon, encoder, proposer}; }

  std::shared_ptr<const EmbeddingStore> store;
  PosLexicon lexicon;
  NeighborCache cache;
  MeanEmbeddingEncoder encoder;
  EmbeddingNeighborProposer proposer;
};

TEST(CombinedLossTest, Arithmetic) {
  EXPECT_DOUBLE_EQ(CombinedLoss(0.7, 3.0, 0.0), 0.7);
  EXPECT_DOUBLE_EQ(CombinedLoss(0.4, 0.6, 1.0), 1.0);
  EXPECT_DOUBLE_EQ(CombinedLoss(1.0, 1.0, 0.5), 1.5);
}

TEST(AdversarialTargetTest, RoundsUp) {
  EXPECT_EQ(AdversarialTarget(100, 0.2), 20u);
  EXPECT_EQ(AdversarialTarget(101, 0.2), 21u);
  EXPECT_EQ(AdversarialTarget(100, 0.0), 0u);
  EXPECT_EQ(AdversarialTarget(7, 1.0), 7u);
}

TEST(TrainingConfigTest, DefaultsAndValidation) {
  TrainingConfig cfg;
  EXPECT_EQ(cfg.n_clean, 1);
  EXPECT_EQ(cfg.n_adv, 3);
  EXPECT_DOUBLE_EQ(cfg.gamma, 0.2);
  EXPECT_DOUBLE_EQ(cfg.alpha, 1.0);
  EXPECT_EQ(cfg.attack.query_budget, kTrainingQueryBudget);
  EXPECT_NO_THROW(cfg.Validate());
  cfg.gamma = 1.5;
  EXPECT_THROW(cfg.Validate(), Error);
  cfg = TrainingConfig{};
  cfg.n_clean = 0;
  cfg.n_adv = 0;
  EXPECT_THROW(cfg.Validate(), Error);
  cfg = TrainingConfig{};
  cfg.alpha = -1;
  EXPECT_THROW(cfg.Validate(), Error);
}

TEST(GenerateAdversarialSetTest, ZeroGammaLaunchesNothing) {
  const SmallWorld w;
  const Dataset d = LabelZeroCorpus(*w.store, 40);
  const AdversarialSet s = GenerateAdversarialSet(BiasedClassifier(w.store, 0, 5), d, 0.0,
                                                  AttackConfig{}, w.ctx(), 1);
  EXPECT_TRUE(s.examples.empty());
  EXPECT_EQ(s.attacks_launched, 0u);
  EXPECT_EQ(s.queries, 0);
}

TEST(GenerateAdversarialSetTest, AllSucceedTakesShuffledPrefix) {
  const SmallWorld w;
  const Dataset d = LabelZeroCorpus(*w.store, 100);
  // Every example is already misclassified, so every attack succeeds.
  const Classifier model = BiasedClassifier(w.store, 0, 5);
  const AdversarialSet s = GenerateAdversarialSet(model, d, 0.2, AttackConfig{}, w.ctx(), 9);
  ASSERT_EQ(s.examples.size(), 20u);
  EXPECT_EQ(s.attacks_launched, 20u);
  EXPECT_EQ(s.failed_skipped, 0u);
  EXPECT_EQ(s.queries, 20);
  for (std::size_t i = 0; i < 20; ++i) {
    EXPECT_EQ(s.source_indices[i], s.attack_order[i]);
    EXPECT_EQ(s.examples[i].text.tokens, d.examples[s.attack_order[i]].text.tokens);
  }
}

TEST(GenerateAdversarialSetTest, AllFailAttacksEverything) {
  const SmallWorld w;
  const Dataset d = LabelZeroCorpus(*w.store, 30);
  const Classifier model = BiasedClassifier(w.store, 40, -40);
  TrainingConfig cfg;
  cfg.gamma = 0.2;
  cfg.n_clean = 0;
  cfg.n_adv = 1;
  cfg.hidden = 4;
  Classifier m = model;
  OptimizerState opt = OptimizerState::ForModel(m, cfg.optimizer);
  AdversarialSet s;
  const EpochReport r = RunAdversarialEpoch(m, opt, d, cfg, w.ctx(), 0, &s);
  EXPECT_TRUE(s.examples.empty());
  EXPECT_EQ(s.attacks_launched, 30u);
  EXPECT_EQ(r.adv_generated, 0u);
  EXPECT_EQ(r.adv_failed_skipped, 30u);
  EXPECT_EQ(r.attacks_launched, 30u);
  EXPECT_GT(r.attack_queries, 30);
}

TEST(ShuffleTest, EpochOrdersDiffer) {
  std::set<std::vector<std::size_t>> orders;
  for (int epoch = 1; epoch <= 3; ++epoch) orders.insert(ShuffledOrder(30, AttackOrderSeed(11, epoch)));
  EXPECT_GT(orders.size(), 1u);
  EXPECT_EQ(ShuffledOrder(30, 4), ShuffledOrder(30, 4));
  auto sorted = ShuffledOrder(30, 4);
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < 30; ++i) EXPECT_EQ(sorted[i], i);
}

TEST(ShuffleTest, BatchesCoverEveryIndexOnce) {
  const auto batches = EpochBatches(70, 32, 3);
  ASSERT_EQ(batches.size(), 3u);
  EXPECT_EQ(batches[2].size(), 6u);
  std::vector<std::size_t> all;
  for (const auto& b : batches) all.insert(all.end(), b.begin(), b.end());
  std::sort(all.begin(), all.end());
  for (std::size_t i = 0; i < 70; ++i) EXPECT_EQ(all[i], i);
}

TEST(EpochTest, EmptyDatasetIsAnError) {
  const SmallWorld w;
  Classifier model = BiasedClassifier(w.store, 0, 0);
  OptimizerState opt = OptimizerState::ForModel(model, OptimizerConfig{});
  const Dataset empty;
  try {
    RunCleanEpoch(model, opt, empty, TrainingConfig{}, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyDataset);
  }
  EXPECT_THROW(RunAdversarialEpoch(model, opt, empty, TrainingConfig{}, w.ctx(), 0), Error);
}

// Two word groups on opposite sides of a hyperplane; the label is the group.
TEST(EpochTest, CleanEpochSeparatesLinearlySeparableData) {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> noise(0.0, 0.3);
  std::vector<std::string> words;
  std::vector<std::vector<double>> rows;
  for (int i = 0; i < 40; ++i) {
    words.push_back((i < 20 ? "p" : "n") + std::to_string(i));
    std::vector<double> row(8);
    for (double& v : row) v = noise(rng);
    row[0] += i < 20 ? 1.0 : -1.0;
    rows.push_back(row);
  }
  const auto store = testing::MakeStore(words, rows);
  Dataset d;
  d.class_names = {"neg", "pos"};
  std::uniform_int_distribution<int> pick(0, 19);
  for (int e = 0; e < 1000; ++e) {
    const int label = e % 2;
    std::string raw;
    for (int k = 0; k < 6; ++k) raw += words[pick(rng) + (label ? 0 : 20)] + " ";
    d.examples.push_back({Tokenize(raw), label});
  }
  const SmallWorld w;
  TrainingConfig cfg;
  cfg.n_clean = 1;
  cfg.n_adv = 0;
  cfg.seed = 2;
  const TrainResult r = Train(store, d, cfg, w.ctx());
  ASSERT_EQ(r.reports.size(), 1u);
  EXPECT_EQ(r.reports[0].kind, EpochKind::kClean);
  EXPECT_EQ(r.reports[0].adv_generated, 0u);
  EXPECT_EQ(r.reports[0].attacks_launched, 0u);
  EXPECT_EQ(r.reports[0].mean_adv_loss, 0.0);
  EXPECT_GT(Accuracy(r.model, d), 0.9);
}

TEST(EpochTest, CleanEpochIsDeterministic) {
  const auto& toy = ToyFixture::Get();
  const Dataset d = Prefix(toy.train(), 300);
  TrainingConfig cfg = toy.Training(3, 0.0);
  cfg.n_clean = 1;
  cfg.n_adv = 0;
  const TrainResult a = Train(toy.store(), d, cfg, toy.context());
  const TrainResult b = Train(toy.store(), d, cfg, toy.context());
  EXPECT_EQ(a.reports[0].mean_clean_loss, b.reports[0].mean_clean_loss);
  EXPECT_EQ(a.model.params(), b.model.params());
}

TEST(TrainTest, ZeroGammaEqualsNaturalTraining) {
  const auto& toy = ToyFixture::Get();
  const Dataset d = Prefix(toy.train(), 300);
  TrainingConfig adv = toy.Training(4, 0.0);
  adv.n_clean = 1;
  adv.n_adv = 2;
  adv.alpha = 0.7;
  TrainingConfig natural = adv;
  natural.n_clean = 3;
  natural.n_adv = 0;
  const TrainResult a = Train(toy.store(), d, adv, toy.context());
  const TrainResult b = Train(toy.store(), d, natural, toy.context());
  EXPECT_EQ(a.model.params(), b.model.params());
  EXPECT_EQ(a.reports[2].attacks_launched, 0u);
}

TEST(TrainTest, ZeroAlphaMatchesTrainingWithoutAdversarialWeight) {
  const auto& toy = ToyFixture::Get();
  const Dataset d = Prefix(toy.train(), 200);
  TrainingConfig cfg = toy.Training(5, 0.5);
  cfg.alpha = 0.0;
  cfg.n_clean = 1;
  cfg.n_adv = 1;
  const TrainResult warm = [&] {
    TrainingConfig c = cfg;
    c.n_adv = 0;
    return Train(toy.store(), d, c, toy.context());
  }();

  Classifier a = warm.model;
  OptimizerState oa = warm.optimizer;
  AdversarialSet generated;
  RunAdversarialEpoch(a, oa, d, cfg, toy.context(), 1, &generated);
  ASSERT_FALSE(generated.examples.empty());

  // Same batch composition, adversarial members dropped.
  Classifier b = warm.model;
  OptimizerState ob = warm.optimizer;
  const std::size_t total = d.size() + generated.examples.size();
  for (const auto& batch : EpochBatches(total, cfg.batch_size, BatchSeed(cfg.seed, 1))) {
    std::vector<WeightedExample> kept;
    for (std::size_t i : batch) {
      if (i < d.size()) kept.push_back({&d.examples[i].text, d.examples[i].label, 1.0});
    }
    if (!kept.empty()) TrainStep(b, kept, ob);
  }
  EXPECT_EQ(a.params(), b.params());
}

TEST(TrainTest, EpochKindsAndIndices) {
  const auto& toy = ToyFixture::Get();
  const Dataset d = Prefix(toy.train(), 200);
  TrainingConfig cfg = toy.Training(6, 0.2);
  std::vector<int> seen;
  const TrainResult r = Train(toy.store(), d, cfg, toy.context(),
                              [&](const Classifier&, const OptimizerState&,
                                  const EpochReport& rep) { seen.push_back(rep.epoch); });
  ASSERT_EQ(r.reports.size(), 4u);
  EXPECT_EQ(r.reports[0].kind, EpochKind::kClean);
  for (int e = 1; e < 4; ++e) {
    EXPECT_EQ(r.reports[e].kind, EpochKind::kAdversarial);
    EXPECT_LE(r.reports[e].adv_generated, AdversarialTarget(d.size(), 0.2));
    EXPECT_EQ(r.reports[e].adv_generated + r.reports[e].adv_failed_skipped,
              r.reports[e].attacks_launched);
  }
  EXPECT_EQ(seen, (std::vector<int>{0, 1, 2, 3}));
  EXPECT_EQ(EpochKindName(EpochKind::kClean), "clean");
  EXPECT_EQ(EpochKindName(EpochKind::kAdversarial), "adversarial");
}

TEST(TrainTest, ReproducibleBitForBit) {
  const auto& toy = ToyFixture::Get();
  const Dataset d = Prefix(toy.train(), 150);
  TrainingConfig cfg = toy.Training(7, 0.3);
  cfg.n_adv = 2;
  const TrainResult a = Train(toy.store(), d, cfg, toy.context());
  cfg.workers = 4;
  const TrainResult b = Train(toy.store(), d, cfg, toy.context());
  EXPECT_EQ(a.model.params(), b.model.params());
  EXPECT_EQ(a.optimizer.first_moment, b.optimizer.first_moment);
  for (std::size_t e = 0; e < a.reports.size(); ++e) {
    EXPECT_EQ(a.reports[e].attack_queries, b.reports[e].attack_queries);
    EXPECT_EQ(a.reports[e].mean_adv_loss, b.reports[e].mean_adv_loss);
  }
}

TEST(TrainTest, AdversarialSetSatisfiesSuccessInvariants) {
  const auto& toy = ToyFixture::Get();
  const Dataset d = Prefix(toy.train(), 300);
  TrainingConfig cfg = toy.Training(8, 0.2);
  cfg.n_clean = 1;
  cfg.n_adv = 0;
  const TrainResult warm = Train(toy.store(), d, cfg, toy.context());
  const AdversarialSet one = GenerateAdversarialSet(warm.model, d, 0.2, cfg.attack,
                                                    toy.context(), AttackOrderSeed(8, 1), 1);
  const AdversarialSet many = GenerateAdversarialSet(warm.model, d, 0.2, cfg.attack,
                                                     toy.context(), AttackOrderSeed(8, 1), 4);
  ASSERT_FALSE(one.examples.empty());
  EXPECT_LE(one.examples.size(), AdversarialTarget(d.size(), 0.2));
  EXPECT_EQ(one.source_indices, many.source_indices);
  EXPECT_EQ(one.attacks_launched, many.attacks_launched);
  EXPECT_EQ(one.queries, many.queries);

  const MeanEmbeddingEncoder enc(*toy.store());
  for (std::size_t i = 0; i < one.examples.size(); ++i) {
    const LabeledExample& adv = one.examples[i];
    const LabeledExample& src = d.examples[one.source_indices[i]];
    EXPECT_EQ(adv.label, src.label);
    EXPECT_NE(Argmax(Forward(warm.model, adv.text).probs), adv.label);
    EXPECT_LE(CountModifiedWords(src.text, adv.text), ModificationCap(src.text.size(), 0.1));
    EXPECT_GE(Cosine(enc.Encode(src.text), enc.Encode(adv.text)), 0.9);
    EXPECT_EQ(adv.text.tokens.size(), many.examples[i].text.tokens.size());
  }
}

}  // namespace
}  // namespace advtrain
