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

#include <cmath>
#include <vector>

#include "advtrain/error.h"
#include "advtrain/victim.h"
#include "gtest/gtest.h"
#include "support/fixtures.h"

namespace advtrain {
namespace {

using testing::RandomClassifier;
using testing::RandomStore;

OptimizerConfig Config(double lr) {
  OptimizerConfig c;
  c.learning_rate = lr;
  return c;
}

TEST(TrainStepTest, ZeroLearningRateLeavesParamsUnchanged) {
  const auto store = RandomStore(10, 4, 1);
  Classifier model = RandomClassifier(store, 6, 2, 0.5, 2);
  const ModelParams before = model.params();
  OptimizerState opt = OptimizerState::ForModel(model, Config(0.0));
  const TokenizedText t = Tokenize("v1 v2");
  const WeightedExample batch[] = {{&t, 1, 1.0}};
  for (int i = 0; i < 3; ++i) TrainStep(model, batch, opt);
  EXPECT_EQ(model.params(), before);
  EXPECT_EQ(opt.step, 3);
}

TEST(TrainStepTest, LossDecreasesOnSeparableExample) {
  const auto store = RandomStore(10, 4, 3);
  Classifier model = RandomClassifier(store, 6, 2, 0.5, 4);
  OptimizerState opt = OptimizerState::ForModel(model, Config(1e-2));
  const TokenizedText t = Tokenize("v3 v4 v5");
  const WeightedExample batch[] = {{&t, 0, 1.0}};
  double previous = Loss(Forward(model, t), 0);
  for (int i = 0; i < 10; ++i) {
    const double reported = TrainStep(model, batch, opt);
    EXPECT_NEAR(reported, previous, 1e-12);
    const double now = Loss(Forward(model, t), 0);
    EXPECT_LT(now, previous) << "step " << i;
    previous = now;
  }
}

TEST(TrainStepTest, ZeroWeightEqualsOmission) {
  const auto store = RandomStore(10, 4, 5);
  Classifier a = RandomClassifier(store, 6, 2, 0.5, 6);
  Classifier b = a;
  OptimizerState oa = OptimizerState::ForModel(a, Config(1e-2));
  OptimizerState ob = oa;
  const TokenizedText t1 = Tokenize("v1 v2"), t2 = Tokenize("v7"), t3 = Tokenize("v8 v9");
  const WeightedExample with[] = {{&t1, 0, 1.0}, {&t2, 1, 0.0}, {&t3, 1, 2.0}};
  const WeightedExample without[] = {{&t1, 0, 1.0}, {&t3, 1, 2.0}};
  for (int i = 0; i < 5; ++i) {
    EXPECT_EQ(TrainStep(a, with, oa), TrainStep(b, without, ob));
  }
  EXPECT_EQ(a.params(), b.params());
}

TEST(TrainStepTest, AllZeroWeightsIsNoOp) {
  const auto store = RandomStore(10, 4, 5);
  Classifier model = RandomClassifier(store, 6, 2, 0.5, 6);
  const ModelParams before = model.params();
  OptimizerState opt = OptimizerState::ForModel(model, Config(1e-2));
  const TokenizedText t = Tokenize("v1");
  const WeightedExample batch[] = {{&t, 0, 0.0}};
  EXPECT_EQ(TrainStep(model, batch, opt), 0.0);
  EXPECT_EQ(model.params(), before);
  EXPECT_EQ(opt.step, 0);
}

TEST(TrainStepTest, RejectsEmptyBatchAndNegativeWeight) {
  const auto store = RandomStore(10, 4, 5);
  Classifier model = RandomClassifier(store, 6, 2, 0.5, 6);
  OptimizerState opt = OptimizerState::ForModel(model, Config(1e-2));
  EXPECT_THROW(TrainStep(model, std::span<const WeightedExample>(), opt), Error);
  const TokenizedText t = Tokenize("v1");
  const WeightedExample batch[] = {{&t, 0, -1.0}};
  EXPECT_THROW(TrainStep(model, batch, opt), Error);
}

TEST(TrainStepTest, DeterministicAcrossRuns) {
  const auto store = RandomStore(20, 4, 7);
  auto run = [&] {
    Classifier model = Classifier::Initialize(store, 8, 2, 42);
    OptimizerState opt = OptimizerState::ForModel(model, Config(1e-2));
    std::vector<TokenizedText> texts;
    for (int i = 0; i < 8; ++i) {
      texts.push_back(Tokenize("v" + std::to_string(i) + " v" + std::to_string(i + 10)));
    }
    std::vector<WeightedExample> batch;
    for (int i = 0; i < 8; ++i) batch.push_back({&texts[i], i % 2, 1.0});
    for (int s = 0; s < 20; ++s) TrainStep(model, batch, opt);
    return model.params();
  };
  EXPECT_EQ(run(), run());
}

TEST(TrainStepTest, WeightDecayShrinksMatricesOnly) {
  const auto store = RandomStore(10, 4, 9);
  Classifier model = RandomClassifier(store, 6, 2, 0.5, 10);
  // Zero output weights and equal biases make every gradient vanish.
  for (double& v : model.mutable_params().w2.data) v = 0.0;
  model.mutable_params().b2 = {0.0, 0.0};
  const ModelParams before = model.params();
  OptimizerConfig cfg = Config(0.1);
  cfg.weight_decay = 0.5;
  OptimizerState opt = OptimizerState::ForModel(model, cfg);
  const TokenizedText t = Tokenize("v1");
  const WeightedExample batch[] = {{&t, 0, 1.0}};
  TrainStep(model, batch, opt);
  for (std::size_t i = 0; i < before.w1.data.size(); ++i) {
    EXPECT_NEAR(model.params().w1.data[i], before.w1.data[i] * (1 - 0.1 * 0.5), 1e-12);
  }
  EXPECT_EQ(model.params().b1, before.b1);
}

TEST(OptimizerStateTest, LinearWarmup) {
  OptimizerState opt;
  opt.config = Config(1.0);
  opt.config.warmup_steps = 4;
  opt.step = 1;
  EXPECT_DOUBLE_EQ(opt.CurrentLearningRate(), 0.25);
  opt.step = 4;
  EXPECT_DOUBLE_EQ(opt.CurrentLearningRate(), 1.0);
  opt.step = 100;
  EXPECT_DOUBLE_EQ(opt.CurrentLearningRate(), 1.0);
  opt.config.warmup_steps = 0;
  opt.step = 1;
  EXPECT_DOUBLE_EQ(opt.CurrentLearningRate(), 1.0);
}

TEST(OptimizerStateTest, Presets) {
  const OptimizerConfig desk;
  EXPECT_DOUBLE_EQ(desk.learning_rate, 1e-3);
  EXPECT_DOUBLE_EQ(desk.weight_decay, 0.01);
  const OptimizerConfig preset = TransformerFineTuningPreset();
  EXPECT_DOUBLE_EQ(preset.learning_rate, 5e-5);
  EXPECT_EQ(preset.warmup_steps, 500);
}

}  // namespace
}  // namespace advtrain
