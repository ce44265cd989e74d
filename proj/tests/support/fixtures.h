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

#ifndef ADVTRAIN_TESTS_SUPPORT_FIXTURES_H_
#define ADVTRAIN_TESTS_SUPPORT_FIXTURES_H_

#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "advtrain/attack.h"
#include "advtrain/dataset.h"
#include "advtrain/embedding.h"
#include "advtrain/encoder.h"
#include "advtrain/lexicon.h"
#include "advtrain/neighbors.h"
#include "advtrain/trainer.h"
#include "advtrain/victim.h"

namespace advtrain::testing {

// Store from explicit rows, one per word.
std::shared_ptr<const EmbeddingStore> MakeStore(
    const std::vector<std::string>& words,
    const std::vector<std::vector<double>>& rows);

// `size` words named v0, v1, ... with standard-normal rows.
std::shared_ptr<const EmbeddingStore> RandomStore(std::size_t size,
                                                  std::size_t dim,
                                                  std::uint64_t seed);

// Normal(0, scale^2) weights and biases.
Classifier RandomClassifier(std::shared_ptr<const EmbeddingStore> store,
                            std::size_t hidden, std::size_t classes,
                            double scale, std::uint64_t seed);

// Classifier whose parameters are all zero.
Classifier ZeroClassifier(std::shared_ptr<const EmbeddingStore> store,
                          std::size_t hidden, std::size_t classes);

// Space-joined random vocabulary words, tokenized.
TokenizedText RandomText(const EmbeddingStore& store, std::size_t length,
                         std::mt19937_64& rng);

TokenizedText Words(const std::string& raw);

// The committed toy fixture under data/toy, loaded once per process.
class ToyFixture {
 public:
  static const ToyFixture& Get();

  const std::shared_ptr<const EmbeddingStore>& store() const { return store_; }
  const PosLexicon& lexicon() const { return lexicon_; }
  const NeighborCache& cache() const { return cache_; }
  const Dataset& train() const { return train_; }
  const Dataset& test() const { return test_; }
  const Dataset& ood() const { return ood_; }
  AttackContext context() const { return {*store_, lexicon_, *encoder_, *proposer_}; }

  // Training settings of the bundled config with the given seed and gamma.
  TrainingConfig Training(std::uint64_t seed, double gamma) const;

 private:
  ToyFixture();

  std::shared_ptr<const EmbeddingStore> store_;
  PosLexicon lexicon_;
  NeighborCache cache_;
  Dataset train_, test_, ood_;
  std::unique_ptr<MeanEmbeddingEncoder> encoder_;
  std::unique_ptr<EmbeddingNeighborProposer> proposer_;
  double learning_rate_ = 0.0;
};

}  // namespace advtrain::testing

#endif  // ADVTRAIN_TESTS_SUPPORT_FIXTURES_H_
