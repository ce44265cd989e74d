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

#include "support/fixtures.h"

#include <fstream>
#include <sstream>

#include "advtrain/text.h"
#include "json.hpp"

namespace advtrain::testing {

std::shared_ptr<const EmbeddingStore> MakeStore(
    const std::vector<std::string>& words,
    const std::vector<std::vector<double>>& rows) {
  const std::size_t dim = rows.empty() ? 0 : rows.front().size();
  std::vector<double> flat;
  for (const auto& r : rows) flat.insert(flat.end(), r.begin(), r.end());
  return std::make_shared<const EmbeddingStore>(words, dim, std::move(flat));
}

std::shared_ptr<const EmbeddingStore> RandomStore(std::size_t size,
                                                  std::size_t dim,
                                                  std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::vector<std::string> words;
  std::vector<double> flat;
  for (std::size_t i = 0; i < size; ++i) {
    words.push_back("v" + std::to_string(i));
    for (std::size_t j = 0; j < dim; ++j) flat.push_back(normal(rng));
  }
  return std::make_shared<const EmbeddingStore>(words, dim, std::move(flat));
}

Classifier RandomClassifier(std::shared_ptr<const EmbeddingStore> store,
                            std::size_t hidden, std::size_t classes,
                            double scale, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, scale);
  ModelParams p;
  p.w1 = Matrix(hidden, store->dim());
  p.b1.assign(hidden, 0.0);
  p.w2 = Matrix(classes, hidden);
  p.b2.assign(classes, 0.0);
  for (double& v : p.w1.data) v = normal(rng);
  for (double& v : p.b1) v = normal(rng);
  for (double& v : p.w2.data) v = normal(rng);
  for (double& v : p.b2) v = normal(rng);
  return Classifier(std::move(store), std::move(p));
}

Classifier ZeroClassifier(std::shared_ptr<const EmbeddingStore> store,
                          std::size_t hidden, std::size_t classes) {
  ModelParams p;
  p.w1 = Matrix(hidden, store->dim());
  p.b1.assign(hidden, 0.0);
  p.w2 = Matrix(classes, hidden);
  p.b2.assign(classes, 0.0);
  return Classifier(std::move(store), std::move(p));
}

TokenizedText RandomText(const EmbeddingStore& store, std::size_t length,
                         std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> pick(0, store.size() - 1);
  std::string raw;
  for (std::size_t i = 0; i < length; ++i) {
    if (i) raw += ' ';
    raw += store.word(static_cast<int>(pick(rng)));
  }
  return Tokenize(raw);
}

TokenizedText Words(const std::string& raw) { return Tokenize(raw); }

const ToyFixture& ToyFixture::Get() {
  static const ToyFixture* fixture = new ToyFixture();
  return *fixture;
}

ToyFixture::ToyFixture() {
  const std::string dir = ADVTRAIN_TOY_DIR;
  store_ = std::make_shared<const EmbeddingStore>(EmbeddingStore::Load(dir + "/embeddings.txt"));
  lexicon_ = PosLexicon::Load(dir + "/lexicon.tsv");
  cache_ = NeighborCache::Load(dir + "/neighbors.jsonl", *store_);
  train_ = LoadDataset(dir + "/train.jsonl", Split::kTrain);
  test_ = LoadDataset(dir + "/test.jsonl", Split::kTest);
  ood_ = LoadDataset(dir + "/ood.jsonl", Split::kTest);
  encoder_ = std::make_unique<MeanEmbeddingEncoder>(*store_);
  proposer_ = std::make_unique<EmbeddingNeighborProposer>(*store_, cache_, kDefaultNeighborK);
  std::ifstream in(dir + "/config.json");
  std::stringstream ss;
  ss << in.rdbuf();
  learning_rate_ =
      nlohmann::json::parse(ss.str()).at("training").at("optimizer").at("learning_rate").get<double>();
}

TrainingConfig ToyFixture::Training(std::uint64_t seed, double gamma) const {
  TrainingConfig cfg;
  cfg.seed = seed;
  cfg.gamma = gamma;
  cfg.optimizer.learning_rate = learning_rate_;
  return cfg;
}

}  // namespace advtrain::testing
