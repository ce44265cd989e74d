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

#include "advtrain/toy_corpus.h"

#include <set>

#include "advtrain/neighbors.h"
#include "gtest/gtest.h"

namespace advtrain {
namespace {

ToyCorpusConfig Small() {
  ToyCorpusConfig cfg;
  cfg.train_size = 200;
  cfg.test_size = 50;
  cfg.ood_size = 40;
  return cfg;
}

TEST(ToyCorpusTest, SizesAndVocabulary) {
  const ToyCorpus c = GenerateToyCorpus(Small());
  EXPECT_EQ(c.train.size(), 200u);
  EXPECT_EQ(c.test.size(), 50u);
  EXPECT_EQ(c.ood.size(), 40u);
  EXPECT_GE(c.embeddings.size(), 500u);
  EXPECT_EQ(c.embeddings.dim(), 48u);
  EXPECT_EQ(c.train.class_names, (std::vector<std::string>{"negative", "positive"}));
  int positives = 0;
  for (const auto& ex : c.train.examples) {
    EXPECT_GE(ex.text.size(), 8u);
    EXPECT_LE(ex.text.size(), 15u);
    positives += ex.label;
    for (const Token& t : ex.text.tokens) EXPECT_TRUE(c.embeddings.Find(t.normalized));
  }
  EXPECT_GT(positives, 60);
  EXPECT_LT(positives, 140);
}

TEST(ToyCorpusTest, Deterministic) {
  const ToyCorpus a = GenerateToyCorpus(Small());
  const ToyCorpus b = GenerateToyCorpus(Small());
  EXPECT_EQ(a.embeddings.Serialize(), b.embeddings.Serialize());
  EXPECT_EQ(SerializeDataset(a.train), SerializeDataset(b.train));
  EXPECT_EQ(a.lexicon.ToTsv(), b.lexicon.ToTsv());
  ToyCorpusConfig other = Small();
  other.seed = 8;
  EXPECT_NE(GenerateToyCorpus(other).embeddings.Serialize(), a.embeddings.Serialize());
}

TEST(ToyCorpusTest, SentimentWordsHaveSamePolarityNeighbors) {
  const ToyCorpus c = GenerateToyCorpus(Small());
  const NeighborCache cache = NeighborCache::Build(c.embeddings, 20, 0.8, 4);
  int with_neighbors = 0, sentiment = 0;
  for (std::size_t i = 0; i < c.embeddings.size(); ++i) {
    const std::string& w = c.embeddings.word(static_cast<int>(i));
    const bool good = w.rfind("good", 0) == 0, bad = w.rfind("bad", 0) == 0;
    if (!good && !bad) continue;
    ++sentiment;
    EXPECT_EQ(c.lexicon.Lookup(w), PosTag::kAdj);
    const auto nbrs = cache.Of(static_cast<int>(i));
    if (!nbrs.empty()) ++with_neighbors;
    for (const Neighbor& n : nbrs) {
      EXPECT_EQ(c.embeddings.word(n.id).rfind(good ? "good" : "bad", 0), 0u) << w;
    }
  }
  EXPECT_EQ(sentiment, 320);
  EXPECT_GT(with_neighbors, sentiment * 9 / 10);
}

}  // namespace
}  // namespace advtrain
