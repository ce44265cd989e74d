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

#ifndef ADVTRAIN_TOY_CORPUS_H_
#define ADVTRAIN_TOY_CORPUS_H_

#include <cstddef>
#include <cstdint>

#include "advtrain/dataset.h"
#include "advtrain/embedding.h"
#include "advtrain/lexicon.h"

namespace advtrain {

// Synthetic two-class sentiment corpus with a counter-fitted-style embedding.
//
// Sentiment words come in clusters of synonyms (pairwise cosine well above
// 0.8). Each word vector mixes a sentiment axis, a style axis, a cluster
// direction and noise. Half of every cluster carries +style, half -style.
// Training and in-domain test texts pair the style sign with the label
// (style_match = 1), so the style axis is a shortcut a naturally trained
// model leans on; swapping a word for its opposite-style synonym is the
// adversarial move. Filler words are function-word-like: unique directions
// without synonyms. The out-of-domain split draws style independently of the
// label.
struct ToyCorpusConfig {
  std::size_t dim = 48;
  std::size_t clusters_per_class = 40;
  std::size_t words_per_cluster = 4;
  std::size_t filler_words = 300;
  double sentiment_weight = 0.15;
  double style_weight = 0.25;
  double cluster_weight = 0.9;
  double word_noise = 0.15;
  double filler_noise = 0.3;
  std::size_t min_length = 8;
  std::size_t max_length = 15;
  std::size_t min_sentiment_words = 1;
  std::size_t max_sentiment_words = 2;
  double style_match = 1.0;
  double ood_style_match = 0.5;
  std::size_t train_size = 2000;
  std::size_t test_size = 500;
  std::size_t ood_size = 500;
  std::uint64_t seed = 7;
};

struct ToyCorpus {
  EmbeddingStore embeddings;
  PosLexicon lexicon;
  Dataset train;
  Dataset test;
  Dataset ood;
};

ToyCorpus GenerateToyCorpus(const ToyCorpusConfig& cfg = {});

}  // namespace advtrain

#endif  // ADVTRAIN_TOY_CORPUS_H_
