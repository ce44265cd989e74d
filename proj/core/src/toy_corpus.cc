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

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "advtrain/error.h"
#include "advtrain/hash.h"
#include "advtrain/text.h"

namespace advtrain {

namespace {

constexpr std::size_t kSentimentAxis = 0;
constexpr std::size_t kStyleAxis = 1;
constexpr std::size_t kFreeOffset = 2;

// Random unit direction orthogonal to the sentiment and style axes.
Vector RandomDirection(std::size_t dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Vector u(dim, 0.0);
  for (;;) {
    for (std::size_t i = kFreeOffset; i < dim; ++i) u[i] = normal(rng);
    const double n = Norm2(u);
    if (n > 0.0) {
      for (double& v : u) v /= n;
      return u;
    }
  }
}

void AddNoise(Vector& v, double scale, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  const double s = scale / std::sqrt(static_cast<double>(v.size()));
  for (std::size_t i = kFreeOffset; i < v.size(); ++i) v[i] += s * normal(rng);
}

void Normalize(Vector& v) {
  const double n = Norm2(v);
  for (double& x : v) x /= n;
}

struct Vocabulary {
  std::vector<std::string> words;
  std::vector<double> rows;
  PosLexicon lexicon;
  // sentiment[polarity][style] -> word ids; polarity/style index 0 = negative.
  std::vector<std::size_t> sentiment[2][2];
  std::vector<std::size_t> fillers;

  std::size_t Add(std::string word, const Vector& v, PosTag tag) {
    lexicon.Add(word, tag, 1);
    words.push_back(std::move(word));
    rows.insert(rows.end(), v.begin(), v.end());
    return words.size() - 1;
  }
};

Dataset Sample(const Vocabulary& vocab, const ToyCorpusConfig& cfg,
               std::size_t count, double style_match, Split split,
               std::mt19937_64& rng) {
  Dataset data;
  data.split = split;
  data.class_names = {"negative", "positive"};
  std::uniform_int_distribution<std::size_t> length(cfg.min_length, cfg.max_length);
  std::uniform_int_distribution<std::size_t> sentiment_count(cfg.min_sentiment_words,
                                                             cfg.max_sentiment_words);
  std::uniform_int_distribution<std::size_t> filler(0, vocab.fillers.size() - 1);
  std::bernoulli_distribution positive(0.5);
  std::bernoulli_distribution match(style_match);
  for (std::size_t e = 0; e < count; ++e) {
    const int label = positive(rng) ? 1 : 0;
    const std::size_t len = length(rng);
    const std::size_t m = std::min(len, sentiment_count(rng));
    std::vector<std::size_t> ids;
    for (std::size_t i = 0; i + m < len; ++i) ids.push_back(vocab.fillers[filler(rng)]);
    for (std::size_t i = 0; i < m; ++i) {
      const int style = match(rng) ? label : 1 - label;
      const auto& pool = vocab.sentiment[label][style];
      std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
      std::uniform_int_distribution<std::size_t> where(0, ids.size());
      const std::size_t at = where(rng);
      ids.insert(ids.begin() + static_cast<std::ptrdiff_t>(at), pool[pick(rng)]);
    }
    std::string raw;
    for (std::size_t id : ids) {
      if (!raw.empty()) raw += ' ';
      raw += vocab.words[id];
    }
    data.examples.push_back({Tokenize(raw), label});
  }
  return data;
}

}  // namespace

ToyCorpus GenerateToyCorpus(const ToyCorpusConfig& cfg) {
  if (cfg.dim <= kFreeOffset || cfg.clusters_per_class == 0 || cfg.words_per_cluster < 2 ||
      cfg.words_per_cluster > 26 || cfg.filler_words == 0 || cfg.min_length == 0 ||
      cfg.min_length > cfg.max_length || cfg.min_sentiment_words > cfg.max_sentiment_words ||
      !(cfg.style_match >= 0.0 && cfg.style_match <= 1.0) ||
      !(cfg.ood_style_match >= 0.0 && cfg.ood_style_match <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "invalid toy corpus settings");
  }
  std::mt19937_64 rng(MixSeed(cfg.seed, 0, 0));
  Vocabulary vocab;

  for (int polarity = 1; polarity >= 0; --polarity) {
    const double sign = polarity == 1 ? 1.0 : -1.0;
    const std::string stem = polarity == 1 ? "good" : "bad";
    for (std::size_t k = 0; k < cfg.clusters_per_class; ++k) {
      const Vector u = RandomDirection(cfg.dim, rng);
      for (std::size_t j = 0; j < cfg.words_per_cluster; ++j) {
        const int style = j < cfg.words_per_cluster / 2 ? 1 : 0;
        Vector v(cfg.dim, 0.0);
        for (std::size_t i = 0; i < cfg.dim; ++i) v[i] = cfg.cluster_weight * u[i];
        v[kSentimentAxis] = cfg.sentiment_weight * sign;
        v[kStyleAxis] = cfg.style_weight * (style == 1 ? 1.0 : -1.0);
        AddNoise(v, cfg.word_noise, rng);
        Normalize(v);
        std::string word = stem + std::to_string(k) + static_cast<char>('a' + j);
        vocab.sentiment[polarity][style].push_back(vocab.Add(std::move(word), v, PosTag::kAdj));
      }
    }
  }
  static constexpr PosTag kFillerTags[] = {PosTag::kNoun, PosTag::kVerb, PosTag::kAdv,
                                           PosTag::kOther};
  for (std::size_t k = 0; k < cfg.filler_words; ++k) {
    Vector v = RandomDirection(cfg.dim, rng);
    for (double& x : v) x *= cfg.cluster_weight;
    AddNoise(v, cfg.filler_noise, rng);
    Normalize(v);
    vocab.fillers.push_back(vocab.Add("w" + std::to_string(k), v, kFillerTags[k % 4]));
  }

  ToyCorpus corpus{EmbeddingStore(vocab.words, cfg.dim, vocab.rows), vocab.lexicon, {}, {}, {}};
  std::mt19937_64 train_rng(MixSeed(cfg.seed, 1, 0));
  std::mt19937_64 test_rng(MixSeed(cfg.seed, 2, 0));
  std::mt19937_64 ood_rng(MixSeed(cfg.seed, 3, 0));
  corpus.train = Sample(vocab, cfg, cfg.train_size, cfg.style_match, Split::kTrain, train_rng);
  corpus.test = Sample(vocab, cfg, cfg.test_size, cfg.style_match, Split::kTest, test_rng);
  corpus.ood = Sample(vocab, cfg, cfg.ood_size, cfg.ood_style_match, Split::kTest, ood_rng);
  return corpus;
}

}  // namespace advtrain
