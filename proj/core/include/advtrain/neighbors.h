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

#ifndef ADVTRAIN_NEIGHBORS_H_
#define ADVTRAIN_NEIGHBORS_H_

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "advtrain/embedding.h"

namespace advtrain {

struct Neighbor {
  int id = 0;
  double similarity = 0.0;
};

inline constexpr int kDefaultNeighborK = 20;
inline constexpr double kDefaultMinWordCos = 0.8;

// Precomputed top-k synonym candidates. Lists are sorted by descending
// similarity, ties by ascending neighbor word; every similarity is >= the
// build threshold and no word lists itself.
class NeighborCache {
 public:
  NeighborCache() = default;

  // Exact O(|V|^2 d) search. `workers` > 1 partitions the vocabulary across
  // threads; the result does not depend on the worker count.
  static NeighborCache Build(const EmbeddingStore& store,
                             int k = kDefaultNeighborK,
                             double min_cos = kDefaultMinWordCos,
                             int workers = 1);

  // JSON lines {"word": w, "nbrs": [[w', sim], ...]}; one line per vocabulary
  // word in id order. Words unknown to `store` are rejected.
  static NeighborCache Load(const std::filesystem::path& path,
                            const EmbeddingStore& store);
  static NeighborCache Parse(std::string_view jsonl,
                             const EmbeddingStore& store);
  std::string Serialize(const EmbeddingStore& store) const;

  std::span<const Neighbor> Of(int id) const;
  std::size_t size() const { return lists_.size(); }
  int k() const { return k_; }
  double min_cos() const { return min_cos_; }

 private:
  std::vector<std::vector<Neighbor>> lists_;
  int k_ = kDefaultNeighborK;
  double min_cos_ = kDefaultMinWordCos;
};

}  // namespace advtrain

#endif  // ADVTRAIN_NEIGHBORS_H_
