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

#ifndef ADVTRAIN_EMBEDDING_H_
#define ADVTRAIN_EMBEDDING_H_

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "advtrain/text.h"

namespace advtrain {

using Vector = std::vector<double>;

// Cosine similarity. Throws Error(kZeroVector) if either input is all zero.
double Cosine(std::span<const double> u, std::span<const double> v);
double Dot(std::span<const double> u, std::span<const double> v);
double Norm2(std::span<const double> v);
double Distance2(std::span<const double> u, std::span<const double> v);

// Word vectors keyed by lowercase word. Rows are dense, row-major; the
// out-of-vocabulary row (id kOovId) is the only all-zero vector.
class EmbeddingStore {
 public:
  static constexpr int kOovId = -1;

  EmbeddingStore() = default;
  // Words are lowercased. Throws kInvalidArgument on duplicate words,
  // inconsistent dimensions, non-finite or all-zero rows.
  EmbeddingStore(std::vector<std::string> words, std::size_t dim,
                 std::vector<double> rows);

  // Text format: `word v_1 ... v_d` per line, optional `|V| d` header line.
  static EmbeddingStore Load(const std::filesystem::path& path);
  static EmbeddingStore Parse(std::string_view text);
  std::string Serialize() const;

  std::size_t size() const { return words_.size(); }
  std::size_t dim() const { return dim_; }

  std::optional<int> Find(std::string_view word) const;
  int IdOrOov(const Token& token) const;
  const std::string& word(int id) const { return words_[id]; }
  const std::vector<std::string>& words() const { return words_; }

  // Zero vector for kOovId.
  std::span<const double> Row(int id) const;
  double RowNorm(int id) const { return id < 0 ? 0.0 : norms_[id]; }

  // Fills vocab_id on every token (nullopt for OOV).
  TokenizedText Bind(TokenizedText text) const;

 private:
  std::vector<std::string> words_;
  std::unordered_map<std::string, int> index_;
  std::size_t dim_ = 0;
  std::vector<double> rows_;
  std::vector<double> norms_;
  std::vector<double> zero_;
};

}  // namespace advtrain

#endif  // ADVTRAIN_EMBEDDING_H_
