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

#include "advtrain/embedding.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>

#include "advtrain/error.h"

namespace advtrain {

double Dot(std::span<const double> u, std::span<const double> v) {
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * v[i];
  return s;
}

double Norm2(std::span<const double> v) { return std::sqrt(Dot(v, v)); }

double Distance2(std::span<const double> u, std::span<const double> v) {
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double d = u[i] - v[i];
    s += d * d;
  }
  return std::sqrt(s);
}

double Cosine(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) {
    throw Error(ErrorCode::kInvalidArgument, "cosine of vectors with different sizes");
  }
  const double nu = Norm2(u);
  const double nv = Norm2(v);
  if (nu == 0.0 || nv == 0.0) {
    throw Error(ErrorCode::kZeroVector, "cosine undefined for a zero vector");
  }
  const double c = Dot(u, v) / (nu * nv);
  return std::clamp(c, -1.0, 1.0);
}

EmbeddingStore::EmbeddingStore(std::vector<std::string> words, std::size_t dim,
                               std::vector<double> rows)
    : words_(std::move(words)), dim_(dim), rows_(std::move(rows)) {
  if (dim_ == 0) throw Error(ErrorCode::kInvalidArgument, "embedding dimension is zero");
  if (rows_.size() != words_.size() * dim_) {
    throw Error(ErrorCode::kInvalidArgument, "embedding matrix size does not match vocabulary");
  }
  norms_.resize(words_.size());
  for (std::size_t i = 0; i < words_.size(); ++i) {
    words_[i] = ToLowerAscii(words_[i]);
    if (words_[i].empty()) throw Error(ErrorCode::kInvalidArgument, "empty word");
    if (!index_.emplace(words_[i], static_cast<int>(i)).second) {
      throw Error(ErrorCode::kInvalidArgument, "duplicate word '" + words_[i] + "'");
    }
    const std::span<const double> r{rows_.data() + i * dim_, dim_};
    for (double x : r) {
      if (!std::isfinite(x)) {
        throw Error(ErrorCode::kInvalidArgument, "non-finite value for '" + words_[i] + "'");
      }
    }
    norms_[i] = Norm2(r);
    if (norms_[i] == 0.0) {
      throw Error(ErrorCode::kInvalidArgument, "all-zero vector for '" + words_[i] + "'");
    }
  }
  zero_.assign(dim_, 0.0);
}

EmbeddingStore EmbeddingStore::Parse(std::string_view text) {
  std::vector<std::string> words;
  std::vector<double> rows;
  std::size_t dim = 0;
  std::optional<std::size_t> declared_words;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::vector<std::string> parts;
    for (std::string f; fields >> f;) parts.push_back(std::move(f));
    if (parts.empty()) continue;
    if (line_no == 1 && parts.size() == 2) {
      char* e1 = nullptr;
      char* e2 = nullptr;
      const unsigned long v = std::strtoul(parts[0].c_str(), &e1, 10);
      const unsigned long d = std::strtoul(parts[1].c_str(), &e2, 10);
      if (*e1 == '\0' && *e2 == '\0') {
        declared_words = v;
        dim = d;
        continue;
      }
    }
    if (parts.size() < 2) {
      throw Error(ErrorCode::kParseError,
                  "embedding line " + std::to_string(line_no) + ": no vector");
    }
    if (dim == 0) dim = parts.size() - 1;
    if (parts.size() - 1 != dim) {
      throw Error(ErrorCode::kParseError,
                  "embedding line " + std::to_string(line_no) + ": expected " +
                      std::to_string(dim) + " values, got " +
                      std::to_string(parts.size() - 1));
    }
    words.push_back(parts[0]);
    for (std::size_t j = 1; j < parts.size(); ++j) {
      char* end = nullptr;
      const double v = std::strtod(parts[j].c_str(), &end);
      if (*end != '\0') {
        throw Error(ErrorCode::kParseError,
                    "embedding line " + std::to_string(line_no) + ": bad number '" + parts[j] + "'");
      }
      rows.push_back(v);
    }
  }
  if (words.empty()) throw Error(ErrorCode::kParseError, "embedding file has no vectors");
  if (declared_words && *declared_words != words.size()) {
    throw Error(ErrorCode::kParseError, "header declares " + std::to_string(*declared_words) +
                                            " words, file has " + std::to_string(words.size()));
  }
  try {
    return EmbeddingStore(std::move(words), dim, std::move(rows));
  } catch (const Error& e) {
    throw Error(ErrorCode::kParseError, e.what());
  }
}

EmbeddingStore EmbeddingStore::Load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open embeddings " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return Parse(ss.str());
}

std::string EmbeddingStore::Serialize() const {
  std::string out = std::to_string(words_.size()) + " " + std::to_string(dim_) + "\n";
  char buf[32];
  for (std::size_t i = 0; i < words_.size(); ++i) {
    out += words_[i];
    for (std::size_t j = 0; j < dim_; ++j) {
      std::snprintf(buf, sizeof(buf), " %.17g", rows_[i * dim_ + j]);
      out += buf;
    }
    out += '\n';
  }
  return out;
}

std::optional<int> EmbeddingStore::Find(std::string_view word) const {
  const auto it = index_.find(ToLowerAscii(word));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

int EmbeddingStore::IdOrOov(const Token& token) const {
  if (token.vocab_id) return *token.vocab_id;
  if (token.is_punctuation()) return kOovId;
  return Find(token.normalized).value_or(kOovId);
}

std::span<const double> EmbeddingStore::Row(int id) const {
  if (id < 0) return zero_;
  return {rows_.data() + static_cast<std::size_t>(id) * dim_, dim_};
}

TokenizedText EmbeddingStore::Bind(TokenizedText text) const {
  for (Token& t : text.tokens) {
    t.vocab_id = t.is_punctuation() ? std::nullopt : Find(t.normalized);
  }
  return text;
}

}  // namespace advtrain
