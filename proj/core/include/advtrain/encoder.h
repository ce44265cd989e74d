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

#ifndef ADVTRAIN_ENCODER_H_
#define ADVTRAIN_ENCODER_H_

#include "advtrain/embedding.h"
#include "advtrain/text.h"

namespace advtrain {

// Sentence encoder used by the sentence-similarity constraint.
class SentenceEncoder {
 public:
  virtual ~SentenceEncoder() = default;
  virtual Vector Encode(const TokenizedText& text) const = 0;
};

// L2-normalized mean of the L2-normalized vectors of in-vocabulary tokens.
// OOV tokens are ignored; throws Error(kNoKnownWords) if none remain.
// Permutation-invariant over tokens.
class MeanEmbeddingEncoder : public SentenceEncoder {
 public:
  explicit MeanEmbeddingEncoder(const EmbeddingStore& store) : store_(store) {}
  Vector Encode(const TokenizedText& text) const override;

 private:
  const EmbeddingStore& store_;
};

}  // namespace advtrain

#endif  // ADVTRAIN_ENCODER_H_
