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

#include "advtrain/encoder.h"

#include "advtrain/error.h"

namespace advtrain {

Vector MeanEmbeddingEncoder::Encode(const TokenizedText& text) const {
  Vector sum(store_.dim(), 0.0);
  std::size_t known = 0;
  for (const Token& t : text.tokens) {
    const int id = store_.IdOrOov(t);
    if (id < 0) continue;
    const auto row = store_.Row(id);
    const double inv = 1.0 / store_.RowNorm(id);
    for (std::size_t j = 0; j < sum.size(); ++j) sum[j] += row[j] * inv;
    ++known;
  }
  if (known == 0) {
    throw Error(ErrorCode::kNoKnownWords, "no in-vocabulary token to encode");
  }
  for (double& x : sum) x /= static_cast<double>(known);
  const double norm = Norm2(sum);
  // Opposite unit vectors can cancel exactly; the encoding is then undefined.
  if (norm == 0.0) throw Error(ErrorCode::kZeroVector, "sentence encoding is zero");
  for (double& x : sum) x /= norm;
  return sum;
}

}  // namespace advtrain
