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

#ifndef ADVTRAIN_LEXICON_H_
#define ADVTRAIN_LEXICON_H_

#include <array>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>

#include "advtrain/text.h"

namespace advtrain {

// Word -> tag frequency table. The tag of a word is its most frequent tag;
// ties go to the earlier tag in enum order.
class PosLexicon {
 public:
  PosLexicon() = default;

  // TSV lines: word<TAB>tag<TAB>count. Blank lines and lines starting with
  // '#' are ignored. Repeated (word, tag) rows accumulate.
  static PosLexicon Load(const std::filesystem::path& path);
  static PosLexicon Parse(std::string_view tsv);

  void Add(std::string_view word, PosTag tag, long count);
  PosTag Lookup(std::string_view word) const;
  std::size_t size() const { return counts_.size(); }

  // Serialized in sorted word order so output is byte-stable.
  std::string ToTsv() const;

 private:
  std::unordered_map<std::string, std::array<long, 5>> counts_;
};

// Sets every word token's tag from the lexicon (UNKNOWN when absent).
// Punctuation tokens keep OTHER.
TokenizedText PosTagText(TokenizedText text, const PosLexicon& lexicon);

}  // namespace advtrain

#endif  // ADVTRAIN_LEXICON_H_
