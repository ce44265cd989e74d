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

#ifndef ADVTRAIN_TEXT_H_
#define ADVTRAIN_TEXT_H_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace advtrain {

enum class PosTag { kNoun, kVerb, kAdj, kAdv, kOther, kUnknown };

std::string_view PosTagName(PosTag tag);
// Accepts NOUN, VERB, ADJ, ADV, OTHER, UNKNOWN (case-insensitive).
std::optional<PosTag> ParsePosTag(std::string_view name);

// How a token is glued to its neighbours when the text is serialized.
enum class Attach { kNone, kToPrevious, kToNext };

struct Token {
  std::string surface;
  std::string normalized;
  PosTag pos = PosTag::kUnknown;
  std::optional<int> vocab_id;
  Attach attach = Attach::kNone;

  bool is_punctuation() const { return attach != Attach::kNone; }
  bool operator==(const Token&) const = default;
};

struct TokenizedText {
  std::vector<Token> tokens;
  std::string origin;

  std::size_t size() const { return tokens.size(); }
  bool empty() const { return tokens.empty(); }
  const Token& operator[](std::size_t i) const { return tokens[i]; }
  Token& operator[](std::size_t i) { return tokens[i]; }
};

inline constexpr std::size_t kMaxTokens = 512;

// Whitespace split; leading and trailing punctuation runs of each chunk become
// separate OTHER-tagged tokens. Word tokens start as UNKNOWN until pos-tagged.
// Throws Error(kEmptyText) for whitespace-only input. Output is truncated to
// `max_tokens`.
TokenizedText Tokenize(std::string_view raw,
                       std::size_t max_tokens = kMaxTokens);

// Space-joined surfaces with punctuation reattached to the side it was split
// from.
std::string Detokenize(const TokenizedText& text);

// Lowercases ASCII letters; bytes >= 0x80 pass through unchanged.
std::string ToLowerAscii(std::string_view s);

// Returns a copy with token `position` replaced by `word`. The replacement
// keeps the original token's capitalization pattern.
TokenizedText ReplaceToken(const TokenizedText& text, std::size_t position,
                           std::string_view word, PosTag pos,
                           std::optional<int> vocab_id);

// Returns a copy without the tokens whose `keep` entry is false.
TokenizedText KeepTokens(const TokenizedText& text,
                         const std::vector<bool>& keep);

// Number of positions whose normalized form differs. Texts must have equal
// length.
std::size_t CountModifiedWords(const TokenizedText& original,
                               const TokenizedText& perturbed);

}  // namespace advtrain

#endif  // ADVTRAIN_TEXT_H_
