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

#include "advtrain/text.h"

#include <cctype>

#include "advtrain/error.h"

namespace advtrain {
namespace {

bool IsSpace(char c) { return std::isspace(static_cast<unsigned char>(c)); }
bool IsPunct(char c) { return std::ispunct(static_cast<unsigned char>(c)); }

Token MakeWord(std::string_view surface) {
  Token t;
  t.surface = std::string(surface);
  t.normalized = ToLowerAscii(surface);
  t.pos = PosTag::kUnknown;
  return t;
}

Token MakePunct(std::string_view surface, Attach attach) {
  Token t;
  t.surface = std::string(surface);
  t.normalized = t.surface;
  t.pos = PosTag::kOther;
  t.attach = attach;
  return t;
}

// Copies the capitalization pattern of `model` onto lowercase `word`.
std::string MatchCase(std::string_view model, std::string_view word) {
  std::string out(word);
  bool any_alpha = false, all_upper = true;
  for (char c : model) {
    if (std::isalpha(static_cast<unsigned char>(c))) {
      any_alpha = true;
      if (!std::isupper(static_cast<unsigned char>(c))) all_upper = false;
    }
  }
  if (!any_alpha) return out;
  if (all_upper && model.size() > 1) {
    for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  } else if (std::isupper(static_cast<unsigned char>(model.front())) && !out.empty()) {
    out[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(out[0])));
  }
  return out;
}

}  // namespace

std::string_view PosTagName(PosTag tag) {
  switch (tag) {
    case PosTag::kNoun: return "NOUN";
    case PosTag::kVerb: return "VERB";
    case PosTag::kAdj: return "ADJ";
    case PosTag::kAdv: return "ADV";
    case PosTag::kOther: return "OTHER";
    case PosTag::kUnknown: return "UNKNOWN";
  }
  return "UNKNOWN";
}

std::optional<PosTag> ParsePosTag(std::string_view name) {
  const std::string upper = [&] {
    std::string s(name);
    for (char& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return s;
  }();
  for (PosTag tag : {PosTag::kNoun, PosTag::kVerb, PosTag::kAdj, PosTag::kAdv,
                     PosTag::kOther, PosTag::kUnknown}) {
    if (PosTagName(tag) == upper) return tag;
  }
  return std::nullopt;
}

std::string ToLowerAscii(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

TokenizedText Tokenize(std::string_view raw, std::size_t max_tokens) {
  TokenizedText text;
  text.origin = std::string(raw);
  std::size_t i = 0;
  const std::size_t n = raw.size();
  while (i < n && text.tokens.size() < max_tokens) {
    while (i < n && IsSpace(raw[i])) ++i;
    if (i >= n) break;
    std::size_t end = i;
    while (end < n && !IsSpace(raw[end])) ++end;
    std::string_view chunk = raw.substr(i, end - i);
    i = end;

    std::size_t lead = 0;
    while (lead < chunk.size() && IsPunct(chunk[lead])) ++lead;
    if (lead == chunk.size()) {
      // Pure punctuation chunk, e.g. "--" or "!".
      text.tokens.push_back(MakePunct(chunk, Attach::kToPrevious));
      continue;
    }
    std::size_t trail = chunk.size();
    while (trail > lead && IsPunct(chunk[trail - 1])) --trail;

    if (lead > 0) text.tokens.push_back(MakePunct(chunk.substr(0, lead), Attach::kToNext));
    text.tokens.push_back(MakeWord(chunk.substr(lead, trail - lead)));
    if (trail < chunk.size()) {
      text.tokens.push_back(MakePunct(chunk.substr(trail), Attach::kToPrevious));
    }
  }
  if (text.tokens.empty()) {
    throw Error(ErrorCode::kEmptyText, "text is empty after trimming");
  }
  if (text.tokens.size() > max_tokens) text.tokens.resize(max_tokens);
  return text;
}

std::string Detokenize(const TokenizedText& text) {
  std::string out;
  bool glue_next = false;
  for (std::size_t i = 0; i < text.tokens.size(); ++i) {
    const Token& t = text.tokens[i];
    const bool glue = i == 0 || glue_next || t.attach == Attach::kToPrevious;
    if (!glue) out.push_back(' ');
    out += t.surface;
    glue_next = t.attach == Attach::kToNext;
  }
  return out;
}

TokenizedText ReplaceToken(const TokenizedText& text, std::size_t position,
                           std::string_view word, PosTag pos,
                           std::optional<int> vocab_id) {
  TokenizedText out = text;
  Token& t = out.tokens.at(position);
  t.surface = MatchCase(t.surface, ToLowerAscii(word));
  t.normalized = ToLowerAscii(word);
  t.pos = pos;
  t.vocab_id = vocab_id;
  t.attach = Attach::kNone;
  return out;
}

TokenizedText KeepTokens(const TokenizedText& text,
                         const std::vector<bool>& keep) {
  TokenizedText out;
  out.origin = text.origin;
  for (std::size_t i = 0; i < text.tokens.size(); ++i) {
    if (keep.at(i)) out.tokens.push_back(text.tokens[i]);
  }
  return out;
}

std::size_t CountModifiedWords(const TokenizedText& original,
                               const TokenizedText& perturbed) {
  if (original.size() != perturbed.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "texts differ in length; modifications are substitutions only");
  }
  std::size_t count = 0;
  for (std::size_t i = 0; i < original.size(); ++i) {
    if (original[i].normalized != perturbed[i].normalized) ++count;
  }
  return count;
}

}  // namespace advtrain
