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

#include "advtrain/lexicon.h"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <vector>

#include "advtrain/error.h"

namespace advtrain {

PosLexicon PosLexicon::Load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open lexicon " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return Parse(ss.str());
}

PosLexicon PosLexicon::Parse(std::string_view tsv) {
  PosLexicon lexicon;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= tsv.size()) {
    std::size_t end = tsv.find('\n', start);
    if (end == std::string_view::npos) end = tsv.size();
    std::string_view line = tsv.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') {
      if (end == tsv.size()) break;
      continue;
    }
    const std::size_t t1 = line.find('\t');
    const std::size_t t2 = t1 == std::string_view::npos ? t1 : line.find('\t', t1 + 1);
    if (t2 == std::string_view::npos) {
      throw Error(ErrorCode::kParseError,
                  "lexicon line " + std::to_string(line_no) + ": expected word<TAB>tag<TAB>count");
    }
    const std::string_view word = line.substr(0, t1);
    const auto tag = ParsePosTag(line.substr(t1 + 1, t2 - t1 - 1));
    if (!tag || *tag == PosTag::kUnknown || word.empty()) {
      throw Error(ErrorCode::kParseError,
                  "lexicon line " + std::to_string(line_no) + ": bad word or tag");
    }
    long count = 0;
    try {
      std::size_t used = 0;
      const std::string count_str(line.substr(t2 + 1));
      count = std::stol(count_str, &used);
      if (used != count_str.size() || count < 0) throw std::invalid_argument("count");
    } catch (const std::exception&) {
      throw Error(ErrorCode::kParseError,
                  "lexicon line " + std::to_string(line_no) + ": bad count");
    }
    lexicon.Add(word, *tag, count);
    if (end == tsv.size()) break;
  }
  return lexicon;
}

void PosLexicon::Add(std::string_view word, PosTag tag, long count) {
  if (tag == PosTag::kUnknown) return;
  auto& row = counts_[ToLowerAscii(word)];
  row[static_cast<int>(tag)] += count;
}

PosTag PosLexicon::Lookup(std::string_view word) const {
  const auto it = counts_.find(ToLowerAscii(word));
  if (it == counts_.end()) return PosTag::kUnknown;
  const auto& row = it->second;
  const auto best = std::max_element(row.begin(), row.end());
  if (*best <= 0) return PosTag::kUnknown;
  return static_cast<PosTag>(best - row.begin());
}

std::string PosLexicon::ToTsv() const {
  std::vector<const std::pair<const std::string, std::array<long, 5>>*> rows;
  rows.reserve(counts_.size());
  for (const auto& kv : counts_) rows.push_back(&kv);
  std::sort(rows.begin(), rows.end(),
            [](const auto* a, const auto* b) { return a->first < b->first; });
  std::string out;
  for (const auto* kv : rows) {
    for (int t = 0; t < 5; ++t) {
      if (kv->second[t] == 0) continue;
      out += kv->first;
      out += '\t';
      out += PosTagName(static_cast<PosTag>(t));
      out += '\t';
      out += std::to_string(kv->second[t]);
      out += '\n';
    }
  }
  return out;
}

TokenizedText PosTagText(TokenizedText text, const PosLexicon& lexicon) {
  for (Token& t : text.tokens) {
    t.pos = t.is_punctuation() ? PosTag::kOther : lexicon.Lookup(t.normalized);
  }
  return text;
}

}  // namespace advtrain
