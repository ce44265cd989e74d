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

#include "advtrain/dataset.h"

#include <fstream>
#include <sstream>

#include "advtrain/error.h"
#include "json.hpp"

namespace advtrain {

using nlohmann::json;

std::string_view SplitName(Split split) {
  switch (split) {
    case Split::kTrain: return "train";
    case Split::kDev: return "dev";
    case Split::kTest: return "test";
  }
  return "train";
}

Dataset ParseDataset(std::string_view jsonl, Split split) {
  Dataset data;
  data.split = split;
  bool declared = false;
  int max_label = -1;
  std::size_t line_no = 0;
  std::size_t start = 0;
  auto fail = [&](const std::string& what) {
    throw Error(ErrorCode::kParseError,
                "line " + std::to_string(line_no) + ": " + what);
  };
  while (start < jsonl.size()) {
    std::size_t end = jsonl.find('\n', start);
    if (end == std::string_view::npos) end = jsonl.size();
    std::string_view line = jsonl.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;

    json record;
    try {
      record = json::parse(line);
    } catch (const json::parse_error& e) {
      fail(std::string("invalid JSON: ") + e.what());
    }
    if (!record.is_object()) fail("record is not an object");

    if (record.contains("classes")) {
      if (declared || !data.examples.empty()) fail("class header must be the first record");
      if (!record["classes"].is_array() || record["classes"].empty()) fail("\"classes\" must be a non-empty array");
      for (const auto& c : record["classes"]) {
        if (!c.is_string()) fail("class names must be strings");
        data.class_names.push_back(c.get<std::string>());
      }
      declared = true;
      continue;
    }
    if (!record.contains("text") || !record["text"].is_string()) fail("missing string field \"text\"");
    if (!record.contains("label") || !record["label"].is_number_integer()) fail("missing integer field \"label\"");
    const long long label = record["label"].get<long long>();
    if (label < 0 || (declared && label >= static_cast<long long>(data.class_names.size()))) {
      throw Error(ErrorCode::kLabelOutOfRange,
                  "line " + std::to_string(line_no) + ": label " + std::to_string(label));
    }
    LabeledExample ex;
    try {
      ex.text = Tokenize(record["text"].get<std::string>());
    } catch (const Error& e) {
      fail(e.what());
    }
    ex.label = static_cast<int>(label);
    max_label = std::max(max_label, ex.label);
    data.examples.push_back(std::move(ex));
  }
  if (!declared) {
    for (int c = 0; c <= max_label; ++c) data.class_names.push_back(std::to_string(c));
  }
  return data;
}

Dataset LoadDataset(const std::filesystem::path& path, Split split) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open dataset " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ParseDataset(ss.str(), split);
}

std::string SerializeDataset(const Dataset& dataset) {
  std::string out = json{{"classes", dataset.class_names}}.dump() + "\n";
  for (const auto& ex : dataset.examples) {
    out += json{{"text", Detokenize(ex.text)}, {"label", ex.label}}.dump();
    out += '\n';
  }
  return out;
}

void SaveDataset(const Dataset& dataset, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  out << SerializeDataset(dataset);
}

}  // namespace advtrain
