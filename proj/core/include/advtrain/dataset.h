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

#ifndef ADVTRAIN_DATASET_H_
#define ADVTRAIN_DATASET_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "advtrain/text.h"

namespace advtrain {

struct LabeledExample {
  TokenizedText text;
  int label = 0;
};

enum class Split { kTrain, kDev, kTest };
std::string_view SplitName(Split split);

struct Dataset {
  std::vector<LabeledExample> examples;
  std::vector<std::string> class_names;
  Split split = Split::kTrain;

  std::size_t size() const { return examples.size(); }
  bool empty() const { return examples.empty(); }
  int num_classes() const { return static_cast<int>(class_names.size()); }
};

// JSON lines, one {"text": string, "label": int} object per line. An optional
// first record {"classes": [..]} declares the class names; otherwise the
// class count is max label + 1 and names are "0", "1", ....
// Errors: kParseError (message carries the 1-based line number),
// kLabelOutOfRange, kIoError.
Dataset LoadDataset(const std::filesystem::path& path,
                    Split split = Split::kTrain);
Dataset ParseDataset(std::string_view jsonl, Split split = Split::kTrain);

// Writes the header record followed by one record per example, using the
// detokenized text.
void SaveDataset(const Dataset& dataset, const std::filesystem::path& path);
std::string SerializeDataset(const Dataset& dataset);

}  // namespace advtrain

#endif  // ADVTRAIN_DATASET_H_
