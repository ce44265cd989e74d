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

#ifndef ADVTRAIN_CHECKPOINT_H_
#define ADVTRAIN_CHECKPOINT_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "advtrain/victim.h"

namespace advtrain {

// Everything needed to resume or evaluate a model. The embedding matrix is
// referenced by path and content hash rather than copied.
struct Checkpoint {
  ModelParams params;
  OptimizerState optimizer;
  std::uint64_t seed = 0;
  int epoch = 0;
  std::string embedding_path;
  std::string embedding_hash;
  std::vector<std::string> class_names;
};

// JSON; doubles are written with round-trip precision, so Load(Serialize(c))
// reproduces c bit for bit.
std::string SerializeCheckpoint(const Checkpoint& checkpoint);
Checkpoint ParseCheckpoint(std::string_view json);

// Atomic: writes a temporary file and renames it.
void SaveCheckpoint(const Checkpoint& checkpoint,
                    const std::filesystem::path& path);
Checkpoint LoadCheckpoint(const std::filesystem::path& path);

// Loads the referenced embedding file (relative paths resolve against the
// checkpoint's directory) and checks its hash. kIoError on mismatch.
Classifier RestoreClassifier(const Checkpoint& checkpoint,
                             const std::filesystem::path& checkpoint_path);

}  // namespace advtrain

#endif  // ADVTRAIN_CHECKPOINT_H_
