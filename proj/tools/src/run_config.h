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

#ifndef ADVTRAIN_TOOLS_RUN_CONFIG_H_
#define ADVTRAIN_TOOLS_RUN_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <string>

#include "advtrain/attack.h"
#include "advtrain/eval.h"
#include "advtrain/trainer.h"
#include "json.hpp"

namespace advtrain::cli {

// Input and output locations. Empty means "not set".
struct RunPaths {
  std::string train;
  std::string test;
  std::string ood;
  std::string embeddings;
  std::string lexicon;
  std::string neighbors;
  std::string model;
  std::string adv;
  std::string out_dir;

  bool operator==(const RunPaths&) const = default;
};

// Every tunable of every command. Loaded from a JSON file, then overridden by
// command-line flags.
struct RunConfig {
  RunPaths paths;
  // training.seed is the base seed of every command; training.workers sizes
  // the attack worker pool.
  TrainingConfig training;
  AttackConfig attack;  // evaluation-time attack
  int neighbor_k = kDefaultNeighborK;
  double neighbor_min_cos = kDefaultMinWordCos;
  LimeConfig lime;
  int aopc_k = 10;

  bool operator==(const RunConfig&) const = default;
};

nlohmann::json RunConfigToJson(const RunConfig& cfg);

// Unknown keys and wrong types raise Error(kConfigError). Missing keys keep
// their defaults.
RunConfig RunConfigFromJson(const nlohmann::json& j);

// Relative paths in the file resolve against the file's directory.
RunConfig LoadRunConfig(const std::filesystem::path& path);

// Canonical compact serialization and its FNV-1a hash.
std::string SerializeRunConfig(const RunConfig& cfg);
std::string RunConfigHash(const RunConfig& cfg);

}  // namespace advtrain::cli

#endif  // ADVTRAIN_TOOLS_RUN_CONFIG_H_
