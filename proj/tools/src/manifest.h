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

#ifndef ADVTRAIN_TOOLS_MANIFEST_H_
#define ADVTRAIN_TOOLS_MANIFEST_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace advtrain::cli {

struct FileRecord {
  std::string role;
  std::string path;
  std::string fnv1a64;
};

// Provenance of one command run.
struct RunManifest {
  std::string tool_version;
  std::string command;
  nlohmann::json config;
  std::string config_hash;
  std::vector<FileRecord> inputs;
  std::vector<FileRecord> outputs;
  nlohmann::json metrics = nlohmann::json::object();
  std::string started_at;
  std::string finished_at;
  double elapsed_seconds = 0.0;
};

std::string ToolVersion();

// Hashes the file's current contents.
FileRecord HashedFile(std::string role, const std::filesystem::path& path);

nlohmann::json ManifestToJson(const RunManifest& manifest);

// `<primary output>.manifest.json`.
std::filesystem::path ManifestPathFor(const std::filesystem::path& primary_output);

// ISO-8601 UTC, second resolution.
std::string UtcTimestamp();

// Writes through a sibling temporary file and renames it into place.
void AtomicWrite(const std::filesystem::path& path, std::string_view contents);

}  // namespace advtrain::cli

#endif  // ADVTRAIN_TOOLS_MANIFEST_H_
