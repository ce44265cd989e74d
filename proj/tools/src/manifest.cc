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

#include "manifest.h"

#include <chrono>
#include <ctime>
#include <fstream>

#include "advtrain/error.h"
#include "advtrain/hash.h"

namespace advtrain::cli {

std::string ToolVersion() { return ADVTRAIN_VERSION; }

FileRecord HashedFile(std::string role, const std::filesystem::path& path) {
  return {std::move(role), path.string(), HashFileHex(path)};
}

nlohmann::json ManifestToJson(const RunManifest& m) {
  auto files = [](const std::vector<FileRecord>& records) {
    nlohmann::json out = nlohmann::json::array();
    for (const FileRecord& r : records) {
      out.push_back({{"role", r.role}, {"path", r.path}, {"fnv1a64", r.fnv1a64}});
    }
    return out;
  };
  return {{"tool", "advtrain"},
          {"tool_version", m.tool_version},
          {"command", m.command},
          {"config", m.config},
          {"config_hash", m.config_hash},
          {"inputs", files(m.inputs)},
          {"outputs", files(m.outputs)},
          {"metrics", m.metrics},
          {"started_at", m.started_at},
          {"finished_at", m.finished_at},
          {"elapsed_seconds", m.elapsed_seconds}};
}

std::filesystem::path ManifestPathFor(const std::filesystem::path& primary_output) {
  return primary_output.string() + ".manifest.json";
}

std::string UtcTimestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void AtomicWrite(const std::filesystem::path& path, std::string_view contents) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIoError, "cannot write " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw Error(ErrorCode::kIoError, "write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(ErrorCode::kIoError, "cannot rename onto " + path.string());
}

}  // namespace advtrain::cli
