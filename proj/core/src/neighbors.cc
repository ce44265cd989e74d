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

#include "advtrain/neighbors.h"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include "advtrain/error.h"
#include "json.hpp"

namespace advtrain {

namespace {

void SortNeighbors(std::vector<Neighbor>& list, const EmbeddingStore& store) {
  std::sort(list.begin(), list.end(), [&](const Neighbor& a, const Neighbor& b) {
    if (a.similarity != b.similarity) return a.similarity > b.similarity;
    return store.word(a.id) < store.word(b.id);
  });
}

}  // namespace

NeighborCache NeighborCache::Build(const EmbeddingStore& store, int k,
                                   double min_cos, int workers) {
  if (k < 1) throw Error(ErrorCode::kInvalidArgument, "k must be >= 1");
  if (!(min_cos >= 0.0 && min_cos <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "min_cos must be in [0, 1]");
  }
  NeighborCache cache;
  cache.k_ = k;
  cache.min_cos_ = min_cos;
  const int n = static_cast<int>(store.size());
  cache.lists_.resize(n);

  // Each worker owns a contiguous block of rows; lists are independent, so
  // the merged result is the same for any partition.
  auto build_range = [&](int begin, int end) {
    std::vector<Neighbor> scratch;
    for (int i = begin; i < end; ++i) {
      scratch.clear();
      const auto u = store.Row(i);
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        const double sim = std::clamp(
            Dot(u, store.Row(j)) / (store.RowNorm(i) * store.RowNorm(j)), -1.0, 1.0);
        if (sim >= min_cos) scratch.push_back({j, sim});
      }
      SortNeighbors(scratch, store);
      if (scratch.size() > static_cast<std::size_t>(k)) scratch.resize(k);
      cache.lists_[i] = scratch;
    }
  };

  workers = std::max(1, std::min(workers, n));
  if (workers == 1) {
    build_range(0, n);
  } else {
    std::vector<std::thread> threads;
    const int chunk = (n + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      const int begin = w * chunk;
      const int end = std::min(n, begin + chunk);
      if (begin >= end) break;
      threads.emplace_back(build_range, begin, end);
    }
    for (auto& t : threads) t.join();
  }
  return cache;
}

std::span<const Neighbor> NeighborCache::Of(int id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= lists_.size()) return {};
  return lists_[id];
}

std::string NeighborCache::Serialize(const EmbeddingStore& store) const {
  using nlohmann::json;
  std::string out;
  for (std::size_t i = 0; i < lists_.size(); ++i) {
    json nbrs = json::array();
    for (const auto& nb : lists_[i]) nbrs.push_back({store.word(nb.id), nb.similarity});
    out += json{{"word", store.word(static_cast<int>(i))}, {"nbrs", nbrs}}.dump();
    out += '\n';
  }
  return out;
}

NeighborCache NeighborCache::Parse(std::string_view jsonl,
                                   const EmbeddingStore& store) {
  using nlohmann::json;
  NeighborCache cache;
  cache.lists_.resize(store.size());
  cache.min_cos_ = 1.0;
  std::size_t max_len = 0;
  std::size_t line_no = 0;
  std::istringstream in{std::string(jsonl)};
  std::string line;
  auto fail = [&](const std::string& what) {
    throw Error(ErrorCode::kParseError,
                "neighbor cache line " + std::to_string(line_no) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json rec;
    try {
      rec = json::parse(line);
    } catch (const json::parse_error& e) {
      fail(e.what());
    }
    if (!rec.contains("word") || !rec["word"].is_string() || !rec.contains("nbrs") ||
        !rec["nbrs"].is_array()) {
      fail("expected {\"word\": w, \"nbrs\": [[w', sim], ...]}");
    }
    const auto id = store.Find(rec["word"].get<std::string>());
    if (!id) fail("word not in embedding vocabulary");
    auto& list = cache.lists_[*id];
    for (const auto& pair : rec["nbrs"]) {
      if (!pair.is_array() || pair.size() != 2 || !pair[0].is_string() || !pair[1].is_number()) {
        fail("neighbor entries must be [word, similarity]");
      }
      const auto nid = store.Find(pair[0].get<std::string>());
      if (!nid) fail("neighbor not in embedding vocabulary");
      if (*nid == *id) fail("a word cannot be its own neighbor");
      list.push_back({*nid, pair[1].get<double>()});
      cache.min_cos_ = std::min(cache.min_cos_, pair[1].get<double>());
    }
    SortNeighbors(list, store);
    max_len = std::max(max_len, list.size());
  }
  cache.k_ = static_cast<int>(std::max<std::size_t>(max_len, 1));
  return cache;
}

NeighborCache NeighborCache::Load(const std::filesystem::path& path,
                                  const EmbeddingStore& store) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open neighbor cache " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return Parse(ss.str(), store);
}

}  // namespace advtrain
