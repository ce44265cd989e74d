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

#include "advtrain/checkpoint.h"

#include <fstream>
#include <sstream>

#include "advtrain/error.h"
#include "advtrain/hash.h"
#include "json.hpp"

namespace advtrain {

namespace {

using nlohmann::json;

json MatrixToJson(const Matrix& m) {
  return {{"rows", m.rows}, {"cols", m.cols}, {"data", m.data}};
}

Matrix MatrixFromJson(const json& j) {
  Matrix m;
  m.rows = j.at("rows").get<std::size_t>();
  m.cols = j.at("cols").get<std::size_t>();
  m.data = j.at("data").get<std::vector<double>>();
  if (m.data.size() != m.rows * m.cols) {
    throw Error(ErrorCode::kParseError, "matrix data does not match its shape");
  }
  return m;
}

json ParamsToJson(const ModelParams& p) {
  return {{"w1", MatrixToJson(p.w1)},
          {"b1", p.b1},
          {"w2", MatrixToJson(p.w2)},
          {"b2", p.b2}};
}

ModelParams ParamsFromJson(const json& j) {
  ModelParams p;
  p.w1 = MatrixFromJson(j.at("w1"));
  p.b1 = j.at("b1").get<Vector>();
  p.w2 = MatrixFromJson(j.at("w2"));
  p.b2 = j.at("b2").get<Vector>();
  if (p.b1.size() != p.w1.rows || p.w2.cols != p.w1.rows || p.b2.size() != p.w2.rows) {
    throw Error(ErrorCode::kParseError, "inconsistent parameter shapes");
  }
  return p;
}

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

std::string SerializeCheckpoint(const Checkpoint& c) {
  const OptimizerConfig& oc = c.optimizer.config;
  json j = {
      {"format", "advtrain-checkpoint-1"},
      {"params", ParamsToJson(c.params)},
      {"optimizer",
       {{"learning_rate", oc.learning_rate},
        {"weight_decay", oc.weight_decay},
        {"beta1", oc.beta1},
        {"beta2", oc.beta2},
        {"epsilon", oc.epsilon},
        {"warmup_steps", oc.warmup_steps},
        {"step", c.optimizer.step},
        {"first_moment", ParamsToJson(c.optimizer.first_moment)},
        {"second_moment", ParamsToJson(c.optimizer.second_moment)}}},
      {"seed", c.seed},
      {"epoch", c.epoch},
      {"embedding_path", c.embedding_path},
      {"embedding_hash", c.embedding_hash},
      {"class_names", c.class_names},
  };
  return j.dump() + "\n";
}

Checkpoint ParseCheckpoint(std::string_view text) {
  try {
    const json j = json::parse(text);
    if (j.value("format", "") != "advtrain-checkpoint-1") {
      throw Error(ErrorCode::kParseError, "not an advtrain checkpoint");
    }
    Checkpoint c;
    c.params = ParamsFromJson(j.at("params"));
    const json& o = j.at("optimizer");
    OptimizerConfig& oc = c.optimizer.config;
    oc.learning_rate = o.at("learning_rate").get<double>();
    oc.weight_decay = o.at("weight_decay").get<double>();
    oc.beta1 = o.at("beta1").get<double>();
    oc.beta2 = o.at("beta2").get<double>();
    oc.epsilon = o.at("epsilon").get<double>();
    oc.warmup_steps = o.at("warmup_steps").get<long>();
    c.optimizer.step = o.at("step").get<long>();
    c.optimizer.first_moment = ParamsFromJson(o.at("first_moment"));
    c.optimizer.second_moment = ParamsFromJson(o.at("second_moment"));
    c.seed = j.at("seed").get<std::uint64_t>();
    c.epoch = j.at("epoch").get<int>();
    c.embedding_path = j.at("embedding_path").get<std::string>();
    c.embedding_hash = j.at("embedding_hash").get<std::string>();
    c.class_names = j.at("class_names").get<std::vector<std::string>>();
    return c;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParseError, std::string("checkpoint: ") + e.what());
  }
}

void SaveCheckpoint(const Checkpoint& checkpoint,
                    const std::filesystem::path& path) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIoError, "cannot write " + tmp.string());
    out << SerializeCheckpoint(checkpoint);
    if (!out) throw Error(ErrorCode::kIoError, "write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(ErrorCode::kIoError, "cannot rename onto " + path.string());
}

Checkpoint LoadCheckpoint(const std::filesystem::path& path) {
  return ParseCheckpoint(ReadFile(path));
}

Classifier RestoreClassifier(const Checkpoint& checkpoint,
                             const std::filesystem::path& checkpoint_path) {
  std::filesystem::path emb = checkpoint.embedding_path;
  if (emb.is_relative()) emb = checkpoint_path.parent_path() / emb;
  const std::string hash = HashFileHex(emb);
  if (hash != checkpoint.embedding_hash) {
    throw Error(ErrorCode::kIoError, "embedding file " + emb.string() +
                                         " does not match the checkpoint hash");
  }
  auto store = std::make_shared<const EmbeddingStore>(EmbeddingStore::Load(emb));
  if (store->dim() != checkpoint.params.dim()) {
    throw Error(ErrorCode::kParseError, "checkpoint dimension does not match embeddings");
  }
  return Classifier(std::move(store), checkpoint.params);
}

}  // namespace advtrain
