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

#include "run_config.h"

#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string_view>

#include "advtrain/error.h"
#include "advtrain/hash.h"

namespace advtrain::cli {

namespace {

using nlohmann::json;

[[noreturn]] void ConfigError(const std::string& message) {
  throw Error(ErrorCode::kConfigError, message);
}

void RejectUnknownKeys(const json& j, std::string_view where,
                       std::initializer_list<std::string_view> allowed) {
  if (!j.is_object()) ConfigError(std::string(where) + " must be an object");
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (std::string_view a : allowed) known = known || key == a;
    if (!known) ConfigError("unknown key '" + key + "' in " + std::string(where));
  }
}

template <typename T>
void Read(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception&) {
    ConfigError(std::string("wrong type for '") + key + "'");
  }
}

json OptimizerToJson(const OptimizerConfig& o) {
  return {{"learning_rate", o.learning_rate}, {"weight_decay", o.weight_decay},
          {"beta1", o.beta1},                 {"beta2", o.beta2},
          {"epsilon", o.epsilon},             {"warmup_steps", o.warmup_steps}};
}

OptimizerConfig OptimizerFromJson(const json& j) {
  RejectUnknownKeys(j, "optimizer",
                    {"learning_rate", "weight_decay", "beta1", "beta2", "epsilon", "warmup_steps"});
  OptimizerConfig o;
  Read(j, "learning_rate", o.learning_rate);
  Read(j, "weight_decay", o.weight_decay);
  Read(j, "beta1", o.beta1);
  Read(j, "beta2", o.beta2);
  Read(j, "epsilon", o.epsilon);
  Read(j, "warmup_steps", o.warmup_steps);
  return o;
}

json AttackToJson(const AttackConfig& a) {
  return {{"k_candidates", a.k_candidates},
          {"min_word_cos", a.min_word_cos},
          {"min_sentence_sim", a.min_sentence_sim},
          {"max_mod_rate", a.max_mod_rate},
          {"query_budget", a.query_budget},
          {"ranking", std::string(RankingMethodName(a.ranking))},
          {"require_improvement", a.require_improvement}};
}

AttackConfig AttackFromJson(const json& j, AttackConfig a) {
  RejectUnknownKeys(j, "attack",
                    {"k_candidates", "min_word_cos", "min_sentence_sim", "max_mod_rate",
                     "query_budget", "ranking", "require_improvement"});
  Read(j, "k_candidates", a.k_candidates);
  Read(j, "min_word_cos", a.min_word_cos);
  Read(j, "min_sentence_sim", a.min_sentence_sim);
  Read(j, "max_mod_rate", a.max_mod_rate);
  Read(j, "query_budget", a.query_budget);
  Read(j, "require_improvement", a.require_improvement);
  if (j.contains("ranking")) {
    std::string name;
    Read(j, "ranking", name);
    if (name == "gradient") {
      a.ranking = RankingMethod::kGradient;
    } else if (name == "deletion") {
      a.ranking = RankingMethod::kDeletion;
    } else {
      ConfigError("ranking must be 'gradient' or 'deletion'");
    }
  }
  return a;
}

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kConfigError, "cannot open config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void Resolve(std::string& p, const std::filesystem::path& base) {
  if (!p.empty() && std::filesystem::path(p).is_relative()) p = (base / p).lexically_normal().string();
}

}  // namespace

json RunConfigToJson(const RunConfig& cfg) {
  const TrainingConfig& t = cfg.training;
  const RunPaths& p = cfg.paths;
  return {
      {"seed", cfg.training.seed},
      {"workers", cfg.training.workers},
      {"paths",
       {{"train", p.train}, {"test", p.test}, {"ood", p.ood},
        {"embeddings", p.embeddings}, {"lexicon", p.lexicon}, {"neighbors", p.neighbors},
        {"model", p.model}, {"adv", p.adv}, {"out_dir", p.out_dir}}},
      {"training",
       {{"n_clean", t.n_clean},
        {"n_adv", t.n_adv},
        {"gamma", t.gamma},
        {"alpha", t.alpha},
        {"batch_size", t.batch_size},
        {"hidden", t.hidden},
        {"optimizer", OptimizerToJson(t.optimizer)},
        {"attack", AttackToJson(t.attack)}}},
      {"attack", AttackToJson(cfg.attack)},
      {"neighbors", {{"k", cfg.neighbor_k}, {"min_cos", cfg.neighbor_min_cos}}},
      {"lime",
       {{"n_samples", cfg.lime.n_samples},
        {"kernel_width", cfg.lime.kernel_width},
        {"ridge", cfg.lime.ridge},
        {"max_attempts", cfg.lime.max_attempts}}},
      {"aopc_k", cfg.aopc_k},
  };
}

RunConfig RunConfigFromJson(const json& j) {
  RejectUnknownKeys(j, "config",
                    {"seed", "workers", "paths", "training", "attack", "neighbors", "lime", "aopc_k"});
  RunConfig cfg;
  Read(j, "seed", cfg.training.seed);
  Read(j, "workers", cfg.training.workers);
  Read(j, "aopc_k", cfg.aopc_k);
  if (j.contains("paths")) {
    const json& p = j.at("paths");
    RejectUnknownKeys(p, "paths", {"train", "test", "ood", "embeddings", "lexicon", "neighbors",
                                   "model", "adv", "out_dir"});
    Read(p, "train", cfg.paths.train);
    Read(p, "test", cfg.paths.test);
    Read(p, "ood", cfg.paths.ood);
    Read(p, "embeddings", cfg.paths.embeddings);
    Read(p, "lexicon", cfg.paths.lexicon);
    Read(p, "neighbors", cfg.paths.neighbors);
    Read(p, "model", cfg.paths.model);
    Read(p, "adv", cfg.paths.adv);
    Read(p, "out_dir", cfg.paths.out_dir);
  }
  if (j.contains("training")) {
    const json& t = j.at("training");
    RejectUnknownKeys(t, "training", {"n_clean", "n_adv", "gamma", "alpha", "batch_size", "hidden",
                                      "optimizer", "attack"});
    Read(t, "n_clean", cfg.training.n_clean);
    Read(t, "n_adv", cfg.training.n_adv);
    Read(t, "gamma", cfg.training.gamma);
    Read(t, "alpha", cfg.training.alpha);
    Read(t, "batch_size", cfg.training.batch_size);
    Read(t, "hidden", cfg.training.hidden);
    if (t.contains("optimizer")) cfg.training.optimizer = OptimizerFromJson(t.at("optimizer"));
    if (t.contains("attack")) cfg.training.attack = AttackFromJson(t.at("attack"), cfg.training.attack);
  }
  if (j.contains("attack")) cfg.attack = AttackFromJson(j.at("attack"), cfg.attack);
  if (j.contains("neighbors")) {
    const json& n = j.at("neighbors");
    RejectUnknownKeys(n, "neighbors", {"k", "min_cos"});
    Read(n, "k", cfg.neighbor_k);
    Read(n, "min_cos", cfg.neighbor_min_cos);
  }
  if (j.contains("lime")) {
    const json& l = j.at("lime");
    RejectUnknownKeys(l, "lime", {"n_samples", "kernel_width", "ridge", "max_attempts"});
    Read(l, "n_samples", cfg.lime.n_samples);
    Read(l, "kernel_width", cfg.lime.kernel_width);
    Read(l, "ridge", cfg.lime.ridge);
    Read(l, "max_attempts", cfg.lime.max_attempts);
  }
  cfg.training.Validate();
  cfg.attack.Validate();
  return cfg;
}

RunConfig LoadRunConfig(const std::filesystem::path& path) {
  json j;
  try {
    j = json::parse(ReadFile(path));
  } catch (const json::parse_error& e) {
    ConfigError("config " + path.string() + ": " + e.what());
  }
  RunConfig cfg = RunConfigFromJson(j);
  const std::filesystem::path base = path.parent_path();
  RunPaths& p = cfg.paths;
  for (std::string* s : {&p.train, &p.test, &p.ood, &p.embeddings, &p.lexicon, &p.neighbors,
                         &p.model, &p.adv, &p.out_dir}) {
    Resolve(*s, base);
  }
  return cfg;
}

std::string SerializeRunConfig(const RunConfig& cfg) { return RunConfigToJson(cfg).dump(); }

std::string RunConfigHash(const RunConfig& cfg) { return Fnv1a64Hex(SerializeRunConfig(cfg)); }

}  // namespace advtrain::cli
