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

#include "commands.h"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <memory>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "advtrain/attack.h"
#include "advtrain/checkpoint.h"
#include "advtrain/dataset.h"
#include "advtrain/embedding.h"
#include "advtrain/encoder.h"
#include "advtrain/error.h"
#include "advtrain/eval.h"
#include "advtrain/hash.h"
#include "advtrain/lexicon.h"
#include "advtrain/neighbors.h"
#include "advtrain/toy_corpus.h"
#include "advtrain/trainer.h"
#include "json.hpp"
#include "manifest.h"
#include "run_config.h"

namespace advtrain::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

[[noreturn]] void ConfigError(const std::string& message) {
  throw Error(ErrorCode::kConfigError, message);
}

std::string FormatDouble(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

// A subcommand plus the flag overrides it registered. Each override is
// applied only when its flag was given.
struct Command {
  CLI::App* app = nullptr;
  std::string config_path;
  std::string out = "";
  std::vector<std::function<void(RunConfig&)>> overrides;

  template <typename T>
  void Flag(const std::string& names, const std::string& help,
            std::function<void(RunConfig&, const T&)> set) {
    auto value = std::make_shared<T>();
    CLI::Option* opt = app->add_option(names, *value, help);
    overrides.push_back([opt, value, set](RunConfig& cfg) {
      if (opt->count() > 0) set(cfg, *value);
    });
  }

  void PathFlag(const std::string& names, const std::string& help, std::string RunPaths::*field) {
    Flag<std::string>(names, help, [field](RunConfig& c, const std::string& v) { c.paths.*field = v; });
  }
};

Command MakeCommand(CLI::App& root, const std::string& name, const std::string& help,
                    const std::string& default_out) {
  Command c;
  c.app = root.add_subcommand(name, help);
  c.out = default_out;
  c.app->add_option("--config", c.config_path, "JSON run config; flags override it");
  c.app->add_option("--out", c.out, "Output file, relative to the output directory")
      ->capture_default_str();
  c.PathFlag("--out-dir", "Output directory (default: $" + std::string(kOutDirEnv) + ")",
             &RunPaths::out_dir);
  c.Flag<std::uint64_t>("--seed", "Base seed", [](RunConfig& r, const std::uint64_t& v) {
    r.training.seed = v;
  });
  c.Flag<int>("--workers", "Attack worker threads", [](RunConfig& r, const int& v) {
    r.training.workers = v;
  });
  return c;
}

RunConfig BuildConfig(const Command& c) {
  RunConfig cfg;
  if (!c.config_path.empty()) cfg = LoadRunConfig(c.config_path);
  if (const char* env = std::getenv(kOutDirEnv); env != nullptr && *env != '\0') {
    cfg.paths.out_dir = env;
  }
  for (const auto& apply : c.overrides) apply(cfg);
  return cfg;
}

const std::string& RequirePath(const std::string& path, const std::string& flag) {
  if (path.empty()) ConfigError("missing required " + flag);
  if (!fs::is_regular_file(path)) ConfigError(flag + " path does not exist: " + path);
  return path;
}

fs::path OutputPath(const RunConfig& cfg, const std::string& out) {
  if (out.empty()) ConfigError("--out must not be empty");
  fs::path p(out);
  if (p.is_absolute()) return p;
  return (cfg.paths.out_dir.empty() ? fs::path(".") : fs::path(cfg.paths.out_dir)) / p;
}

void PrepareOutput(const fs::path& path) {
  const fs::path dir = path.parent_path();
  if (!dir.empty()) fs::create_directories(dir);
}

// Shared state of one run: config snapshot, timers and the manifest.
class Run {
 public:
  Run(std::string command, const RunConfig& cfg)
      : start_(std::chrono::steady_clock::now()) {
    manifest_.tool_version = ToolVersion();
    manifest_.command = std::move(command);
    manifest_.config = RunConfigToJson(cfg);
    manifest_.config_hash = RunConfigHash(cfg);
    manifest_.started_at = UtcTimestamp();
  }

  void Input(const std::string& role, const fs::path& path) {
    manifest_.inputs.push_back(HashedFile(role, path));
  }
  void Output(const std::string& role, const fs::path& path, std::string_view contents) {
    PrepareOutput(path);
    AtomicWrite(path, contents);
    manifest_.outputs.push_back(HashedFile(role, path));
  }
  json& metrics() { return manifest_.metrics; }

  void Finish(const fs::path& primary_output) {
    manifest_.finished_at = UtcTimestamp();
    manifest_.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    AtomicWrite(ManifestPathFor(primary_output), ManifestToJson(manifest_).dump(2) + "\n");
  }

 private:
  std::chrono::steady_clock::time_point start_;
  RunManifest manifest_;
};

// Embedding store, lexicon, neighbor cache and the attack context over them.
class AttackResources {
 public:
  AttackResources(std::shared_ptr<const EmbeddingStore> store, const std::string& lexicon_path,
                  const std::string& neighbors_path, int k)
      : store_(std::move(store)),
        lexicon_(PosLexicon::Load(lexicon_path)),
        cache_(NeighborCache::Load(neighbors_path, *store_)),
        encoder_(*store_),
        proposer_(*store_, cache_, k) {}
  AttackResources(const AttackResources&) = delete;
  AttackResources& operator=(const AttackResources&) = delete;

  AttackContext context() const { return {*store_, lexicon_, encoder_, proposer_}; }
  const std::shared_ptr<const EmbeddingStore>& store() const { return store_; }

 private:
  std::shared_ptr<const EmbeddingStore> store_;
  PosLexicon lexicon_;
  NeighborCache cache_;
  MeanEmbeddingEncoder encoder_;
  EmbeddingNeighborProposer proposer_;
};

void CheckLabels(const Dataset& data, std::size_t num_classes, const std::string& what) {
  for (const LabeledExample& ex : data.examples) {
    if (ex.label < 0 || static_cast<std::size_t>(ex.label) >= num_classes) {
      throw Error(ErrorCode::kLabelOutOfRange, what + " has a label the model does not know");
    }
  }
}

std::vector<LabeledExample> FirstN(const Dataset& data, long limit) {
  std::vector<LabeledExample> out = data.examples;
  if (limit > 0 && static_cast<std::size_t>(limit) < out.size()) out.resize(limit);
  return out;
}

json SummaryJson(std::span<const AttackResult> results) {
  const AttackSummary s = AttackSuccessRate(results);
  long queries = 0;
  std::size_t exhausted = 0;
  for (const AttackResult& r : results) {
    queries += r.queries_used;
    if (r.status == AttackStatus::kExhausted) ++exhausted;
  }
  return {{"attacked", s.total_attacked},
          {"successes", s.successes},
          {"success_rate", s.success_rate},
          {"exhausted", exhausted},
          {"mean_queries", static_cast<double>(queries) / static_cast<double>(results.size())}};
}

// ---- precompute-neighbors --------------------------------------------------

struct NeighborsCommand {
  Command c;
  explicit NeighborsCommand(CLI::App& root)
      : c(MakeCommand(root, "precompute-neighbors", "Cache top-k embedding neighbors",
                      "neighbors.jsonl")) {
    c.PathFlag("--embeddings,--emb", "Embedding file", &RunPaths::embeddings);
    c.Flag<int>("--k", "Neighbors per word", [](RunConfig& r, const int& v) { r.neighbor_k = v; });
    c.Flag<double>("--min-cos", "Minimum cosine", [](RunConfig& r, const double& v) {
      r.neighbor_min_cos = v;
    });
  }

  int Execute(std::ostream& out) const {
    const RunConfig cfg = BuildConfig(c);
    const std::string& emb_path = RequirePath(cfg.paths.embeddings, "--embeddings");
    if (cfg.neighbor_k < 1) ConfigError("--k must be >= 1");
    if (!(cfg.neighbor_min_cos >= -1.0 && cfg.neighbor_min_cos <= 1.0)) {
      ConfigError("--min-cos must be in [-1, 1]");
    }
    if (cfg.training.workers < 1) ConfigError("--workers must be >= 1");
    const fs::path out_path = OutputPath(cfg, c.out);

    Run run("precompute-neighbors", cfg);
    run.Input("embeddings", emb_path);
    const EmbeddingStore store = EmbeddingStore::Load(emb_path);
    const NeighborCache cache =
        NeighborCache::Build(store, cfg.neighbor_k, cfg.neighbor_min_cos, cfg.training.workers);
    std::size_t total = 0;
    for (std::size_t i = 0; i < cache.size(); ++i) total += cache.Of(static_cast<int>(i)).size();
    run.Output("neighbors", out_path, cache.Serialize(store));
    const double mean = store.size() ? static_cast<double>(total) / store.size() : 0.0;
    run.metrics() = {{"k", cfg.neighbor_k},
                     {"min_cos", cfg.neighbor_min_cos},
                     {"vocab_size", store.size()},
                     {"mean_neighbors", mean}};
    run.Finish(out_path);
    out << "vocab_size      " << store.size() << "\n"
        << "k               " << cfg.neighbor_k << "\n"
        << "min_cos         " << FormatDouble(cfg.neighbor_min_cos) << "\n"
        << "mean_neighbors  " << FormatDouble(mean) << "\n"
        << "wrote           " << out_path.string() << "\n";
    return kExitOk;
  }
};

// ---- training flags shared by train and sweep-gamma -------------------------

void AddTrainingFlags(Command& c, const std::string& train_flag_names) {
  c.PathFlag(train_flag_names, "Training JSONL", &RunPaths::train);
  c.PathFlag("--embeddings,--emb", "Embedding file", &RunPaths::embeddings);
  c.PathFlag("--lexicon", "POS lexicon TSV", &RunPaths::lexicon);
  c.PathFlag("--neighbors", "Neighbor cache JSONL", &RunPaths::neighbors);
  c.Flag<double>("--gamma", "Adversarial fraction", [](RunConfig& r, const double& v) {
    r.training.gamma = v;
  });
  c.Flag<double>("--alpha", "Adversarial loss weight", [](RunConfig& r, const double& v) {
    r.training.alpha = v;
  });
  c.Flag<int>("--n-clean", "Clean epochs", [](RunConfig& r, const int& v) { r.training.n_clean = v; });
  c.Flag<int>("--n-adv", "Adversarial epochs", [](RunConfig& r, const int& v) { r.training.n_adv = v; });
  c.Flag<double>("--lr", "Learning rate", [](RunConfig& r, const double& v) {
    r.training.optimizer.learning_rate = v;
  });
  c.Flag<std::size_t>("--batch-size", "Batch size", [](RunConfig& r, const std::size_t& v) {
    r.training.batch_size = v;
  });
  c.Flag<std::size_t>("--hidden", "Hidden units", [](RunConfig& r, const std::size_t& v) {
    r.training.hidden = v;
  });
  c.Flag<long>("--train-budget", "Query budget per training attack", [](RunConfig& r, const long& v) {
    r.training.attack.query_budget = v;
  });
}

struct TrainingInputs {
  std::unique_ptr<AttackResources> resources;
  Dataset train;
};

void RequireTrainingPaths(const RunConfig& cfg) {
  RequirePath(cfg.paths.train, "--train");
  RequirePath(cfg.paths.embeddings, "--embeddings");
  RequirePath(cfg.paths.lexicon, "--lexicon");
  RequirePath(cfg.paths.neighbors, "--neighbors");
  cfg.training.Validate();
}

TrainingInputs LoadTrainingInputs(const RunConfig& cfg, Run& run) {
  run.Input("train", cfg.paths.train);
  run.Input("embeddings", cfg.paths.embeddings);
  run.Input("lexicon", cfg.paths.lexicon);
  run.Input("neighbors", cfg.paths.neighbors);
  auto store = std::make_shared<const EmbeddingStore>(EmbeddingStore::Load(cfg.paths.embeddings));
  TrainingInputs in;
  in.resources = std::make_unique<AttackResources>(store, cfg.paths.lexicon, cfg.paths.neighbors,
                                                   cfg.training.attack.k_candidates);
  in.train = LoadDataset(cfg.paths.train, Split::kTrain);
  return in;
}

// ---- train -----------------------------------------------------------------

struct TrainCommand {
  Command c;
  explicit TrainCommand(CLI::App& root)
      : c(MakeCommand(root, "train", "Train a classifier with gradient-guided adversarial training",
                      "model.json")) {
    AddTrainingFlags(c, "--train,--data");
  }

  int Execute(std::ostream& out) const {
    const RunConfig cfg = BuildConfig(c);
    RequireTrainingPaths(cfg);
    const fs::path out_path = OutputPath(cfg, c.out);

    Run run("train", cfg);
    TrainingInputs in = LoadTrainingInputs(cfg, run);
    if (in.train.empty()) throw Error(ErrorCode::kEmptyDataset, "training set is empty");

    const fs::path ckpt_dir = fs::absolute(out_path).parent_path();
    PrepareOutput(out_path);
    Checkpoint ckpt;
    ckpt.seed = cfg.training.seed;
    ckpt.embedding_path = fs::absolute(cfg.paths.embeddings)
                              .lexically_normal()
                              .lexically_relative(ckpt_dir.lexically_normal())
                              .string();
    ckpt.embedding_hash = HashFileHex(cfg.paths.embeddings);
    ckpt.class_names = in.train.class_names;

    // The checkpoint is rewritten after every epoch, so an interrupted run
    // leaves the latest completed epoch behind.
    std::string log;
    out << "epoch  kind         clean_loss  adv_loss    adv_gen  attacks  queries  seconds\n";
    const auto on_epoch = [&](const Classifier& model, const OptimizerState& opt,
                              const EpochReport& r) {
      log += json{{"epoch", r.epoch},
                  {"kind", std::string(EpochKindName(r.kind))},
                  {"mean_clean_loss", r.mean_clean_loss},
                  {"mean_adv_loss", r.mean_adv_loss},
                  {"adv_generated", r.adv_generated},
                  {"adv_failed_skipped", r.adv_failed_skipped},
                  {"attacks_launched", r.attacks_launched},
                  {"attack_queries", r.attack_queries}}
                 .dump() +
             "\n";
      ckpt.params = model.params();
      ckpt.optimizer = opt;
      ckpt.epoch = r.epoch + 1;
      AtomicWrite(out_path, SerializeCheckpoint(ckpt));
      char line[160];
      std::snprintf(line, sizeof(line), "%-6d %-12s %-11.5f %-11.5f %-8zu %-8zu %-8ld %.2f\n",
                    r.epoch, std::string(EpochKindName(r.kind)).c_str(), r.mean_clean_loss,
                    r.mean_adv_loss, r.adv_generated, r.attacks_launched, r.attack_queries,
                    r.wall_seconds);
      out << line;
    };
    const TrainResult result =
        Train(in.resources->store(), in.train, cfg.training, in.resources->context(), on_epoch);
    run.Output("checkpoint", out_path, SerializeCheckpoint(ckpt));
    run.Output("epoch_reports", out_path.string() + ".epochs.jsonl", log);

    const double train_acc = Accuracy(result.model, in.train);
    run.metrics() = {{"train_accuracy", train_acc},
                     {"epochs", ckpt.epoch},
                     {"final_clean_loss", result.reports.back().mean_clean_loss}};
    run.Finish(out_path);
    out << "train_accuracy  " << FormatDouble(train_acc) << "\n"
        << "wrote           " << out_path.string() << "\n";
    return kExitOk;
  }
};

// ---- attack ----------------------------------------------------------------

std::string AttackRecord(std::size_t id, const AttackResult& r) {
  const json j = {{"id", id},
                  {"status", std::string(AttackStatusName(r.status))},
                  {"label", r.original.label},
                  {"queries", r.queries_used},
                  {"mods", r.words_modified},
                  {"goal", r.final_goal},
                  {"original_text", Detokenize(r.original.text)},
                  {"perturbed_text", Detokenize(r.perturbed)}};
  return j.dump() + "\n";
}

void AddAttackFlags(Command& c) {
  c.PathFlag("--lexicon", "POS lexicon TSV", &RunPaths::lexicon);
  c.PathFlag("--neighbors", "Neighbor cache JSONL", &RunPaths::neighbors);
  c.Flag<long>("--budget", "Query budget per attack", [](RunConfig& r, const long& v) {
    r.attack.query_budget = v;
  });
  c.Flag<std::string>("--ranking", "gradient or deletion", [](RunConfig& r, const std::string& v) {
    if (v == "gradient") {
      r.attack.ranking = RankingMethod::kGradient;
    } else if (v == "deletion") {
      r.attack.ranking = RankingMethod::kDeletion;
    } else {
      ConfigError("--ranking must be 'gradient' or 'deletion'");
    }
  });
}

struct AttackCommand {
  Command c;
  long limit = 0;
  explicit AttackCommand(CLI::App& root)
      : c(MakeCommand(root, "attack", "Attack every example of a dataset", "attack.jsonl")) {
    c.PathFlag("--model", "Checkpoint", &RunPaths::model);
    c.PathFlag("--data", "Examples to attack (JSONL)", &RunPaths::test);
    AddAttackFlags(c);
    c.app->add_option("--limit", limit, "Attack only the first N examples (0 = all)");
  }

  int Execute(std::ostream& out) const {
    const RunConfig cfg = BuildConfig(c);
    RequirePath(cfg.paths.model, "--model");
    RequirePath(cfg.paths.test, "--data");
    RequirePath(cfg.paths.lexicon, "--lexicon");
    RequirePath(cfg.paths.neighbors, "--neighbors");
    cfg.attack.Validate();
    if (cfg.training.workers < 1) ConfigError("--workers must be >= 1");
    const fs::path out_path = OutputPath(cfg, c.out);

    Run run("attack", cfg);
    run.Input("model", cfg.paths.model);
    run.Input("data", cfg.paths.test);
    run.Input("lexicon", cfg.paths.lexicon);
    run.Input("neighbors", cfg.paths.neighbors);
    const Classifier model = RestoreClassifier(LoadCheckpoint(cfg.paths.model), cfg.paths.model);
    const AttackResources res(model.store_ptr(), cfg.paths.lexicon, cfg.paths.neighbors,
                              cfg.attack.k_candidates);
    const Dataset data = LoadDataset(cfg.paths.test, Split::kTest);
    CheckLabels(data, model.num_classes(), "--data");
    const std::vector<LabeledExample> examples = FirstN(data, limit);
    if (examples.empty()) throw Error(ErrorCode::kEmptyDataset, "no examples to attack");

    const auto results =
        AttackAll(model, examples, cfg.attack, res.context(), cfg.training.workers);
    std::string records;
    for (std::size_t i = 0; i < results.size(); ++i) records += AttackRecord(i, results[i]);
    const json summary = SummaryJson(results);
    records += json{{"summary", summary}}.dump() + "\n";
    run.Output("attack_results", out_path, records);
    run.metrics() = summary;
    run.Finish(out_path);
    out << "attacked        " << summary["attacked"].get<std::size_t>() << "\n"
        << "successes       " << summary["successes"].get<std::size_t>() << "\n"
        << "success_rate    " << FormatDouble(summary["success_rate"].get<double>()) << "\n"
        << "mean_queries    " << FormatDouble(summary["mean_queries"].get<double>()) << "\n"
        << "wrote           " << out_path.string() << "\n";
    return kExitOk;
  }
};

// ---- eval ------------------------------------------------------------------

// Successful attacks that changed at least one word, read back from an
// attack JSONL file.
struct AdversarialRecords {
  std::vector<LabeledExample> examples;
  std::vector<TextPair> pairs;
};

AdversarialRecords LoadAdversarialRecords(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  AdversarialRecords out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const json j = json::parse(line);
      if (j.contains("summary")) continue;
      if (j.at("status").get<std::string>() != "Success" || j.at("mods").get<long>() == 0) continue;
      TokenizedText original = Tokenize(j.at("original_text").get<std::string>());
      TokenizedText perturbed = Tokenize(j.at("perturbed_text").get<std::string>());
      out.examples.push_back({perturbed, j.at("label").get<int>()});
      out.pairs.emplace_back(std::move(original), std::move(perturbed));
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kParseError,
                  path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

struct EvalCommand {
  Command c;
  explicit EvalCommand(CLI::App& root)
      : c(MakeCommand(root, "eval", "Accuracy, robust accuracy and representation distance",
                      "eval.json")) {
    c.PathFlag("--model", "Checkpoint", &RunPaths::model);
    c.PathFlag("--data", "Evaluation JSONL", &RunPaths::test);
    c.PathFlag("--ood", "Out-of-domain JSONL", &RunPaths::ood);
    c.PathFlag("--adv", "Attack results JSONL from another model", &RunPaths::adv);
  }

  int Execute(std::ostream& out) const {
    const RunConfig cfg = BuildConfig(c);
    RequirePath(cfg.paths.model, "--model");
    RequirePath(cfg.paths.test, "--data");
    if (!cfg.paths.ood.empty()) RequirePath(cfg.paths.ood, "--ood");
    if (!cfg.paths.adv.empty()) RequirePath(cfg.paths.adv, "--adv");
    const fs::path out_path = OutputPath(cfg, c.out);

    Run run("eval", cfg);
    run.Input("model", cfg.paths.model);
    run.Input("data", cfg.paths.test);
    const Classifier model = RestoreClassifier(LoadCheckpoint(cfg.paths.model), cfg.paths.model);
    const Dataset data = LoadDataset(cfg.paths.test, Split::kTest);
    CheckLabels(data, model.num_classes(), "--data");

    json report = {{"accuracy", Accuracy(model, data)}, {"examples", data.size()}};
    if (!cfg.paths.ood.empty()) {
      run.Input("ood", cfg.paths.ood);
      const Dataset ood = LoadDataset(cfg.paths.ood, Split::kTest);
      CheckLabels(ood, model.num_classes(), "--ood");
      report["ood_accuracy"] = Accuracy(model, ood);
      report["ood_examples"] = ood.size();
    }
    if (!cfg.paths.adv.empty()) {
      run.Input("adv", cfg.paths.adv);
      const AdversarialRecords adv = LoadAdversarialRecords(cfg.paths.adv);
      report["adversarial_examples"] = adv.examples.size();
      if (!adv.examples.empty()) {
        report["robust_accuracy"] = RobustAccuracy(model, adv.examples);
        report["representation_distance"] = RepresentationDistance(model, adv.pairs);
        report["input_mean_distance"] =
            RepresentationDistance(model, adv.pairs, RepresentationLayer::kInputMean);
      }
    }
    run.Output("eval_report", out_path, report.dump(2) + "\n");
    run.metrics() = report;
    run.Finish(out_path);
    for (const auto& [key, value] : report.items()) {
      out << std::left << std::setw(26) << key
          << (value.is_number_float() ? FormatDouble(value.get<double>()) : value.dump()) << "\n";
    }
    out << "wrote                     " << out_path.string() << "\n";
    return kExitOk;
  }
};

// ---- aopc ------------------------------------------------------------------

struct AopcCommand {
  Command c;
  std::string explainer = "lime";
  long limit = 0;
  explicit AopcCommand(CLI::App& root)
      : c(MakeCommand(root, "aopc", "AOPC of LIME (or random) word rankings", "aopc.tsv")) {
    c.PathFlag("--model", "Checkpoint", &RunPaths::model);
    c.PathFlag("--data", "Evaluation JSONL", &RunPaths::test);
    c.Flag<int>("--samples", "LIME samples per example", [](RunConfig& r, const int& v) {
      r.lime.n_samples = v;
    });
    c.Flag<int>("--k", "AOPC depth K", [](RunConfig& r, const int& v) { r.aopc_k = v; });
    c.app->add_option("--explainer", explainer, "lime or random")->capture_default_str();
    c.app->add_option("--limit", limit, "Use only the first N examples (0 = all)");
  }

  int Execute(std::ostream& out) const {
    const RunConfig cfg = BuildConfig(c);
    RequirePath(cfg.paths.model, "--model");
    RequirePath(cfg.paths.test, "--data");
    if (cfg.aopc_k < 1) ConfigError("--k must be >= 1");
    if (cfg.lime.n_samples < 1) ConfigError("--samples must be >= 1");
    if (explainer != "lime" && explainer != "random") {
      ConfigError("--explainer must be 'lime' or 'random'");
    }
    const fs::path out_path = OutputPath(cfg, c.out);

    Run run("aopc", cfg);
    run.Input("model", cfg.paths.model);
    run.Input("data", cfg.paths.test);
    const Classifier model = RestoreClassifier(LoadCheckpoint(cfg.paths.model), cfg.paths.model);
    const Dataset data = LoadDataset(cfg.paths.test, Split::kTest);
    CheckLabels(data, model.num_classes(), "--data");

    std::vector<LabeledExample> examples;
    std::vector<std::size_t> ids;
    const std::vector<LabeledExample> head = FirstN(data, limit);
    for (std::size_t i = 0; i < head.size(); ++i) {
      if (head[i].text.size() < 2) continue;
      examples.push_back(head[i]);
      ids.push_back(i);
    }
    if (examples.empty()) throw Error(ErrorCode::kEmptyDataset, "no example has 2 or more tokens");

    std::vector<std::vector<std::size_t>> rankings;
    for (std::size_t j = 0; j < examples.size(); ++j) {
      const std::uint64_t seed = MixSeed(cfg.training.seed, ids[j], 0);
      if (explainer == "lime") {
        rankings.push_back(RankByExplanation(
            LimeExplain(model, examples[j].text, examples[j].label, cfg.lime, seed)));
      } else {
        rankings.push_back(ShuffledOrder(examples[j].text.size(), seed));
      }
    }
    const AopcReport report = Aopc(model, examples, rankings, cfg.aopc_k);

    std::ostringstream tsv;
    tsv << "example_id";
    for (int k = 1; k <= cfg.aopc_k; ++k) tsv << "\taopc_delta_k" << k;
    tsv << '\n';
    for (std::size_t j = 0; j < examples.size(); ++j) {
      tsv << ids[j];
      for (int k = 0; k < cfg.aopc_k; ++k) {
        tsv << '\t';
        if (static_cast<std::size_t>(k) < report.deltas[j].size()) tsv << FormatDouble(report.deltas[j][k]);
      }
      tsv << '\n';
    }
    run.Output("aopc_deltas", out_path, tsv.str());
    run.metrics() = {{"aopc", report.mean},
                     {"k", report.k},
                     {"examples", examples.size()},
                     {"explainer", explainer}};
    run.Finish(out_path);
    out << "explainer       " << explainer << "\n"
        << "examples        " << examples.size() << "\n"
        << "K               " << report.k << "\n"
        << "aopc            " << FormatDouble(report.mean) << "\n"
        << "wrote           " << out_path.string() << "\n";
    return kExitOk;
  }
};

// ---- sweep-gamma -------------------------------------------------------------

std::vector<double> ParseValues(const std::string& text) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const double v = std::stod(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      values.push_back(v);
    } catch (const std::exception&) {
      ConfigError("--values: not a number: '" + item + "'");
    }
  }
  if (values.empty()) ConfigError("--values must list at least one gamma");
  return values;
}

struct SweepCommand {
  Command c;
  std::string values_text = "0,0.2,1.0";
  long limit = 0;
  explicit SweepCommand(CLI::App& root)
      : c(MakeCommand(root, "sweep-gamma", "Train and attack once per gamma value",
                      "sweep_gamma.tsv")) {
    AddTrainingFlags(c, "--train");
    c.PathFlag("--data", "Evaluation JSONL", &RunPaths::test);
    c.PathFlag("--ood", "Out-of-domain JSONL", &RunPaths::ood);
    c.Flag<long>("--budget", "Query budget per evaluation attack", [](RunConfig& r, const long& v) {
      r.attack.query_budget = v;
    });
    c.app->add_option("--values", values_text, "Comma-separated gamma values")
        ->capture_default_str();
    c.app->add_option("--limit", limit, "Attack only the first N evaluation examples (0 = all)");
  }

  int Execute(std::ostream& out) const {
    const RunConfig cfg = BuildConfig(c);
    const std::vector<double> gammas = ParseValues(values_text);
    RequireTrainingPaths(cfg);
    RequirePath(cfg.paths.test, "--data");
    if (!cfg.paths.ood.empty()) RequirePath(cfg.paths.ood, "--ood");
    cfg.attack.Validate();
    for (double g : gammas) {
      TrainingConfig t = cfg.training;
      t.gamma = g;
      t.Validate();
    }
    const fs::path out_path = OutputPath(cfg, c.out);

    Run run("sweep-gamma", cfg);
    TrainingInputs in = LoadTrainingInputs(cfg, run);
    run.Input("data", cfg.paths.test);
    const Dataset test = LoadDataset(cfg.paths.test, Split::kTest);
    Dataset ood;
    if (!cfg.paths.ood.empty()) {
      run.Input("ood", cfg.paths.ood);
      ood = LoadDataset(cfg.paths.ood, Split::kTest);
    }
    const std::vector<LabeledExample> targets = FirstN(test, limit);
    if (targets.empty()) throw Error(ErrorCode::kEmptyDataset, "no examples to attack");

    std::ostringstream tsv;
    tsv << "gamma\taccuracy\tood_accuracy\tattack_success_rate\tsuccesses\tattacked\tmean_queries\n";
    out << "gamma    accuracy  ood_acc   asr       mean_queries\n";
    json rows = json::array();
    for (double g : gammas) {
      TrainingConfig t = cfg.training;
      t.gamma = g;
      const TrainResult result = Train(in.resources->store(), in.train, t, in.resources->context());
      CheckLabels(test, result.model.num_classes(), "--data");
      const double acc = Accuracy(result.model, test);
      const double ood_acc = ood.empty() ? -1.0 : Accuracy(result.model, ood);
      const auto attacks = AttackAll(result.model, targets, cfg.attack, in.resources->context(),
                                     cfg.training.workers);
      const json s = SummaryJson(attacks);
      tsv << FormatDouble(g) << '\t' << FormatDouble(acc) << '\t'
          << (ood.empty() ? std::string("NA") : FormatDouble(ood_acc)) << '\t'
          << FormatDouble(s["success_rate"].get<double>()) << '\t'
          << s["successes"].get<std::size_t>() << '\t' << s["attacked"].get<std::size_t>() << '\t'
          << FormatDouble(s["mean_queries"].get<double>()) << '\n';
      char line[128];
      std::snprintf(line, sizeof(line), "%-8.3g %-9.4f %-9s %-9.4f %.1f\n", g, acc,
                    ood.empty() ? "NA" : FormatDouble(ood_acc).substr(0, 6).c_str(),
                    s["success_rate"].get<double>(), s["mean_queries"].get<double>());
      out << line;
      json row = s;
      row["gamma"] = g;
      row["accuracy"] = acc;
      if (!ood.empty()) row["ood_accuracy"] = ood_acc;
      rows.push_back(row);
    }
    run.Output("sweep", out_path, tsv.str());
    run.metrics() = {{"rows", rows}};
    run.Finish(out_path);
    out << "wrote " << out_path.string() << "\n";
    return kExitOk;
  }
};

// ---- make-toy ----------------------------------------------------------------

struct MakeToyCommand {
  Command c;
  std::uint64_t corpus_seed = ToyCorpusConfig{}.seed;
  explicit MakeToyCommand(CLI::App& root)
      : c(MakeCommand(root, "make-toy", "Write the synthetic sentiment fixture", "config.json")) {
    c.app->add_option("--corpus-seed", corpus_seed, "Seed of the generated corpus")
        ->capture_default_str();
  }

  int Execute(std::ostream& out) const {
    const RunConfig base = BuildConfig(c);
    if (base.training.workers < 1) ConfigError("--workers must be >= 1");
    const fs::path out_path = OutputPath(base, c.out);
    const fs::path dir = out_path.parent_path();

    ToyCorpusConfig toy;
    toy.seed = corpus_seed;
    const ToyCorpus corpus = GenerateToyCorpus(toy);
    const NeighborCache cache = NeighborCache::Build(corpus.embeddings, kDefaultNeighborK,
                                                     kDefaultMinWordCos, base.training.workers);

    // The bundled config refers to its siblings by relative path.
    RunConfig cfg;
    cfg.training.seed = base.training.seed;
    cfg.training.optimizer.learning_rate = 3e-3;
    cfg.paths.train = "train.jsonl";
    cfg.paths.test = "test.jsonl";
    cfg.paths.ood = "ood.jsonl";
    cfg.paths.embeddings = "embeddings.txt";
    cfg.paths.lexicon = "lexicon.tsv";
    cfg.paths.neighbors = "neighbors.jsonl";

    Run run("make-toy", base);
    run.Output("embeddings", dir / "embeddings.txt", corpus.embeddings.Serialize());
    run.Output("lexicon", dir / "lexicon.tsv", corpus.lexicon.ToTsv());
    run.Output("train", dir / "train.jsonl", SerializeDataset(corpus.train));
    run.Output("test", dir / "test.jsonl", SerializeDataset(corpus.test));
    run.Output("ood", dir / "ood.jsonl", SerializeDataset(corpus.ood));
    run.Output("neighbors", dir / "neighbors.jsonl", cache.Serialize(corpus.embeddings));
    run.Output("config", out_path, RunConfigToJson(cfg).dump(2) + "\n");
    run.metrics() = {{"vocab_size", corpus.embeddings.size()},
                     {"train", corpus.train.size()},
                     {"test", corpus.test.size()},
                     {"ood", corpus.ood.size()},
                     {"corpus_seed", corpus_seed}};
    run.Finish(out_path);
    out << "vocab_size      " << corpus.embeddings.size() << "\n"
        << "train/test/ood  " << corpus.train.size() << "/" << corpus.test.size() << "/"
        << corpus.ood.size() << "\n"
        << "wrote           " << dir.string() << "\n";
    return kExitOk;
  }
};

void ReportError(std::ostream& err, std::string_view code, std::string_view message) {
  err << json{{"error", code}, {"message", message}}.dump() << "\n";
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"advtrain: adversarial training and evaluation for text classifiers", "advtrain"};
  app.set_version_flag("--version", ToolVersion());
  app.require_subcommand(1);

  NeighborsCommand neighbors(app);
  TrainCommand train(app);
  AttackCommand attack(app);
  EvalCommand eval(app);
  AopcCommand aopc(app);
  SweepCommand sweep(app);
  MakeToyCommand make_toy(app);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfigError;
  }

  try {
    if (neighbors.c.app->parsed()) return neighbors.Execute(out);
    if (train.c.app->parsed()) return train.Execute(out);
    if (attack.c.app->parsed()) return attack.Execute(out);
    if (eval.c.app->parsed()) return eval.Execute(out);
    if (aopc.c.app->parsed()) return aopc.Execute(out);
    if (sweep.c.app->parsed()) return sweep.Execute(out);
    if (make_toy.c.app->parsed()) return make_toy.Execute(out);
  } catch (const Error& e) {
    ReportError(err, ErrorCodeName(e.code()), e.what());
    return e.code() == ErrorCode::kConfigError ? kExitConfigError : kExitRuntimeError;
  } catch (const std::exception& e) {
    ReportError(err, "InternalError", e.what());
    return kExitRuntimeError;
  }
  return kExitConfigError;
}

}  // namespace advtrain::cli
