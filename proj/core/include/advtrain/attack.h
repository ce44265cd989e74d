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

#ifndef ADVTRAIN_ATTACK_H_
#define ADVTRAIN_ATTACK_H_

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "advtrain/dataset.h"
#include "advtrain/encoder.h"
#include "advtrain/lexicon.h"
#include "advtrain/neighbors.h"
#include "advtrain/query_meter.h"
#include "advtrain/victim.h"

namespace advtrain {

inline constexpr long kTrainingQueryBudget = 200;
inline constexpr long kEvaluationQueryBudget = 2000;

enum class RankingMethod { kGradient, kDeletion };
enum class ProposerKind { kEmbeddingKnn, kPlugin };

std::string_view RankingMethodName(RankingMethod method);
std::string_view ProposerKindName(ProposerKind kind);

struct AttackConfig {
  int k_candidates = kDefaultNeighborK;
  double min_word_cos = kDefaultMinWordCos;
  double min_sentence_sim = 0.9;
  double max_mod_rate = 0.1;
  long query_budget = kEvaluationQueryBudget;
  RankingMethod ranking = RankingMethod::kGradient;
  ProposerKind proposer = ProposerKind::kEmbeddingKnn;
  // Off: x* always moves to the best candidate at a position, as the greedy
  // search is written. On: only when it raises the goal score.
  bool require_improvement = false;

  // Throws Error(kConfigError).
  void Validate() const;
  bool operator==(const AttackConfig&) const = default;
};

// Untargeted goal: 1 - P(y | x).
double GoalScore(std::span<const double> probs, int label);

// Stable descending sort of positions by importance (ties: lower position
// first).
std::vector<std::size_t> RankByImportance(std::span<const double> importance);

// I(x_i) = || d loss / d e_i ||_1. One metered query.
std::vector<double> GradientImportance(const Classifier& model,
                                       const TokenizedText& text, int label,
                                       QueryMeter& meter);
// P(y|x) - P(y|x without token i). n + 1 metered queries.
std::vector<double> DeletionImportance(const Classifier& model,
                                       const TokenizedText& text, int label,
                                       QueryMeter& meter);

std::vector<std::size_t> RankWordsGradient(const Classifier& model,
                                           const TokenizedText& text, int label,
                                           QueryMeter& meter);
std::vector<std::size_t> RankWordsDeletion(const Classifier& model,
                                           const TokenizedText& text, int label,
                                           QueryMeter& meter);

// Transformation T(x, i): ranked replacement words for position i.
class ReplacementProposer {
 public:
  virtual ~ReplacementProposer() = default;
  virtual std::vector<std::string> Propose(const TokenizedText& text,
                                           std::size_t position) const = 0;
};

// Nearest neighbours from a counter-fitted embedding cache.
class EmbeddingNeighborProposer : public ReplacementProposer {
 public:
  EmbeddingNeighborProposer(const EmbeddingStore& store,
                            const NeighborCache& cache, int k)
      : store_(store), cache_(cache), k_(k) {}
  std::vector<std::string> Propose(const TokenizedText& text,
                                   std::size_t position) const override;

 private:
  const EmbeddingStore& store_;
  const NeighborCache& cache_;
  int k_;
};

// Plug-in transformation, e.g. a masked language model. Only the first
// `k` words returned by the callback are used.
class CallbackProposer : public ReplacementProposer {
 public:
  using Fn = std::function<std::vector<std::string>(const TokenizedText&,
                                                    std::size_t)>;
  CallbackProposer(Fn fn, int k) : fn_(std::move(fn)), k_(k) {}
  std::vector<std::string> Propose(const TokenizedText& text,
                                   std::size_t position) const override;

 private:
  Fn fn_;
  int k_;
};

// Everything the constraints and transformation need besides the model.
struct AttackContext {
  const EmbeddingStore& store;
  const PosLexicon& lexicon;
  const SentenceEncoder& encoder;
  const ReplacementProposer& proposer;
};

struct ConstraintFlags {
  bool pos = false;
  bool word_cos = false;
  bool sentence_sim = false;
  bool mod_rate = false;

  bool all() const { return pos && word_cos && sentence_sim && mod_rate; }
};

// UNKNOWN on either side is a wildcard.
bool ConstraintPosTags(PosTag original, PosTag replacement);
bool ConstraintPos(const Token& original, std::string_view replacement,
                   const PosLexicon& lexicon);
// cosine >= min_cos (inclusive). False if either word is out of vocabulary.
bool ConstraintWordCos(std::string_view original, std::string_view replacement,
                       const EmbeddingStore& store, double min_cos);
// Compares the full candidate against the full original text.
bool ConstraintSentenceSim(const TokenizedText& original,
                           const TokenizedText& candidate,
                           const SentenceEncoder& encoder, double min_sim);
// max(1, floor(rate * n)).
std::size_t ModificationCap(std::size_t num_words, double rate);
bool ConstraintModRate(std::size_t num_words, std::size_t candidate_total_mods,
                       double rate);

struct PerturbationCandidate {
  std::size_t position = 0;
  std::string replacement;
  TokenizedText text;
  double goal = 0.0;   // filled once the candidate is queried
  int predicted = -1;  // argmax label, filled with goal
  ConstraintFlags flags;
};

// Evaluates all four constraints of `candidate_text` against `original`.
ConstraintFlags CheckConstraints(const TokenizedText& original,
                                 const TokenizedText& candidate_text,
                                 std::size_t position,
                                 const AttackContext& ctx,
                                 const AttackConfig& cfg);

// Candidates for replacing token `position` of `current`, filtered by every
// constraint (checked against `original`). Uses no model queries. Empty for
// OOV or punctuation tokens.
std::vector<PerturbationCandidate> ProposeReplacements(
    const TokenizedText& original, const TokenizedText& current,
    std::size_t position, const AttackContext& ctx, const AttackConfig& cfg);

enum class AttackStatus { kSuccess, kFailed, kExhausted };
std::string_view AttackStatusName(AttackStatus status);

// One visited position of the greedy search that had candidates.
struct SearchStep {
  std::size_t position = 0;
  TokenizedText parent;  // x* before this step
  std::size_t num_candidates = 0;
  std::string chosen;
  double chosen_goal = 0.0;
  bool accepted = false;
};

struct AttackResult {
  AttackStatus status = AttackStatus::kFailed;
  LabeledExample original;
  TokenizedText perturbed;
  long queries_used = 0;
  std::size_t words_modified = 0;
  double final_goal = 0.0;
  std::vector<std::size_t> ranking;
  std::vector<SearchStep> steps;
};

// Greedy search over ranked positions under `meter`:
//  1. one query for the initial prediction (already wrong => Success),
//  2. rank positions once,
//  3. for each ranked position with candidates, query every candidate and move
//     x* to the best (ties: lexicographically smallest word); Success as soon
//     as x* is misclassified. Positions are skipped once the modification cap
//     is reached.
// Failed when the ranking runs out; Exhausted when a needed query is
// unaffordable (queries_used == budget).
AttackResult GreedySearch(const Classifier& model, const LabeledExample& example,
                          const AttackConfig& cfg, const AttackContext& ctx,
                          QueryMeter& meter);

// GreedySearch with a fresh meter of cfg.query_budget, followed by an
// independent re-validation of Success results (std::logic_error if a
// Success does not hold up).
AttackResult Attack(const Classifier& model, const LabeledExample& example,
                    const AttackConfig& cfg, const AttackContext& ctx);

// Attacks examples independently on `workers` threads; results are in input
// order and identical for any worker count.
std::vector<AttackResult> AttackAll(const Classifier& model,
                                    std::span<const LabeledExample> examples,
                                    const AttackConfig& cfg,
                                    const AttackContext& ctx, int workers = 1);

struct ValidationReport {
  bool ok = true;
  std::string failure;
};

// Re-checks a Success result from scratch: misclassification, all four
// constraints at every modified position, modification cap, budget.
ValidationReport ValidateSuccess(const Classifier& model,
                                 const AttackResult& result,
                                 const AttackConfig& cfg,
                                 const AttackContext& ctx);

}  // namespace advtrain

#endif  // ADVTRAIN_ATTACK_H_
