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

#include "advtrain/attack.h"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>
#include <stdexcept>
#include <thread>
#include <unordered_set>

#include "advtrain/error.h"

namespace advtrain {

namespace {

std::size_t WordCount(const TokenizedText& text) {
  return static_cast<std::size_t>(std::count_if(
      text.tokens.begin(), text.tokens.end(),
      [](const Token& t) { return !t.is_punctuation(); }));
}

PosTag TagOf(const Token& token, const PosLexicon& lexicon) {
  if (token.pos != PosTag::kUnknown) return token.pos;
  return lexicon.Lookup(token.normalized);
}

void RequireNonEmpty(const TokenizedText& text) {
  if (text.empty()) throw Error(ErrorCode::kEmptyText, "cannot rank an empty text");
}

}  // namespace

std::string_view RankingMethodName(RankingMethod method) {
  return method == RankingMethod::kGradient ? "gradient" : "deletion";
}

std::string_view ProposerKindName(ProposerKind kind) {
  return kind == ProposerKind::kEmbeddingKnn ? "embedding_knn" : "plugin";
}

std::string_view AttackStatusName(AttackStatus status) {
  switch (status) {
    case AttackStatus::kSuccess: return "Success";
    case AttackStatus::kFailed: return "Failed";
    case AttackStatus::kExhausted: return "Exhausted";
  }
  return "Failed";
}

void AttackConfig::Validate() const {
  auto unit = [](double x) { return x >= 0.0 && x <= 1.0; };
  if (k_candidates < 1) throw Error(ErrorCode::kConfigError, "k_candidates must be >= 1");
  if (!unit(min_word_cos)) throw Error(ErrorCode::kConfigError, "min_word_cos must be in [0, 1]");
  if (!unit(min_sentence_sim)) throw Error(ErrorCode::kConfigError, "min_sentence_sim must be in [0, 1]");
  if (!unit(max_mod_rate)) throw Error(ErrorCode::kConfigError, "max_mod_rate must be in [0, 1]");
  if (query_budget < 1) throw Error(ErrorCode::kConfigError, "query_budget must be >= 1");
}

double GoalScore(std::span<const double> probs, int label) {
  return 1.0 - probs[label];
}

std::vector<std::size_t> RankByImportance(std::span<const double> importance) {
  std::vector<std::size_t> order(importance.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return importance[a] > importance[b];
  });
  return order;
}

std::vector<double> GradientImportance(const Classifier& model,
                                       const TokenizedText& text, int label,
                                       QueryMeter& meter) {
  RequireNonEmpty(text);
  const InputGradients g = BackwardToInputs(model, text, label, &meter);
  std::vector<double> importance(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    double l1 = 0.0;
    for (double x : g.per_token[i]) l1 += std::abs(x);
    importance[i] = l1;
  }
  return importance;
}

std::vector<double> DeletionImportance(const Classifier& model,
                                       const TokenizedText& text, int label,
                                       QueryMeter& meter) {
  RequireNonEmpty(text);
  const double base = Forward(model, text, &meter).probs.at(label);
  std::vector<double> importance(text.size());
  std::vector<bool> keep(text.size(), true);
  for (std::size_t i = 0; i < text.size(); ++i) {
    keep[i] = false;
    importance[i] = base - Forward(model, KeepTokens(text, keep), &meter).probs[label];
    keep[i] = true;
  }
  return importance;
}

std::vector<std::size_t> RankWordsGradient(const Classifier& model,
                                           const TokenizedText& text, int label,
                                           QueryMeter& meter) {
  return RankByImportance(GradientImportance(model, text, label, meter));
}

std::vector<std::size_t> RankWordsDeletion(const Classifier& model,
                                           const TokenizedText& text, int label,
                                           QueryMeter& meter) {
  return RankByImportance(DeletionImportance(model, text, label, meter));
}

std::vector<std::string> EmbeddingNeighborProposer::Propose(
    const TokenizedText& text, std::size_t position) const {
  std::vector<std::string> out;
  const Token& t = text.tokens.at(position);
  if (t.is_punctuation()) return out;
  const int id = store_.IdOrOov(t);
  for (const Neighbor& nb : cache_.Of(id)) {
    if (static_cast<int>(out.size()) >= k_) break;
    out.push_back(store_.word(nb.id));
  }
  return out;
}

std::vector<std::string> CallbackProposer::Propose(const TokenizedText& text,
                                                   std::size_t position) const {
  std::vector<std::string> words = fn_(text, position);
  if (static_cast<int>(words.size()) > k_) words.resize(k_);
  return words;
}

bool ConstraintPosTags(PosTag original, PosTag replacement) {
  if (original == PosTag::kUnknown || replacement == PosTag::kUnknown) return true;
  return original == replacement;
}

bool ConstraintPos(const Token& original, std::string_view replacement,
                   const PosLexicon& lexicon) {
  return ConstraintPosTags(TagOf(original, lexicon), lexicon.Lookup(replacement));
}

bool ConstraintWordCos(std::string_view original, std::string_view replacement,
                       const EmbeddingStore& store, double min_cos) {
  const auto a = store.Find(original);
  const auto b = store.Find(replacement);
  if (!a || !b) return false;
  return Cosine(store.Row(*a), store.Row(*b)) >= min_cos;
}

bool ConstraintSentenceSim(const TokenizedText& original,
                           const TokenizedText& candidate,
                           const SentenceEncoder& encoder, double min_sim) {
  try {
    return Cosine(encoder.Encode(original), encoder.Encode(candidate)) >= min_sim;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kNoKnownWords || e.code() == ErrorCode::kZeroVector) {
      return false;
    }
    throw;
  }
}

std::size_t ModificationCap(std::size_t num_words, double rate) {
  const auto cap = static_cast<std::size_t>(std::floor(rate * static_cast<double>(num_words)));
  return std::max<std::size_t>(1, cap);
}

bool ConstraintModRate(std::size_t num_words, std::size_t candidate_total_mods,
                       double rate) {
  return candidate_total_mods <= ModificationCap(num_words, rate);
}

ConstraintFlags CheckConstraints(const TokenizedText& original,
                                 const TokenizedText& candidate_text,
                                 std::size_t position, const AttackContext& ctx,
                                 const AttackConfig& cfg) {
  ConstraintFlags f;
  const Token& orig = original.tokens.at(position);
  const std::string& repl = candidate_text.tokens.at(position).normalized;
  f.pos = ConstraintPos(orig, repl, ctx.lexicon);
  f.word_cos = ConstraintWordCos(orig.normalized, repl, ctx.store, cfg.min_word_cos);
  f.mod_rate = ConstraintModRate(WordCount(original),
                                 CountModifiedWords(original, candidate_text),
                                 cfg.max_mod_rate);
  f.sentence_sim = ConstraintSentenceSim(original, candidate_text, ctx.encoder,
                                         cfg.min_sentence_sim);
  return f;
}

std::vector<PerturbationCandidate> ProposeReplacements(
    const TokenizedText& original, const TokenizedText& current,
    std::size_t position, const AttackContext& ctx, const AttackConfig& cfg) {
  std::vector<PerturbationCandidate> out;
  const Token& token = current.tokens.at(position);
  if (token.is_punctuation() || !ctx.store.Find(token.normalized)) return out;

  std::vector<std::string> proposals = ctx.proposer.Propose(current, position);
  if (proposals.size() > static_cast<std::size_t>(cfg.k_candidates)) {
    proposals.resize(static_cast<std::size_t>(cfg.k_candidates));
  }
  std::unordered_set<std::string> seen;
  for (const std::string& raw : proposals) {
    std::string word = ToLowerAscii(raw);
    if (word.empty() || word == token.normalized || !seen.insert(word).second) continue;
    PerturbationCandidate c;
    c.position = position;
    c.replacement = word;
    c.text = ReplaceToken(current, position, word, ctx.lexicon.Lookup(word),
                          ctx.store.Find(word));
    c.flags = CheckConstraints(original, c.text, position, ctx, cfg);
    if (c.flags.all()) out.push_back(std::move(c));
  }
  return out;
}

AttackResult GreedySearch(const Classifier& model, const LabeledExample& example,
                          const AttackConfig& cfg, const AttackContext& ctx,
                          QueryMeter& meter) {
  AttackResult result;
  result.original = example;
  result.perturbed = example.text;
  const TokenizedText& x = example.text;
  const int y = example.label;
  RequireNonEmpty(x);

  TokenizedText current = x;
  double current_goal = 0.0;
  auto finish = [&](AttackStatus status) {
    result.status = status;
    result.perturbed = current;
    result.final_goal = current_goal;
    result.queries_used = meter.forward_count();
    result.words_modified = CountModifiedWords(x, current);
    return result;
  };

  try {
    const ForwardTrace initial = Forward(model, x, &meter);
    current_goal = GoalScore(initial.probs, y);
    if (Argmax(initial.probs) != y) return finish(AttackStatus::kSuccess);

    result.ranking = cfg.ranking == RankingMethod::kGradient
                         ? RankWordsGradient(model, x, y, meter)
                         : RankWordsDeletion(model, x, y, meter);

    const std::size_t cap = ModificationCap(WordCount(x), cfg.max_mod_rate);
    std::size_t mods = 0;
    for (const std::size_t i : result.ranking) {
      if (mods >= cap) break;
      std::vector<PerturbationCandidate> cands =
          ProposeReplacements(x, current, i, ctx, cfg);
      if (cands.empty()) continue;

      for (PerturbationCandidate& c : cands) {
        const ForwardTrace tr = Forward(model, c.text, &meter);
        c.goal = GoalScore(tr.probs, y);
        c.predicted = Argmax(tr.probs);
      }
      const auto best = std::min_element(
          cands.begin(), cands.end(),
          [](const PerturbationCandidate& a, const PerturbationCandidate& b) {
            if (a.goal != b.goal) return a.goal > b.goal;
            return a.replacement < b.replacement;
          });

      SearchStep step;
      step.position = i;
      step.parent = current;
      step.num_candidates = cands.size();
      step.chosen = best->replacement;
      step.chosen_goal = best->goal;
      step.accepted = !cfg.require_improvement || best->goal > current_goal;
      if (!step.accepted) {
        result.steps.push_back(std::move(step));
        continue;
      }
      result.steps.push_back(std::move(step));
      current = std::move(best->text);
      current_goal = best->goal;
      mods = CountModifiedWords(x, current);
      if (best->predicted != y) return finish(AttackStatus::kSuccess);
    }
    return finish(AttackStatus::kFailed);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kBudgetExceeded) throw;
    return finish(AttackStatus::kExhausted);
  }
}

ValidationReport ValidateSuccess(const Classifier& model,
                                 const AttackResult& result,
                                 const AttackConfig& cfg,
                                 const AttackContext& ctx) {
  ValidationReport report;
  auto fail = [&](std::string why) {
    report.ok = false;
    report.failure = std::move(why);
    return report;
  };
  if (result.status != AttackStatus::kSuccess) return fail("status is not Success");
  if (result.queries_used > cfg.query_budget) return fail("queries exceed budget");
  const TokenizedText& x = result.original.text;
  const TokenizedText& adv = result.perturbed;
  if (x.size() != adv.size()) return fail("perturbed text changed length");

  const ForwardTrace tr = Forward(model, adv);
  if (Argmax(tr.probs) == result.original.label) return fail("perturbed text is not misclassified");

  const std::size_t mods = CountModifiedWords(x, adv);
  if (mods != result.words_modified) return fail("words_modified is inconsistent");
  if (mods > ModificationCap(WordCount(x), cfg.max_mod_rate)) return fail("modification cap exceeded");
  if (mods == 0) return report;

  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i].normalized == adv[i].normalized) continue;
    if (!ConstraintPos(x[i], adv[i].normalized, ctx.lexicon)) {
      return fail("part-of-speech constraint violated at position " + std::to_string(i));
    }
    if (!ConstraintWordCos(x[i].normalized, adv[i].normalized, ctx.store, cfg.min_word_cos)) {
      return fail("word similarity constraint violated at position " + std::to_string(i));
    }
  }
  if (!ConstraintSentenceSim(x, adv, ctx.encoder, cfg.min_sentence_sim)) {
    return fail("sentence similarity constraint violated");
  }
  return report;
}

AttackResult Attack(const Classifier& model, const LabeledExample& example,
                    const AttackConfig& cfg, const AttackContext& ctx) {
  cfg.Validate();
  QueryMeter meter(cfg.query_budget);
  AttackResult result = GreedySearch(model, example, cfg, ctx, meter);
  if (result.status == AttackStatus::kSuccess) {
    const ValidationReport v = ValidateSuccess(model, result, cfg, ctx);
    if (!v.ok) throw std::logic_error("attack produced an invalid success: " + v.failure);
  }
  return result;
}

std::vector<AttackResult> AttackAll(const Classifier& model,
                                    std::span<const LabeledExample> examples,
                                    const AttackConfig& cfg,
                                    const AttackContext& ctx, int workers) {
  std::vector<AttackResult> results(examples.size());
  workers = std::max(1, std::min<int>(workers, static_cast<int>(examples.size())));
  if (workers <= 1) {
    for (std::size_t i = 0; i < examples.size(); ++i) {
      results[i] = Attack(model, examples[i], cfg, ctx);
    }
    return results;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> threads;
  for (int w = 0; w < workers; ++w) {
    threads.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < examples.size(); i += workers) {
          results[i] = Attack(model, examples[i], cfg, ctx);
        }
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

}  // namespace advtrain
