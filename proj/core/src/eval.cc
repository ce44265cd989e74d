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

#include "advtrain/eval.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "advtrain/error.h"
#include "advtrain/hash.h"

namespace advtrain {

namespace {

// Solves A x = b in place by Gaussian elimination with partial pivoting.
// A is row-major m x m.
std::vector<double> SolveLinear(std::vector<double> a, std::vector<double> b) {
  const std::size_t m = b.size();
  for (std::size_t col = 0; col < m; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < m; ++r) {
      if (std::abs(a[r * m + col]) > std::abs(a[pivot * m + col])) pivot = r;
    }
    if (a[pivot * m + col] == 0.0) {
      throw Error(ErrorCode::kDegenerateDesign, "singular surrogate system");
    }
    if (pivot != col) {
      for (std::size_t c = 0; c < m; ++c) std::swap(a[col * m + c], a[pivot * m + c]);
      std::swap(b[col], b[pivot]);
    }
    for (std::size_t r = col + 1; r < m; ++r) {
      const double f = a[r * m + col] / a[col * m + col];
      if (f == 0.0) continue;
      for (std::size_t c = col; c < m; ++c) a[r * m + c] -= f * a[col * m + c];
      b[r] -= f * b[col];
    }
  }
  std::vector<double> x(m);
  for (std::size_t i = m; i-- > 0;) {
    double s = b[i];
    for (std::size_t c = i + 1; c < m; ++c) s -= a[i * m + c] * x[c];
    x[i] = s / a[i * m + i];
  }
  return x;
}

}  // namespace

AttackSummary AttackSuccessRate(std::span<const AttackResult> results) {
  if (results.empty()) throw Error(ErrorCode::kEmptyResults, "no attack results");
  AttackSummary s;
  s.total_attacked = results.size();
  for (const AttackResult& r : results) {
    if (r.status == AttackStatus::kSuccess) ++s.successes;
  }
  s.success_rate = static_cast<double>(s.successes) / static_cast<double>(s.total_attacked);
  return s;
}

double RobustAccuracy(const Classifier& model,
                      std::span<const LabeledExample> adversarial_set) {
  if (adversarial_set.empty()) throw Error(ErrorCode::kEmptySet, "empty adversarial set");
  std::size_t correct = 0;
  for (const LabeledExample& ex : adversarial_set) {
    if (Argmax(Forward(model, ex.text).probs) == ex.label) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(adversarial_set.size());
}

double Accuracy(const Classifier& model, const Dataset& data) {
  if (data.empty()) throw Error(ErrorCode::kEmptyDataset, "empty dataset");
  return RobustAccuracy(model, data.examples);
}

ExplanationWeights FitLimeSurrogate(std::size_t num_tokens,
                                    const MaskScoreFn& score,
                                    const LimeConfig& cfg, std::uint64_t seed) {
  if (num_tokens == 0) throw Error(ErrorCode::kInvalidArgument, "no tokens to explain");
  if (cfg.n_samples < 1 || !(cfg.kernel_width > 0.0) || !(cfg.ridge >= 0.0) ||
      cfg.max_attempts < 1) {
    throw Error(ErrorCode::kInvalidArgument, "invalid LIME settings");
  }
  const std::size_t n = num_tokens;
  const std::size_t m = n + 1;  // intercept first
  const std::size_t samples = static_cast<std::size_t>(cfg.n_samples);

  for (int attempt = 0; attempt < cfg.max_attempts; ++attempt) {
    std::mt19937_64 rng(attempt == 0 ? seed : MixSeed(seed, static_cast<std::uint64_t>(attempt), 0));
    std::bernoulli_distribution keep_dist(0.5);
    std::vector<std::vector<bool>> masks(samples, std::vector<bool>(n));
    for (auto& mask : masks) {
      for (std::size_t j = 0; j < n; ++j) mask[j] = keep_dist(rng);
    }
    const bool degenerate = std::all_of(masks.begin(), masks.end(),
                                        [&](const auto& mk) { return mk == masks[0]; });
    if (degenerate) continue;

    std::vector<double> xtwx(m * m, 0.0), xtwy(m, 0.0), row(m);
    for (const auto& mask : masks) {
      const double kept = static_cast<double>(std::count(mask.begin(), mask.end(), true));
      const double s = kept / static_cast<double>(n);
      const double w = std::exp(-(1.0 - s) * (1.0 - s) / (cfg.kernel_width * cfg.kernel_width));
      const double y = score(mask);
      row[0] = 1.0;
      for (std::size_t j = 0; j < n; ++j) row[j + 1] = mask[j] ? 1.0 : 0.0;
      for (std::size_t a = 0; a < m; ++a) {
        if (row[a] == 0.0) continue;
        xtwy[a] += w * row[a] * y;
        for (std::size_t b = 0; b < m; ++b) xtwx[a * m + b] += w * row[a] * row[b];
      }
    }
    for (std::size_t j = 1; j < m; ++j) xtwx[j * m + j] += cfg.ridge;

    const std::vector<double> beta = SolveLinear(std::move(xtwx), std::move(xtwy));
    ExplanationWeights out;
    out.intercept = beta[0];
    out.weights.assign(beta.begin() + 1, beta.end());
    out.n_samples = cfg.n_samples;
    out.kernel_width = cfg.kernel_width;
    return out;
  }
  throw Error(ErrorCode::kDegenerateDesign, "every sampled mask was identical");
}

ExplanationWeights LimeExplain(const Classifier& model,
                               const TokenizedText& text, int label,
                               const LimeConfig& cfg, std::uint64_t seed) {
  if (text.size() < 2) throw Error(ErrorCode::kInvalidArgument, "LIME needs at least 2 tokens");
  if (label < 0 || static_cast<std::size_t>(label) >= model.num_classes()) {
    throw Error(ErrorCode::kLabelOutOfRange, "label out of range");
  }
  const MaskScoreFn score = [&](const std::vector<bool>& keep) {
    return Forward(model, KeepTokens(text, keep)).probs[label];
  };
  return FitLimeSurrogate(text.size(), score, cfg, seed);
}

std::vector<std::size_t> RankByExplanation(const ExplanationWeights& w) {
  std::vector<std::size_t> order(w.weights.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return w.weights[a] > w.weights[b];
  });
  return order;
}

AopcReport Aopc(const ConfidenceFn& confidence,
                std::span<const LabeledExample> examples,
                std::span<const std::vector<std::size_t>> rankings, int k) {
  if (k < 1) throw Error(ErrorCode::kInvalidArgument, "K must be >= 1");
  if (examples.size() != rankings.size()) {
    throw Error(ErrorCode::kInvalidArgument, "one ranking per example required");
  }
  AopcReport report;
  report.k = k;
  for (std::size_t i = 0; i < examples.size(); ++i) {
    const TokenizedText& text = examples[i].text;
    const auto& ranking = rankings[i];
    const std::size_t n = text.size();
    if (ranking.size() != n) {
      throw Error(ErrorCode::kInvalidArgument, "ranking does not cover every token");
    }
    const std::size_t ki = n == 0 ? 0 : std::min<std::size_t>(static_cast<std::size_t>(k), n - 1);
    const double f0 = confidence(text, examples[i].label);
    std::vector<bool> keep(n, true);
    std::vector<double> deltas;
    double sum = 0.0;
    for (std::size_t step = 0; step < ki; ++step) {
      const std::size_t pos = ranking[step];
      if (pos >= n || !keep[pos]) {
        throw Error(ErrorCode::kInvalidArgument, "ranking is not a permutation of positions");
      }
      keep[pos] = false;
      const double d = f0 - confidence(KeepTokens(text, keep), examples[i].label);
      deltas.push_back(d);
      sum += d;
    }
    report.deltas.push_back(std::move(deltas));
    report.per_example.push_back(sum / static_cast<double>(k + 1));
  }
  if (!report.per_example.empty()) {
    double total = 0.0;
    for (double v : report.per_example) total += v;
    report.mean = total / static_cast<double>(report.per_example.size());
  }
  return report;
}

AopcReport Aopc(const Classifier& model,
                std::span<const LabeledExample> examples,
                std::span<const std::vector<std::size_t>> rankings, int k) {
  const ConfidenceFn confidence = [&](const TokenizedText& text, int label) {
    return Forward(model, text).probs[label];
  };
  return Aopc(confidence, examples, rankings, k);
}

double RepresentationDistance(const Classifier& model,
                              std::span<const TextPair> pairs,
                              RepresentationLayer layer) {
  if (pairs.empty()) throw Error(ErrorCode::kEmptySet, "no text pairs");
  double total = 0.0;
  for (const auto& [x, x_adv] : pairs) {
    const Vector a = SentenceEmbedding(Forward(model, x), layer);
    const Vector b = SentenceEmbedding(Forward(model, x_adv), layer);
    total += Distance2(a, b);
  }
  return total / static_cast<double>(pairs.size());
}

}  // namespace advtrain
