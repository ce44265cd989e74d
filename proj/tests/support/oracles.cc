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

#include "support/oracles.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace advtrain::testing {

Rows EmbeddingsOf(const EmbeddingStore& store, const TokenizedText& text) {
  Rows rows;
  for (const Token& t : text.tokens) {
    std::vector<double> row(store.dim(), 0.0);
    if (auto id = store.Find(t.normalized)) {
      const auto src = store.Row(*id);
      row.assign(src.begin(), src.end());
    }
    rows.push_back(row);
  }
  if (rows.empty()) rows.emplace_back(store.dim(), 0.0);
  return rows;
}

std::vector<double> OraclePooled(const ModelParams& p, const Rows& embs) {
  const std::size_t h = p.w1.rows, d = p.w1.cols;
  std::vector<double> pooled(h, 0.0);
  for (const auto& e : embs) {
    for (std::size_t j = 0; j < h; ++j) {
      double z = p.b1[j];
      for (std::size_t k = 0; k < d; ++k) z += p.w1.data[j * d + k] * e[k];
      pooled[j] += std::tanh(z);
    }
  }
  for (double& v : pooled) v /= static_cast<double>(embs.size());
  return pooled;
}

std::vector<double> OracleProbs(const ModelParams& p, const Rows& embs) {
  const std::vector<double> pooled = OraclePooled(p, embs);
  const std::size_t c = p.w2.rows, h = p.w2.cols;
  std::vector<double> logits(c);
  for (std::size_t i = 0; i < c; ++i) {
    logits[i] = p.b2[i];
    for (std::size_t j = 0; j < h; ++j) logits[i] += p.w2.data[i * h + j] * pooled[j];
  }
  const double top = *std::max_element(logits.begin(), logits.end());
  double z = 0.0;
  for (double& l : logits) z += (l = std::exp(l - top));
  for (double& l : logits) l /= z;
  return logits;
}

double OracleLoss(const ModelParams& p, const Rows& embs, int label) {
  return -std::log(std::max(OracleProbs(p, embs)[label], 1e-12));
}

Rows FiniteDifferenceInputGradient(const ModelParams& p, const Rows& embs,
                                   int label, double eps) {
  Rows grad = embs;
  Rows work = embs;
  for (std::size_t i = 0; i < embs.size(); ++i) {
    for (std::size_t k = 0; k < embs[i].size(); ++k) {
      work[i][k] = embs[i][k] + eps;
      const double up = OracleLoss(p, work, label);
      work[i][k] = embs[i][k] - eps;
      const double down = OracleLoss(p, work, label);
      work[i][k] = embs[i][k];
      grad[i][k] = (up - down) / (2.0 * eps);
    }
  }
  return grad;
}

ModelParams FiniteDifferenceParamGradient(const ModelParams& p,
                                          const Rows& embs, int label,
                                          double eps) {
  ModelParams grad = p;
  ModelParams work = p;
  auto sweep = [&](std::vector<double>& values, std::vector<double>& out) {
    for (std::size_t i = 0; i < values.size(); ++i) {
      const double keep = values[i];
      values[i] = keep + eps;
      const double up = OracleLoss(work, embs, label);
      values[i] = keep - eps;
      const double down = OracleLoss(work, embs, label);
      values[i] = keep;
      out[i] = (up - down) / (2.0 * eps);
    }
  };
  sweep(work.w1.data, grad.w1.data);
  sweep(work.b1, grad.b1);
  sweep(work.w2.data, grad.w2.data);
  sweep(work.b2, grad.b2);
  return grad;
}

double RelativeError(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("size mismatch");
  double diff = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    diff += (a[i] - b[i]) * (a[i] - b[i]);
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  const double scale = std::sqrt(std::max(na, nb));
  return scale == 0.0 ? 0.0 : std::sqrt(diff) / scale;
}

std::vector<double> Flatten(const Rows& rows) {
  std::vector<double> out;
  for (const auto& r : rows) out.insert(out.end(), r.begin(), r.end());
  return out;
}

std::vector<double> Flatten(const ModelParams& p) {
  std::vector<double> out = p.w1.data;
  out.insert(out.end(), p.b1.begin(), p.b1.end());
  out.insert(out.end(), p.w2.data.begin(), p.w2.data.end());
  out.insert(out.end(), p.b2.begin(), p.b2.end());
  return out;
}

std::vector<std::vector<Neighbor>> BruteForceNeighbors(const EmbeddingStore& store,
                                                       int k, double min_cos) {
  const std::size_t v = store.size();
  std::vector<std::vector<Neighbor>> out(v);
  for (std::size_t i = 0; i < v; ++i) {
    const auto a = store.Row(static_cast<int>(i));
    for (std::size_t j = 0; j < v; ++j) {
      if (i == j) continue;
      const auto b = store.Row(static_cast<int>(j));
      double dot = 0.0, na = 0.0, nb = 0.0;
      for (std::size_t d = 0; d < a.size(); ++d) {
        dot += a[d] * b[d];
        na += a[d] * a[d];
        nb += b[d] * b[d];
      }
      const double cos = std::clamp(dot / std::sqrt(na * nb), -1.0, 1.0);
      if (cos >= min_cos) out[i].push_back({static_cast<int>(j), cos});
    }
    std::sort(out[i].begin(), out[i].end(), [&](const Neighbor& x, const Neighbor& y) {
      if (x.similarity != y.similarity) return x.similarity > y.similarity;
      return store.word(x.id) < store.word(y.id);
    });
    if (out[i].size() > static_cast<std::size_t>(k)) out[i].resize(k);
  }
  return out;
}

std::vector<double> WeightedRidge(const Rows& design,
                                  const std::vector<double>& target,
                                  const std::vector<double>& weights,
                                  double ridge) {
  const std::size_t m = design.front().size();
  Rows a(m, std::vector<double>(m, 0.0));
  std::vector<double> b(m, 0.0);
  for (std::size_t s = 0; s < design.size(); ++s) {
    for (std::size_t i = 0; i < m; ++i) {
      b[i] += weights[s] * design[s][i] * target[s];
      for (std::size_t j = 0; j < m; ++j) a[i][j] += weights[s] * design[s][i] * design[s][j];
    }
  }
  for (std::size_t i = 1; i < m; ++i) a[i][i] += ridge;
  // Cholesky: a = L L^T.
  Rows l(m, std::vector<double>(m, 0.0));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double s = a[i][j];
      for (std::size_t k = 0; k < j; ++k) s -= l[i][k] * l[j][k];
      if (i == j) {
        if (s <= 0.0) throw std::runtime_error("matrix is not positive definite");
        l[i][i] = std::sqrt(s);
      } else {
        l[i][j] = s / l[j][j];
      }
    }
  }
  std::vector<double> y(m), x(m);
  for (std::size_t i = 0; i < m; ++i) {
    double s = b[i];
    for (std::size_t k = 0; k < i; ++k) s -= l[i][k] * y[k];
    y[i] = s / l[i][i];
  }
  for (std::size_t i = m; i-- > 0;) {
    double s = y[i];
    for (std::size_t k = i + 1; k < m; ++k) s -= l[k][i] * x[k];
    x[i] = s / l[i][i];
  }
  return x;
}

}  // namespace advtrain::testing
