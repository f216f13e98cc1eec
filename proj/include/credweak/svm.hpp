// Copyright 2026 The credweak Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Soft-margin SVM with a Gaussian kernel, trained by sequential minimal
// optimization on the dual
//
//   maximize   W(a) = sum_i a_i - 1/2 sum_ij a_i a_j y_i y_j K(x_i, x_j)
//   subject to 0 <= a_i <= C,  sum_i a_i y_i = 0,
//
// with K(x, z) = exp(-gamma * |x - z|^2). Each iteration picks the maximal
// violating pair (ties broken by a seeded draw), solves the two-variable
// subproblem analytically, and stops once the largest KKT violation is below
// tol. The decision value is f(x) = sum_i a_i y_i K(x_i, x) + b.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <list>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "credweak/classifier.hpp"
#include "credweak/common.hpp"
#include "credweak/feature_vector.hpp"

namespace credweak {

inline double gaussian_kernel(const FeatureVector& x, const FeatureVector& z, double gamma) {
  return std::exp(-gamma * squared_distance(x, z));
}

struct SvmOptions {
  double C = 1.0;
  std::optional<double> gamma;  // unset: 1 / dim
  double tol = 1e-3;
  std::size_t max_iterations = 0;  // 0: 10 * n passes of n pair updates
  std::uint64_t seed = 1;
  std::size_t cache_bytes = std::size_t{256} << 20;
  Verdict tie_verdict = Verdict::kDistrusted;
  bool record_objective = true;
};

struct SvmTrace {
  std::vector<double> dual_objective;  // after each iteration, when recorded
  std::vector<double> alphas;          // all n multipliers, in input order
  std::size_t iterations = 0;
  bool converged = false;
  double max_violation = 0.0;  // m(a) - M(a) at exit
};

struct SvmModel {
  std::vector<FeatureVector> support_vectors;
  std::vector<double> alphas;
  std::vector<int> labels;
  double bias = 0.0;
  double gamma = 1.0;
  double C = 1.0;
  double tol = 1e-3;
  Verdict tie_verdict = Verdict::kDistrusted;

  double decision(const FeatureVector& x) const {
    double s = 0.0;
    for (std::size_t i = 0; i < support_vectors.size(); ++i) {
      s += alphas[i] * labels[i] * gaussian_kernel(support_vectors[i], x, gamma);
    }
    return s + bias;
  }

  bool operator==(const SvmModel&) const = default;
};

namespace detail {

// LRU cache of kernel rows K(x_i, .) over the training set.
class KernelRows {
 public:
  KernelRows(std::span<const FeatureVector> xs, double gamma, std::size_t cache_bytes)
      : xs_(xs), gamma_(gamma), rows_(xs.size()), where_(xs.size()) {
    const std::size_t row_bytes = std::max<std::size_t>(xs.size() * sizeof(double), 1);
    capacity_ = std::max<std::size_t>(2, cache_bytes / row_bytes);
  }

  const std::vector<double>& row(std::size_t i) {
    if (!rows_[i].empty()) {
      lru_.splice(lru_.begin(), lru_, where_[i]);
      return rows_[i];
    }
    if (lru_.size() >= capacity_) {
      const std::size_t victim = lru_.back();
      lru_.pop_back();
      std::vector<double>().swap(rows_[victim]);
    }
    std::vector<double>& r = rows_[i];
    r.resize(xs_.size());
    for (std::size_t j = 0; j < xs_.size(); ++j) {
      r[j] = gaussian_kernel(xs_[i], xs_[j], gamma_);
      if (!std::isfinite(r[j])) throw ValidationError("non-finite kernel value");
    }
    lru_.push_front(i);
    where_[i] = lru_.begin();
    return r;
  }

 private:
  std::span<const FeatureVector> xs_;
  double gamma_;
  std::size_t capacity_;
  std::vector<std::vector<double>> rows_;
  std::list<std::size_t> lru_;
  std::vector<std::list<std::size_t>::iterator> where_;
};

}  // namespace detail

inline SvmModel svm_train(std::span<const FeatureVector> xs, std::span<const int> ys, const SvmOptions& options,
                          SvmTrace* trace = nullptr) {
  validate_training_set(xs, ys);
  const double C = options.C;
  if (!(C > 0)) throw ValidationError("C must be > 0");
  const double gamma = options.gamma.value_or(1.0 / static_cast<double>(std::max<std::size_t>(xs[0].dim, 1)));
  if (!(gamma > 0) || !std::isfinite(gamma)) throw ValidationError("gamma must be > 0");
  if (!(options.tol > 0)) throw ValidationError("tol must be > 0");

  const std::size_t n = xs.size();
  const std::size_t max_iterations = options.max_iterations > 0 ? options.max_iterations : 10 * n * n;
  detail::KernelRows kernel(xs, gamma, options.cache_bytes);
  Rng rng(derive_seed(options.seed, "svm"));

  std::vector<double> alpha(n, 0.0);
  std::vector<double> grad(n, -1.0);  // gradient of 1/2 a'Qa - e'a
  const auto in_up = [&](std::size_t t) { return ys[t] == 1 ? alpha[t] < C : alpha[t] > 0; };
  const auto in_low = [&](std::size_t t) { return ys[t] == 1 ? alpha[t] > 0 : alpha[t] < C; };
  const auto dual_objective = [&] {
    double s = 0.0;
    for (std::size_t t = 0; t < n; ++t) s += alpha[t] * (grad[t] - 1.0);
    return -0.5 * s;
  };

  SvmTrace local;
  SvmTrace& tr = trace ? *trace : local;
  tr = SvmTrace{};
  double m_up = 0.0, m_low = 0.0;

  // Index of the extremal score among candidates, ties drawn uniformly.
  const auto select = [&](auto&& eligible, bool maximize, double& best) {
    std::size_t chosen = n;
    std::size_t ties = 0;
    best = maximize ? -std::numeric_limits<double>::infinity() : std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < n; ++t) {
      if (!eligible(t)) continue;
      const double v = -ys[t] * grad[t];
      if (maximize ? v > best : v < best) {
        best = v;
        chosen = t;
        ties = 1;
      } else if (v == best && rng.below(++ties) == 0) {
        chosen = t;
      }
    }
    return chosen;
  };

  for (;;) {
    const std::size_t i = select(in_up, true, m_up);
    const std::size_t j = select(in_low, false, m_low);
    tr.max_violation = m_up - m_low;
    if (i == n || j == n || m_up - m_low < options.tol) {
      tr.converged = true;
      break;
    }
    if (tr.iterations >= max_iterations) break;
    ++tr.iterations;

    const std::vector<double>& ki = kernel.row(i);
    const std::vector<double>& kj = kernel.row(j);
    const double yi = ys[i], yj = ys[j];
    const double qij = yi * yj * ki[j];
    const double old_i = alpha[i], old_j = alpha[j];
    constexpr double kTau = 1e-12;
    if (ys[i] != ys[j]) {
      double quad = ki[i] + kj[j] + 2.0 * qij;
      if (quad <= 0) quad = kTau;
      const double delta = (-grad[i] - grad[j]) / quad;
      const double diff = alpha[i] - alpha[j];
      alpha[i] += delta;
      alpha[j] += delta;
      if (diff > 0) {
        if (alpha[j] < 0) {
          alpha[j] = 0;
          alpha[i] = diff;
        }
      } else if (alpha[i] < 0) {
        alpha[i] = 0;
        alpha[j] = -diff;
      }
      if (diff > 0) {
        if (alpha[i] > C) {
          alpha[i] = C;
          alpha[j] = C - diff;
        }
      } else if (alpha[j] > C) {
        alpha[j] = C;
        alpha[i] = C + diff;
      }
    } else {
      double quad = ki[i] + kj[j] - 2.0 * qij;
      if (quad <= 0) quad = kTau;
      const double delta = (grad[i] - grad[j]) / quad;
      const double sum = alpha[i] + alpha[j];
      alpha[i] -= delta;
      alpha[j] += delta;
      if (sum > C) {
        if (alpha[i] > C) {
          alpha[i] = C;
          alpha[j] = sum - C;
        }
      } else if (alpha[j] < 0) {
        alpha[j] = 0;
        alpha[i] = sum;
      }
      if (sum > C) {
        if (alpha[j] > C) {
          alpha[j] = C;
          alpha[i] = sum - C;
        }
      } else if (alpha[i] < 0) {
        alpha[i] = 0;
        alpha[j] = sum;
      }
    }
    const double di = alpha[i] - old_i, dj = alpha[j] - old_j;
    // Row references stay valid: the cache evicts only on the next row() call.
    for (std::size_t t = 0; t < n; ++t) {
      grad[t] += ys[t] * (yi * ki[t] * di + yj * kj[t] * dj);
    }
    if (options.record_objective) tr.dual_objective.push_back(dual_objective());
  }

  // Bias: mean of -y_t grad_t over free multipliers; otherwise the midpoint of
  // the feasible interval [m_up, m_low].
  double free_sum = 0.0;
  std::size_t free_count = 0;
  for (std::size_t t = 0; t < n; ++t) {
    if (alpha[t] > 0 && alpha[t] < C) {
      free_sum += -ys[t] * grad[t];
      ++free_count;
    }
  }
  SvmModel model;
  model.bias = free_count > 0 ? free_sum / static_cast<double>(free_count) : 0.5 * (m_up + m_low);
  model.gamma = gamma;
  model.C = C;
  model.tol = options.tol;
  model.tie_verdict = options.tie_verdict;
  for (std::size_t t = 0; t < n; ++t) {
    if (alpha[t] > 0) {
      model.support_vectors.push_back(xs[t]);
      model.support_vectors.back().review_id.clear();
      model.alphas.push_back(alpha[t]);
      model.labels.push_back(ys[t]);
    }
  }
  tr.alphas = std::move(alpha);
  return model;
}

inline Prediction svm_predict(const SvmModel& model, const FeatureVector& x) {
  if (!model.support_vectors.empty()) require_compatible(model.support_vectors.front(), x);
  Prediction p;
  p.review_id = x.review_id;
  p.score = model.decision(x);
  p.verdict = verdict_from_score(p.score, model.tie_verdict);
  return p;
}

// Largest KKT violation of a trained model on its training set:
//   a_i = 0      needs y_i f(x_i) >= 1
//   0 < a_i < C  needs y_i f(x_i) == 1
//   a_i = C      needs y_i f(x_i) <= 1
inline double svm_kkt_violation(const SvmModel& model, std::span<const FeatureVector> xs, std::span<const int> ys,
                                std::span<const double> all_alphas) {
  double worst = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double margin = ys[i] * model.decision(xs[i]);
    double v;
    if (all_alphas[i] <= 0) {
      v = std::max(0.0, 1.0 - margin);
    } else if (all_alphas[i] >= model.C) {
      v = std::max(0.0, margin - 1.0);
    } else {
      v = std::abs(margin - 1.0);
    }
    worst = std::max(worst, v);
  }
  return worst;
}

inline nlohmann::ordered_json to_json(const SvmModel& m) {
  nlohmann::ordered_json j;
  j["format_version"] = 1;
  j["kind"] = "svm";
  j["hyperparameters"] = {{"C", m.C}, {"gamma", m.gamma}, {"tol", m.tol}, {"tie_verdict", verdict_name(m.tie_verdict)}};
  nlohmann::ordered_json p;
  p["bias"] = encode_doubles(std::span<const double>(&m.bias, 1));
  p["alphas"] = encode_doubles(m.alphas);
  p["labels"] = m.labels;
  const bool sparse = !m.support_vectors.empty() && m.support_vectors[0].kind == VectorKind::kSparse;
  p["vector_kind"] = sparse ? "sparse" : "dense";
  p["dim"] = m.support_vectors.empty() ? 0 : m.support_vectors[0].dim;
  if (sparse) {
    nlohmann::ordered_json vs = nlohmann::ordered_json::array();
    for (const FeatureVector& v : m.support_vectors) {
      vs.push_back({{"indices", v.indices}, {"values", encode_doubles(v.values)}});
    }
    p["support_vectors"] = std::move(vs);
  } else {
    std::vector<double> flat;
    for (const FeatureVector& v : m.support_vectors) flat.insert(flat.end(), v.values.begin(), v.values.end());
    p["support_vectors"] = encode_doubles(flat);
  }
  j["parameters"] = std::move(p);
  return j;
}

inline SvmModel svm_from_json(const nlohmann::json& j) {
  if (j.at("kind") != "svm") throw ValidationError("model kind is not svm");
  if (j.at("format_version") != 1) throw ValidationError("unsupported format_version");
  SvmModel m;
  const auto& h = j.at("hyperparameters");
  m.C = h.at("C").get<double>();
  m.gamma = h.at("gamma").get<double>();
  m.tol = h.at("tol").get<double>();
  m.tie_verdict = parse_verdict(h.at("tie_verdict").get<std::string>());
  const auto& p = j.at("parameters");
  const auto bias = decode_doubles(p.at("bias").get<std::string>());
  if (bias.size() != 1) throw ValidationError("bias must be a single value");
  m.bias = bias[0];
  m.alphas = decode_doubles(p.at("alphas").get<std::string>());
  m.labels = p.at("labels").get<std::vector<int>>();
  const std::size_t dim = p.at("dim").get<std::size_t>();
  if (m.labels.size() != m.alphas.size()) throw ValidationError("labels and alphas differ in length");
  if (p.at("vector_kind") == "sparse") {
    for (const auto& v : p.at("support_vectors")) {
      FeatureVector fv;
      fv.kind = VectorKind::kSparse;
      fv.dim = dim;
      fv.indices = v.at("indices").get<std::vector<std::uint32_t>>();
      fv.values = decode_doubles(v.at("values").get<std::string>());
      if (fv.indices.size() != fv.values.size()) throw ValidationError("sparse support vector shape mismatch");
      m.support_vectors.push_back(std::move(fv));
    }
  } else {
    const auto flat = decode_doubles(p.at("support_vectors").get<std::string>());
    if (flat.size() != dim * m.alphas.size()) throw ValidationError("dense support vector shape mismatch");
    for (std::size_t i = 0; i < m.alphas.size(); ++i) {
      m.support_vectors.push_back(
          FeatureVector::dense("", std::vector<double>(flat.begin() + i * dim, flat.begin() + (i + 1) * dim)));
    }
  }
  if (m.support_vectors.size() != m.alphas.size()) throw ValidationError("support vector count mismatch");
  return m;
}

}  // namespace credweak
