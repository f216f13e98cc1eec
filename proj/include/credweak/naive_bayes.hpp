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

// Two-class naive Bayes.
//
// Multinomial variant (sparse inputs): feature weights act as fractional
// counts, and per-class token probabilities are Laplace smoothed,
//   theta[c][t] = (N[c][t] + alpha) / (N[c] + alpha * |V|).
// Gaussian variant (dense inputs): per-class, per-dimension mean and
// population variance, floored at epsilon.
//
// Prediction compares ln P(c) + ln P(d | c) across the two classes; P(d) is
// common to both and dropped. The score is the Trusted-minus-Distrusted
// difference of those log joint probabilities.

#pragma once

#include <array>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "credweak/classifier.hpp"
#include "credweak/common.hpp"
#include "credweak/feature_vector.hpp"

namespace credweak {

enum class NbVariant { kMultinomial, kGaussian };

inline std::string_view nb_variant_name(NbVariant v) {
  return v == NbVariant::kMultinomial ? "multinomial" : "gaussian";
}

inline NbVariant parse_nb_variant(std::string_view name) {
  if (name == "multinomial") return NbVariant::kMultinomial;
  if (name == "gaussian") return NbVariant::kGaussian;
  throw ValidationError("unknown naive Bayes variant '" + std::string(name) + "'");
}

struct NbOptions {
  NbVariant variant = NbVariant::kMultinomial;
  double alpha = 1.0;     // Laplace smoothing, multinomial only
  double epsilon = 1e-9;  // variance floor, gaussian only
  Verdict tie_verdict = Verdict::kDistrusted;
};

// Class slot 0 is Trusted, slot 1 is Distrusted.
struct NaiveBayesModel {
  NbOptions options;
  std::size_t dim = 0;
  std::array<double, 2> priors{};
  // Multinomial: smoothed ln theta, 2 x dim.
  std::array<std::vector<double>, 2> log_likelihood;
  // Gaussian: 2 x dim moments.
  std::array<std::vector<double>, 2> mean;
  std::array<std::vector<double>, 2> variance;

  bool operator==(const NaiveBayesModel& o) const {
    return options.variant == o.options.variant && options.alpha == o.options.alpha &&
           options.epsilon == o.options.epsilon && dim == o.dim && priors == o.priors &&
           log_likelihood == o.log_likelihood && mean == o.mean && variance == o.variance;
  }
};

inline std::size_t nb_slot(int y) { return y == 1 ? 0 : 1; }

inline NaiveBayesModel nb_train(std::span<const FeatureVector> xs, std::span<const int> ys, const NbOptions& options) {
  validate_training_set(xs, ys);
  const VectorKind expected = options.variant == NbVariant::kMultinomial ? VectorKind::kSparse : VectorKind::kDense;
  if (xs[0].kind != expected) {
    throw ValidationError(std::string(nb_variant_name(options.variant)) + " naive Bayes needs " +
                          (expected == VectorKind::kSparse ? "sparse" : "dense") + " vectors");
  }
  if (options.variant == NbVariant::kMultinomial && !(options.alpha > 0)) throw ValidationError("alpha must be > 0");
  if (options.variant == NbVariant::kGaussian && !(options.epsilon > 0)) throw ValidationError("epsilon must be > 0");

  NaiveBayesModel m;
  m.options = options;
  m.dim = xs[0].dim;
  std::array<std::size_t, 2> count{};
  for (int y : ys) ++count[nb_slot(y)];
  for (std::size_t c = 0; c < 2; ++c) {
    m.priors[c] = static_cast<double>(count[c]) / static_cast<double>(ys.size());
  }

  if (options.variant == NbVariant::kMultinomial) {
    std::array<std::vector<double>, 2> sums{std::vector<double>(m.dim, 0.0), std::vector<double>(m.dim, 0.0)};
    for (std::size_t i = 0; i < xs.size(); ++i) {
      auto& s = sums[nb_slot(ys[i])];
      for (std::size_t k = 0; k < xs[i].indices.size(); ++k) {
        if (xs[i].values[k] < 0) throw ValidationError("multinomial naive Bayes needs non-negative weights");
        s[xs[i].indices[k]] += xs[i].values[k];
      }
    }
    for (std::size_t c = 0; c < 2; ++c) {
      double total = 0.0;
      for (double v : sums[c]) total += v;
      const double denom = total + options.alpha * static_cast<double>(m.dim);
      m.log_likelihood[c].resize(m.dim);
      for (std::size_t t = 0; t < m.dim; ++t) m.log_likelihood[c][t] = std::log((sums[c][t] + options.alpha) / denom);
    }
  } else {
    for (std::size_t c = 0; c < 2; ++c) {
      m.mean[c].assign(m.dim, 0.0);
      m.variance[c].assign(m.dim, 0.0);
    }
    for (std::size_t i = 0; i < xs.size(); ++i) {
      auto& mu = m.mean[nb_slot(ys[i])];
      for (std::size_t d = 0; d < m.dim; ++d) mu[d] += xs[i].values[d];
    }
    for (std::size_t c = 0; c < 2; ++c) {
      for (double& v : m.mean[c]) v /= static_cast<double>(count[c]);
    }
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const std::size_t c = nb_slot(ys[i]);
      for (std::size_t d = 0; d < m.dim; ++d) {
        const double e = xs[i].values[d] - m.mean[c][d];
        m.variance[c][d] += e * e;
      }
    }
    for (std::size_t c = 0; c < 2; ++c) {
      for (double& v : m.variance[c]) v = std::max(v / static_cast<double>(count[c]), options.epsilon);
    }
  }
  return m;
}

// ln P(c) + ln P(d | c) for both classes.
inline std::array<double, 2> nb_log_joint(const NaiveBayesModel& m, const FeatureVector& x) {
  if (x.dim != m.dim) {
    throw ValidationError("dimension mismatch: model " + std::to_string(m.dim) + ", input " + std::to_string(x.dim));
  }
  std::array<double, 2> out{};
  if (m.options.variant == NbVariant::kMultinomial) {
    if (x.kind != VectorKind::kSparse) throw ValidationError("multinomial naive Bayes needs a sparse vector");
    for (std::size_t c = 0; c < 2; ++c) {
      double s = std::log(m.priors[c]);
      for (std::size_t k = 0; k < x.indices.size(); ++k) s += x.values[k] * m.log_likelihood[c][x.indices[k]];
      out[c] = s;
    }
  } else {
    if (x.kind != VectorKind::kDense) throw ValidationError("gaussian naive Bayes needs a dense vector");
    constexpr double kLog2Pi = 1.8378770664093454835606594728112;
    for (std::size_t c = 0; c < 2; ++c) {
      double s = std::log(m.priors[c]);
      for (std::size_t d = 0; d < m.dim; ++d) {
        const double var = m.variance[c][d];
        const double e = x.values[d] - m.mean[c][d];
        s -= 0.5 * (kLog2Pi + std::log(var) + e * e / var);
      }
      out[c] = s;
    }
  }
  return out;
}

inline Prediction nb_predict(const NaiveBayesModel& m, const FeatureVector& x) {
  const auto lj = nb_log_joint(m, x);
  Prediction p;
  p.review_id = x.review_id;
  p.score = lj[0] - lj[1];
  p.verdict = verdict_from_score(p.score, m.options.tie_verdict);
  return p;
}

// Normalized posteriors {P(Trusted | d), P(Distrusted | d)}, via log-sum-exp.
inline std::array<double, 2> nb_posterior(const NaiveBayesModel& m, const FeatureVector& x) {
  const auto lj = nb_log_joint(m, x);
  const double hi = std::max(lj[0], lj[1]);
  const double a = std::exp(lj[0] - hi), b = std::exp(lj[1] - hi);
  return {a / (a + b), b / (a + b)};
}

inline nlohmann::ordered_json to_json(const NaiveBayesModel& m) {
  nlohmann::ordered_json j;
  j["format_version"] = 1;
  j["kind"] = "naive_bayes";
  j["hyperparameters"] = {{"variant", nb_variant_name(m.options.variant)},
                          {"alpha", m.options.alpha},
                          {"epsilon", m.options.epsilon},
                          {"tie_verdict", verdict_name(m.options.tie_verdict)}};
  nlohmann::ordered_json p;
  p["dim"] = m.dim;
  p["priors"] = encode_doubles(m.priors);
  if (m.options.variant == NbVariant::kMultinomial) {
    p["log_likelihood"] = {encode_doubles(m.log_likelihood[0]), encode_doubles(m.log_likelihood[1])};
  } else {
    p["mean"] = {encode_doubles(m.mean[0]), encode_doubles(m.mean[1])};
    p["variance"] = {encode_doubles(m.variance[0]), encode_doubles(m.variance[1])};
  }
  j["parameters"] = std::move(p);
  return j;
}

inline NaiveBayesModel naive_bayes_from_json(const nlohmann::json& j) {
  if (j.at("kind") != "naive_bayes") throw ValidationError("model kind is not naive_bayes");
  if (j.at("format_version") != 1) throw ValidationError("unsupported format_version");
  NaiveBayesModel m;
  const auto& h = j.at("hyperparameters");
  m.options.variant = parse_nb_variant(h.at("variant").get<std::string>());
  m.options.alpha = h.at("alpha").get<double>();
  m.options.epsilon = h.at("epsilon").get<double>();
  m.options.tie_verdict = parse_verdict(h.at("tie_verdict").get<std::string>());
  const auto& p = j.at("parameters");
  m.dim = p.at("dim").get<std::size_t>();
  const auto priors = decode_doubles(p.at("priors").get<std::string>());
  if (priors.size() != 2) throw ValidationError("priors must have two entries");
  m.priors = {priors[0], priors[1]};
  const auto load_pair = [&](const char* key, std::array<std::vector<double>, 2>& dst) {
    for (std::size_t c = 0; c < 2; ++c) {
      dst[c] = decode_doubles(p.at(key).at(c).get<std::string>());
      if (dst[c].size() != m.dim) throw ValidationError(std::string(key) + " has wrong length");
    }
  };
  if (m.options.variant == NbVariant::kMultinomial) {
    load_pair("log_likelihood", m.log_likelihood);
  } else {
    load_pair("mean", m.mean);
    load_pair("variance", m.variance);
  }
  return m;
}

}  // namespace credweak
