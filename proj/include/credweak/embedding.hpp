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

// Word embeddings trained with negative sampling, in skip-gram or CBOW form.
//
// Each training example has a hidden vector h (the center word's input
// vector for skip-gram, the mean of the context words' input vectors for
// CBOW), one positive output row and a few sampled negative output rows:
//
//   loss = -ln sigmoid(u_pos . h) - sum_k ln sigmoid(-u_k . h)
//
// Training is plain SGD on that loss with a linearly decaying learning rate,
// visiting documents in a fresh seeded order each epoch.
// The review-level vector is the unweighted mean of the input vectors of its
// in-vocabulary keywords.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "credweak/common.hpp"
#include "credweak/feature_vector.hpp"
#include "credweak/text.hpp"

namespace credweak {

enum class Architecture { kSkipGram, kCbow };

inline std::string_view architecture_name(Architecture a) { return a == Architecture::kSkipGram ? "skipgram" : "cbow"; }

inline Architecture parse_architecture(std::string_view name) {
  if (name == "skipgram") return Architecture::kSkipGram;
  if (name == "cbow") return Architecture::kCbow;
  throw ValidationError("unknown architecture '" + std::string(name) + "' (expected skipgram or cbow)");
}

struct EmbeddingParams {
  std::size_t dim = 100;
  std::size_t window = 5;
  std::size_t negatives = 5;
  std::size_t epochs = 5;
  double learning_rate = 0.025;
  std::size_t min_count = 1;
  std::uint64_t seed = 1;
  Architecture architecture = Architecture::kSkipGram;

  void validate() const {
    if (dim < 1 || window < 1 || epochs < 1) throw ValidationError("dim, window and epochs must be >= 1");
    if (min_count < 1) throw ValidationError("min_count must be >= 1");
    if (!(learning_rate > 0.0)) throw ValidationError("learning_rate must be positive");
  }

  bool operator==(const EmbeddingParams&) const = default;
};

inline nlohmann::ordered_json to_json(const EmbeddingParams& p) {
  return {{"dim", p.dim},
          {"window", p.window},
          {"negatives", p.negatives},
          {"epochs", p.epochs},
          {"learning_rate", p.learning_rate},
          {"min_count", p.min_count},
          {"seed", p.seed},
          {"architecture", architecture_name(p.architecture)}};
}

inline EmbeddingParams embedding_params_from_json(const nlohmann::json& j) {
  EmbeddingParams p;
  for (const auto& item : j.items()) {
    const std::string& k = item.key();
    const nlohmann::json& v = item.value();
    if (k == "dim") p.dim = v.get<std::size_t>();
    else if (k == "window") p.window = v.get<std::size_t>();
    else if (k == "negatives") p.negatives = v.get<std::size_t>();
    else if (k == "epochs") p.epochs = v.get<std::size_t>();
    else if (k == "learning_rate") p.learning_rate = v.get<double>();
    else if (k == "min_count") p.min_count = v.get<std::size_t>();
    else if (k == "seed") p.seed = v.get<std::uint64_t>();
    else if (k == "architecture") p.architecture = parse_architecture(v.get<std::string>());
    else throw ValidationError("unknown embedding parameter '" + k + "'");
  }
  p.validate();
  return p;
}

// -ln sigmoid(x), stable for large |x|.
inline double neg_log_sigmoid(double x) {
  return x >= 0 ? std::log1p(std::exp(-x)) : -x + std::log1p(std::exp(x));
}

inline double sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

struct SamplingTarget {
  std::uint32_t row;
  bool positive;
};

// Loss of one hidden vector against its targets, with gradients.
// grad_hidden receives dL/dh (dim values). grad_targets receives dL/du_k for
// each target k, row-major (targets.size() * dim values). Duplicate target
// rows get separate gradient rows, which sum when applied.
inline double negative_sampling_loss(std::span<const double> hidden, std::span<const double> output,
                                     std::span<const SamplingTarget> targets, std::span<double> grad_hidden,
                                     std::span<double> grad_targets) {
  const std::size_t dim = hidden.size();
  std::fill(grad_hidden.begin(), grad_hidden.end(), 0.0);
  double loss = 0.0;
  for (std::size_t k = 0; k < targets.size(); ++k) {
    const double* u = output.data() + static_cast<std::size_t>(targets[k].row) * dim;
    double score = 0.0;
    for (std::size_t d = 0; d < dim; ++d) score += u[d] * hidden[d];
    const double sign = targets[k].positive ? 1.0 : -1.0;
    loss += neg_log_sigmoid(sign * score);
    // d/ds [-ln sigmoid(sign * s)] = -sign * (1 - sigmoid(sign * s))
    const double g = -sign * (1.0 - sigmoid(sign * score));
    double* gu = grad_targets.data() + k * dim;
    for (std::size_t d = 0; d < dim; ++d) {
      grad_hidden[d] += g * u[d];
      gu[d] = g * hidden[d];
    }
  }
  return loss;
}

// One training example: hidden = mean of the listed input rows.
struct TrainingExample {
  std::vector<std::uint32_t> inputs;
  std::vector<SamplingTarget> targets;
};

// Loss of one example with full-matrix gradients (|V| x dim each), used for
// gradient checking. Gradients are accumulated into grad_input/grad_output.
inline double example_loss(std::span<const double> input, std::span<const double> output, std::size_t dim,
                           const TrainingExample& ex, std::span<double> grad_input, std::span<double> grad_output) {
  std::vector<double> hidden(dim, 0.0);
  for (std::uint32_t r : ex.inputs) {
    for (std::size_t d = 0; d < dim; ++d) hidden[d] += input[r * dim + d];
  }
  const double scale = 1.0 / static_cast<double>(ex.inputs.size());
  for (double& x : hidden) x *= scale;
  std::vector<double> gh(dim), gt(ex.targets.size() * dim);
  const double loss = negative_sampling_loss(hidden, output, ex.targets, gh, gt);
  if (!grad_input.empty()) {
    for (std::uint32_t r : ex.inputs) {
      for (std::size_t d = 0; d < dim; ++d) grad_input[r * dim + d] += gh[d] * scale;
    }
  }
  if (!grad_output.empty()) {
    for (std::size_t k = 0; k < ex.targets.size(); ++k) {
      for (std::size_t d = 0; d < dim; ++d) grad_output[ex.targets[k].row * dim + d] += gt[k * dim + d];
    }
  }
  return loss;
}

class EmbeddingModel {
 public:
  EmbeddingModel() = default;

  const EmbeddingParams& params() const { return params_; }
  std::size_t dim() const { return params_.dim; }
  std::size_t size() const { return tokens_.size(); }
  const std::vector<std::string>& tokens() const { return tokens_; }
  const std::vector<double>& vectors() const { return vectors_; }
  // Mean loss per example over the training corpus after each epoch.
  const std::vector<double>& epoch_loss() const { return epoch_loss_; }
  bool trained() const { return !tokens_.empty(); }

  std::int64_t index_of(const std::string& token) const {
    auto it = index_.find(token);
    return it == index_.end() ? -1 : static_cast<std::int64_t>(it->second);
  }

  std::span<const double> vector(std::size_t row) const {
    return std::span<const double>(vectors_).subspan(row * dim(), dim());
  }

  double cosine(const std::string& a, const std::string& b) const {
    const std::int64_t ia = index_of(a), ib = index_of(b);
    if (ia < 0 || ib < 0) throw ValidationError("token not in vocabulary");
    const auto va = vector(static_cast<std::size_t>(ia)), vb = vector(static_cast<std::size_t>(ib));
    double dab = 0, daa = 0, dbb = 0;
    for (std::size_t d = 0; d < dim(); ++d) {
      dab += va[d] * vb[d];
      daa += va[d] * va[d];
      dbb += vb[d] * vb[d];
    }
    return dab / std::sqrt(daa * dbb);
  }

  // Unweighted mean of in-vocabulary keyword vectors; zero vector when no
  // keyword is in the vocabulary.
  FeatureVector embed(const TokenizedReview& doc) const {
    if (!trained()) throw ValidationError("embedding model is not trained");
    std::vector<double> mean(dim(), 0.0);
    std::size_t n = 0;
    for (const std::string& k : doc.keywords) {
      const std::int64_t row = index_of(k);
      if (row < 0) continue;
      const auto v = vector(static_cast<std::size_t>(row));
      for (std::size_t d = 0; d < dim(); ++d) mean[d] += v[d];
      ++n;
    }
    if (n > 0) {
      for (double& x : mean) x /= static_cast<double>(n);
    }
    return FeatureVector::dense(doc.review_id, std::move(mean));
  }

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["format_version"] = 1;
    j["kind"] = "embedding";
    j["hyperparameters"] = credweak::to_json(params_);
    j["vocabulary"] = tokens_;
    j["weights"] = {{"rows", tokens_.size()}, {"cols", dim()}, {"data", encode_doubles(vectors_)}};
    return j;
  }

  static EmbeddingModel from_json(const nlohmann::json& j) {
    if (j.at("kind") != "embedding") throw ValidationError("model kind is not embedding");
    if (j.at("format_version") != 1) throw ValidationError("unsupported format_version");
    EmbeddingModel m;
    m.params_ = embedding_params_from_json(j.at("hyperparameters"));
    m.tokens_ = j.at("vocabulary").get<std::vector<std::string>>();
    m.vectors_ = decode_doubles(j.at("weights").at("data").get<std::string>());
    if (j.at("weights").at("rows").get<std::size_t>() != m.tokens_.size() ||
        j.at("weights").at("cols").get<std::size_t>() != m.params_.dim ||
        m.vectors_.size() != m.tokens_.size() * m.params_.dim) {
      throw ValidationError("embedding weight shape does not match vocabulary and dim");
    }
    for (std::size_t i = 0; i < m.tokens_.size(); ++i) m.index_.emplace(m.tokens_[i], static_cast<std::uint32_t>(i));
    return m;
  }

  bool operator==(const EmbeddingModel& o) const {
    return params_ == o.params_ && tokens_ == o.tokens_ && vectors_ == o.vectors_;
  }

 private:
  friend EmbeddingModel train_embeddings(std::span<const TokenizedReview> docs, const EmbeddingParams& params);

  EmbeddingParams params_;
  std::vector<std::string> tokens_;  // sorted
  std::unordered_map<std::string, std::uint32_t> index_;
  std::vector<double> vectors_;  // |V| x dim input vectors, row-major
  std::vector<double> epoch_loss_;
};

// Deterministic for fixed params (single-threaded). Each document's keyword
// list, in rank order, is one training sentence.
inline EmbeddingModel train_embeddings(std::span<const TokenizedReview> docs, const EmbeddingParams& params) {
  params.validate();
  if (docs.empty()) throw ValidationError("cannot train embeddings on an empty document list");

  std::map<std::string, std::uint64_t> counts;
  for (const TokenizedReview& d : docs) {
    for (const std::string& t : d.keywords) ++counts[t];
  }
  EmbeddingModel m;
  m.params_ = params;
  std::vector<std::uint64_t> freq;
  for (const auto& [token, c] : counts) {
    if (c < params.min_count) continue;
    m.index_.emplace(token, static_cast<std::uint32_t>(m.tokens_.size()));
    m.tokens_.push_back(token);
    freq.push_back(c);
  }
  if (m.tokens_.empty()) throw ValidationError("embedding vocabulary is empty");

  const std::size_t vocab = m.tokens_.size();
  const std::size_t dim = params.dim;
  std::vector<std::vector<std::uint32_t>> sentences;
  sentences.reserve(docs.size());
  std::size_t total_words = 0;
  for (const TokenizedReview& d : docs) {
    std::vector<std::uint32_t> s;
    for (const std::string& t : d.keywords) {
      const std::int64_t row = m.index_of(t);
      if (row >= 0) s.push_back(static_cast<std::uint32_t>(row));
    }
    total_words += s.size();
    if (!s.empty()) sentences.push_back(std::move(s));
  }

  // Negative-sampling distribution: unigram counts raised to 3/4.
  std::vector<double> cumulative(vocab);
  double acc = 0.0;
  for (std::size_t i = 0; i < vocab; ++i) {
    acc += std::pow(static_cast<double>(freq[i]), 0.75);
    cumulative[i] = acc;
  }
  Rng rng(derive_seed(params.seed, "embedding"));
  const auto sample_negative = [&](Rng& from) {
    const double u = from.unit() * acc;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    if (it == cumulative.end()) --it;
    return static_cast<std::uint32_t>(it - cumulative.begin());
  };

  // Input rows start uniform in [-0.5/dim, 0.5/dim); output rows at zero.
  m.vectors_.resize(vocab * dim);
  for (double& x : m.vectors_) x = (rng.unit() - 0.5) / static_cast<double>(dim);
  std::vector<double> output(vocab * dim, 0.0);

  const double total_steps = static_cast<double>(params.epochs * std::max<std::size_t>(total_words, 1));
  double steps = 0.0;
  std::vector<double> hidden(dim), grad_hidden(dim), grad_targets;
  std::vector<SamplingTarget> targets;
  std::vector<std::uint32_t> inputs;

  const auto forward = [&]() {
    std::fill(hidden.begin(), hidden.end(), 0.0);
    for (std::uint32_t r : inputs) {
      for (std::size_t d = 0; d < dim; ++d) hidden[d] += m.vectors_[r * dim + d];
    }
    const double scale = 1.0 / static_cast<double>(inputs.size());
    for (double& x : hidden) x *= scale;
    grad_targets.resize(targets.size() * dim);
    return negative_sampling_loss(hidden, output, targets, grad_hidden, grad_targets);
  };

  const auto step = [&](double lr) {
    const double loss = forward();
    for (std::size_t k = 0; k < targets.size(); ++k) {
      double* u = output.data() + static_cast<std::size_t>(targets[k].row) * dim;
      for (std::size_t d = 0; d < dim; ++d) u[d] -= lr * grad_targets[k * dim + d];
    }
    // Every context row takes the full hidden-layer error, as in word2vec.
    for (std::uint32_t r : inputs) {
      for (std::size_t d = 0; d < dim; ++d) m.vectors_[r * dim + d] -= lr * grad_hidden[d];
    }
    return loss;
  };

  // Fills inputs/targets for each example centred on s[c] and calls fn().
  const auto for_each_example = [&](const std::vector<std::uint32_t>& s, std::size_t c, Rng& negatives, auto&& fn) {
    const auto add_negatives = [&](std::uint32_t positive) {
      for (std::size_t k = 0; k < params.negatives; ++k) {
        const std::uint32_t neg = sample_negative(negatives);
        if (neg == positive) continue;
        targets.push_back({neg, false});
      }
    };
    const std::size_t lo = c >= params.window ? c - params.window : 0;
    const std::size_t hi = std::min(s.size() - 1, c + params.window);
    if (params.architecture == Architecture::kSkipGram) {
      for (std::size_t o = lo; o <= hi; ++o) {
        if (o == c) continue;
        inputs.assign(1, s[c]);
        targets.assign(1, {s[o], true});
        add_negatives(s[o]);
        fn();
      }
    } else {
      inputs.clear();
      for (std::size_t o = lo; o <= hi; ++o) {
        if (o != c) inputs.push_back(s[o]);
      }
      if (inputs.empty()) return;
      targets.assign(1, {s[c], true});
      add_negatives(s[c]);
      fn();
    }
  };

  // Objective over the whole corpus with a fixed draw of negatives, so that
  // successive epochs are scored on the same examples.
  const auto corpus_loss = [&]() {
    Rng negatives(derive_seed(params.seed, "embedding-loss"));
    double total = 0.0;
    std::size_t examples = 0;
    for (const auto& s : sentences) {
      for (std::size_t c = 0; c < s.size(); ++c) {
        for_each_example(s, c, negatives, [&] {
          total += forward();
          ++examples;
        });
      }
    }
    return examples > 0 ? total / static_cast<double>(examples) : 0.0;
  };

  std::vector<std::size_t> order(sentences.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  for (std::size_t epoch = 0; epoch < params.epochs; ++epoch) {
    rng.shuffle(order);
    for (std::size_t i : order) {
      const auto& s = sentences[i];
      for (std::size_t c = 0; c < s.size(); ++c) {
        const double lr = params.learning_rate * std::max(1.0 - steps / total_steps, 1e-4);
        steps += 1.0;
        for_each_example(s, c, rng, [&] { step(lr); });
      }
    }
    m.epoch_loss_.push_back(corpus_loss());
  }
  for (double x : m.vectors_) {
    if (!std::isfinite(x)) throw Error("embedding training diverged (non-finite vector)");
  }
  return m;
}

}  // namespace credweak
