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

// TF-IDF weighting over per-review keyword lists.
//
//   weight(t, d) = tf(t, d) * idf(t)
//   idf(t)       = ln(|D| / df(t))
//   tf, augmented mode: 0.5 + 0.5 * f(t, d) / max_w f(w, d)
//   tf, sublinear mode: 1 + ln f(t, d)
//
// All logarithms are natural.

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

enum class TfMode { kAugmented, kSublinear };

inline std::string_view tf_mode_name(TfMode m) { return m == TfMode::kAugmented ? "augmented" : "sublinear"; }

inline TfMode parse_tf_mode(std::string_view name) {
  if (name == "augmented") return TfMode::kAugmented;
  if (name == "sublinear") return TfMode::kSublinear;
  throw ValidationError("unknown tf_mode '" + std::string(name) + "' (expected augmented or sublinear)");
}

inline double term_frequency(TfMode mode, double count, double max_count) {
  if (mode == TfMode::kAugmented) return 0.5 + 0.5 * count / max_count;
  return 1.0 + std::log(count);
}

class TfIdfModel {
 public:
  TfIdfModel() = default;

  bool fitted() const { return doc_count_ > 0; }
  TfMode tf_mode() const { return tf_mode_; }
  std::size_t doc_count() const { return doc_count_; }
  std::size_t size() const { return tokens_.size(); }
  const std::vector<std::string>& tokens() const { return tokens_; }
  const std::vector<std::uint32_t>& doc_freq() const { return doc_freq_; }

  // Column of token, or -1 when out of vocabulary.
  std::int64_t index_of(const std::string& token) const {
    auto it = index_.find(token);
    return it == index_.end() ? -1 : static_cast<std::int64_t>(it->second);
  }

  double idf(std::size_t column) const {
    return std::log(static_cast<double>(doc_count_) / static_cast<double>(doc_freq_.at(column)));
  }

  // Sparse weights of one document; out-of-vocabulary keywords are dropped
  // but still count towards the document's maximum frequency.
  FeatureVector transform(const TokenizedReview& doc) const {
    if (!fitted()) throw ValidationError("TF-IDF model is not fitted");
    std::uint32_t max_count = 0;
    for (std::uint32_t c : doc.counts) max_count = std::max(max_count, c);
    std::vector<std::pair<std::uint32_t, double>> entries;
    for (std::size_t i = 0; i < doc.keywords.size(); ++i) {
      auto it = index_.find(doc.keywords[i]);
      if (it == index_.end()) continue;
      const double tf = term_frequency(tf_mode_, doc.counts[i], max_count);
      entries.emplace_back(it->second, tf * idf(it->second));
    }
    return FeatureVector::sparse(doc.review_id, size(), std::move(entries));
  }

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["format_version"] = 1;
    j["kind"] = "tfidf";
    j["hyperparameters"] = {{"tf_mode", tf_mode_name(tf_mode_)}};
    j["vocabulary"] = tokens_;
    j["doc_count"] = doc_count_;
    j["doc_freq"] = doc_freq_;
    return j;
  }

  static TfIdfModel from_json(const nlohmann::json& j) {
    if (j.at("kind") != "tfidf") throw ValidationError("model kind is not tfidf");
    if (j.at("format_version") != 1) throw ValidationError("unsupported format_version");
    TfIdfModel m;
    m.tf_mode_ = parse_tf_mode(j.at("hyperparameters").at("tf_mode").get<std::string>());
    m.tokens_ = j.at("vocabulary").get<std::vector<std::string>>();
    m.doc_count_ = j.at("doc_count").get<std::size_t>();
    m.doc_freq_ = j.at("doc_freq").get<std::vector<std::uint32_t>>();
    if (m.doc_freq_.size() != m.tokens_.size()) throw ValidationError("doc_freq length differs from vocabulary");
    for (std::size_t i = 0; i < m.tokens_.size(); ++i) {
      if (m.doc_freq_[i] < 1 || m.doc_freq_[i] > m.doc_count_) throw ValidationError("doc_freq out of range");
      m.index_.emplace(m.tokens_[i], static_cast<std::uint32_t>(i));
    }
    return m;
  }

  bool operator==(const TfIdfModel& o) const {
    return tf_mode_ == o.tf_mode_ && doc_count_ == o.doc_count_ && tokens_ == o.tokens_ && doc_freq_ == o.doc_freq_;
  }

 private:
  friend TfIdfModel fit_tfidf(std::span<const TokenizedReview> docs, TfMode mode);

  TfMode tf_mode_ = TfMode::kSublinear;
  std::size_t doc_count_ = 0;
  std::vector<std::string> tokens_;  // column -> token, sorted
  std::unordered_map<std::string, std::uint32_t> index_;
  std::vector<std::uint32_t> doc_freq_;
};

// Vocabulary columns are assigned in lexicographic token order, so the
// fitted model does not depend on document order.
inline TfIdfModel fit_tfidf(std::span<const TokenizedReview> docs, TfMode mode) {
  if (docs.empty()) throw ValidationError("cannot fit TF-IDF on an empty document list");
  std::map<std::string, std::uint32_t> df;
  for (const TokenizedReview& d : docs) {
    // Keywords are distinct within a document.
    for (const std::string& t : d.keywords) ++df[t];
  }
  TfIdfModel m;
  m.tf_mode_ = mode;
  m.doc_count_ = docs.size();
  m.tokens_.reserve(df.size());
  m.doc_freq_.reserve(df.size());
  for (const auto& [token, count] : df) {
    m.index_.emplace(token, static_cast<std::uint32_t>(m.tokens_.size()));
    m.tokens_.push_back(token);
    m.doc_freq_.push_back(count);
  }
  return m;
}

}  // namespace credweak
