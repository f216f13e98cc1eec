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

// JSON run configuration.
//
//   {
//     "corpus": {"reviews": "reviews.jsonl", "histories": "histories.jsonl", "max_text_len": 140},
//     "seed": 7,
//     "test_fraction": 0.2,
//     "criterion": "historical",
//     "features": {"kind": "tfidf", "keywords": 20, "tf_mode": "sublinear", "embedding": {"dim": 100}},
//     "classifier": {"kind": "svm", "nb": {"alpha": 1.0}, "svm": {"C": 1.0, "gamma": null}},
//     "movies": ["movie01", "movie02"],
//     "matrix": {"features": ["tfidf", "embedding"], "classifiers": ["nb", "svm"],
//                "criteria": ["historical", "helpfulness"], "movie_subsets": [["movie01"], []]},
//     "shuffle_labels": false,
//     "output": {"dir": "out", "save_models": false}
//   }
//
// Every key is optional except corpus.reviews. Unknown keys are rejected.
// Relative paths resolve against the directory holding the config file.

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "credweak/common.hpp"
#include "credweak/corpus.hpp"
#include "credweak/experiment.hpp"
#include "credweak/io.hpp"

namespace credweak {

struct RunConfig {
  std::filesystem::path reviews;
  std::optional<std::filesystem::path> histories;
  std::size_t max_text_len = kDefaultMaxTextLength;
  ExperimentConfig base;
  std::vector<FeatureKind> matrix_features;
  std::vector<ClassifierKind> matrix_classifiers;
  std::vector<Criterion> matrix_criteria;
  std::vector<std::vector<std::string>> matrix_movie_subsets;
  std::filesystem::path output_dir = "out";
  bool save_models = false;
  nlohmann::json document;  // the parsed file, for hashing

  std::vector<ExperimentConfig> cells() const {
    return expand_matrix(base, matrix_features, matrix_classifiers, matrix_criteria, matrix_movie_subsets);
  }

  std::vector<std::filesystem::path> inputs() const {
    std::vector<std::filesystem::path> out{reviews};
    if (histories) out.push_back(*histories);
    return out;
  }
};

namespace detail {

inline void check_keys(const nlohmann::json& obj, const std::string& where,
                       std::initializer_list<std::string_view> allowed) {
  if (!obj.is_object()) throw ValidationError(where + " must be an object");
  for (const auto& item : obj.items()) {
    bool ok = false;
    for (std::string_view a : allowed) ok |= item.key() == a;
    if (!ok) throw ValidationError("unknown key '" + item.key() + "' in " + where);
  }
}

template <typename T, typename Parse>
std::vector<T> parse_list(const nlohmann::json& arr, const std::string& where, Parse parse) {
  if (!arr.is_array()) throw ValidationError(where + " must be an array");
  std::vector<T> out;
  for (const auto& v : arr) out.push_back(parse(v.get<std::string>()));
  return out;
}

}  // namespace detail

inline RunConfig parse_run_config(const nlohmann::json& j, const std::filesystem::path& base_dir = {}) {
  RunConfig rc;
  rc.document = j;
  ExperimentConfig& c = rc.base;
  const auto resolve = [&](const std::string& p) {
    const std::filesystem::path path(p);
    return path.is_absolute() || base_dir.empty() ? path : base_dir / path;
  };
  try {
    detail::check_keys(j, "config",
                       {"corpus", "seed", "test_fraction", "criterion", "features", "classifier", "movies", "matrix",
                        "shuffle_labels", "output"});
    if (!j.contains("corpus")) throw ValidationError("config lacks 'corpus'");
    const auto& corpus = j.at("corpus");
    detail::check_keys(corpus, "corpus", {"reviews", "histories", "max_text_len"});
    if (!corpus.contains("reviews")) throw ValidationError("config lacks 'corpus.reviews'");
    rc.reviews = resolve(corpus.at("reviews").get<std::string>());
    if (corpus.contains("histories")) rc.histories = resolve(corpus.at("histories").get<std::string>());
    if (corpus.contains("max_text_len")) rc.max_text_len = corpus.at("max_text_len").get<std::size_t>();

    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("test_fraction")) c.test_fraction = j.at("test_fraction").get<double>();
    if (!(c.test_fraction > 0.0 && c.test_fraction < 1.0)) throw ValidationError("test_fraction must lie in (0, 1)");
    if (j.contains("criterion")) c.criterion = parse_criterion(j.at("criterion").get<std::string>());
    if (j.contains("shuffle_labels")) c.shuffle_labels = j.at("shuffle_labels").get<bool>();
    if (j.contains("movies")) c.movies = j.at("movies").get<std::vector<std::string>>();

    if (j.contains("features")) {
      const auto& f = j.at("features");
      detail::check_keys(f, "features", {"kind", "keywords", "tf_mode", "embedding"});
      if (f.contains("kind")) c.features = parse_feature_kind(f.at("kind").get<std::string>());
      if (f.contains("keywords")) c.keywords = f.at("keywords").get<std::size_t>();
      if (c.keywords < 1) throw ValidationError("features.keywords must be >= 1");
      if (f.contains("tf_mode")) c.tf_mode = parse_tf_mode(f.at("tf_mode").get<std::string>());
      if (f.contains("embedding")) c.embedding = embedding_params_from_json(f.at("embedding"));
    }

    if (j.contains("classifier")) {
      const auto& k = j.at("classifier");
      detail::check_keys(k, "classifier", {"kind", "nb", "svm"});
      if (k.contains("kind")) c.classifier = parse_classifier_kind(k.at("kind").get<std::string>());
      if (k.contains("nb")) {
        const auto& nb = k.at("nb");
        detail::check_keys(nb, "classifier.nb", {"alpha", "epsilon"});
        if (nb.contains("alpha")) c.nb_alpha = nb.at("alpha").get<double>();
        if (nb.contains("epsilon")) c.nb_epsilon = nb.at("epsilon").get<double>();
        if (!(c.nb_alpha > 0) || !(c.nb_epsilon > 0)) throw ValidationError("nb alpha and epsilon must be > 0");
      }
      if (k.contains("svm")) {
        const auto& s = k.at("svm");
        detail::check_keys(s, "classifier.svm", {"C", "gamma", "tol", "max_iterations", "cache_mb"});
        if (s.contains("C")) c.svm.C = s.at("C").get<double>();
        if (s.contains("gamma") && !s.at("gamma").is_null()) c.svm.gamma = s.at("gamma").get<double>();
        if (s.contains("tol")) c.svm.tol = s.at("tol").get<double>();
        if (s.contains("max_iterations")) c.svm.max_iterations = s.at("max_iterations").get<std::size_t>();
        if (s.contains("cache_mb")) c.svm.cache_bytes = s.at("cache_mb").get<std::size_t>() << 20;
        if (!(c.svm.C > 0) || !(c.svm.tol > 0) || (c.svm.gamma && !(*c.svm.gamma > 0))) {
          throw ValidationError("svm C, gamma and tol must be > 0");
        }
      }
    }

    if (j.contains("matrix")) {
      const auto& m = j.at("matrix");
      detail::check_keys(m, "matrix", {"features", "classifiers", "criteria", "movie_subsets"});
      if (m.contains("features")) {
        rc.matrix_features = detail::parse_list<FeatureKind>(m.at("features"), "matrix.features",
                                                             [](const std::string& s) { return parse_feature_kind(s); });
      }
      if (m.contains("classifiers")) {
        rc.matrix_classifiers = detail::parse_list<ClassifierKind>(
            m.at("classifiers"), "matrix.classifiers", [](const std::string& s) { return parse_classifier_kind(s); });
      }
      if (m.contains("criteria")) {
        rc.matrix_criteria = detail::parse_list<Criterion>(m.at("criteria"), "matrix.criteria",
                                                           [](const std::string& s) { return parse_criterion(s); });
      }
      if (m.contains("movie_subsets")) {
        rc.matrix_movie_subsets = m.at("movie_subsets").get<std::vector<std::vector<std::string>>>();
      }
    }

    if (j.contains("output")) {
      const auto& o = j.at("output");
      detail::check_keys(o, "output", {"dir", "save_models"});
      if (o.contains("dir")) rc.output_dir = resolve(o.at("dir").get<std::string>());
      if (o.contains("save_models")) rc.save_models = o.at("save_models").get<bool>();
    } else if (!base_dir.empty()) {
      rc.output_dir = base_dir / rc.output_dir;
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("config: ") + e.what());
  }
  return rc;
}

inline RunConfig load_run_config(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
  try {
    return parse_run_config(j, path.parent_path());
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

inline Corpus load_corpus(const RunConfig& rc) {
  Corpus corpus = ingest_reviews(rc.reviews, rc.max_text_len);
  if (rc.histories) corpus = ingest_histories(std::move(corpus), *rc.histories);
  return corpus;
}

}  // namespace credweak
