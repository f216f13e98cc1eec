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

// End-to-end experiment cells.
//
// One cell runs: annotate -> drop unjudged -> stratified split -> fit
// features on the training side only -> train classifier -> predict the test
// side. Accuracy is measured against the same criterion's weak labels on the
// held-out reviews; there is no separate gold standard. Annotation, training
// and testing are timed separately; corpus ingestion and report writing are
// not timed.
//
// All randomness derives from ExperimentConfig::seed (see derive_seed): the
// split uses "split", the embedding trainer "embedding", SMO "svm", and the
// label-shuffling ablation "shuffle".

#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <nlohmann/json.hpp>

#include "credweak/common.hpp"
#include "credweak/corpus.hpp"
#include "credweak/embedding.hpp"
#include "credweak/labeling.hpp"
#include "credweak/naive_bayes.hpp"
#include "credweak/svm.hpp"
#include "credweak/text.hpp"
#include "credweak/tfidf.hpp"

namespace credweak {

enum class FeatureKind { kTfIdf, kEmbedding };
enum class ClassifierKind { kNaiveBayes, kSvm };

inline std::string_view feature_kind_name(FeatureKind k) { return k == FeatureKind::kTfIdf ? "tfidf" : "embedding"; }
inline std::string_view classifier_kind_name(ClassifierKind k) { return k == ClassifierKind::kNaiveBayes ? "nb" : "svm"; }

inline FeatureKind parse_feature_kind(std::string_view s) {
  if (s == "tfidf") return FeatureKind::kTfIdf;
  if (s == "embedding") return FeatureKind::kEmbedding;
  throw ValidationError("unknown feature model '" + std::string(s) + "' (expected tfidf or embedding)");
}

inline ClassifierKind parse_classifier_kind(std::string_view s) {
  if (s == "nb") return ClassifierKind::kNaiveBayes;
  if (s == "svm") return ClassifierKind::kSvm;
  throw ValidationError("unknown classifier '" + std::string(s) + "' (expected nb or svm)");
}

struct ExperimentConfig {
  Criterion criterion = Criterion::kHistoricalCredibility;
  FeatureKind features = FeatureKind::kTfIdf;
  std::size_t keywords = kDefaultKeywordCount;
  TfMode tf_mode = TfMode::kSublinear;
  EmbeddingParams embedding;  // seed is overwritten from the cell seed
  ClassifierKind classifier = ClassifierKind::kNaiveBayes;
  double nb_alpha = 1.0;
  double nb_epsilon = 1e-9;
  SvmOptions svm;  // seed is overwritten from the cell seed
  std::vector<std::string> movies;  // empty: every movie in the corpus
  double test_fraction = 0.2;
  std::uint64_t seed = 7;
  bool shuffle_labels = false;        // ablation: permute training labels
  bool evaluate_on_training = false;  // sanity check: score the training side

  std::string movies_label() const {
    if (movies.empty()) return "all";
    std::string s;
    for (const std::string& m : movies) s += (s.empty() ? "" : ";") + m;
    return s;
  }

  // Canonical JSON of every field that influences results.
  nlohmann::json to_json() const {
    nlohmann::json j;
    j["criterion"] = criterion_name(criterion);
    j["features"] = feature_kind_name(features);
    j["keywords"] = keywords;
    j["tf_mode"] = tf_mode_name(tf_mode);
    j["embedding"] = credweak::to_json(embedding);
    j["embedding"].erase("seed");
    j["classifier"] = classifier_kind_name(classifier);
    j["nb"] = {{"alpha", nb_alpha}, {"epsilon", nb_epsilon}};
    j["svm"] = {{"C", svm.C}, {"tol", svm.tol}, {"max_iterations", svm.max_iterations}};
    j["svm"]["gamma"] = svm.gamma ? nlohmann::json(*svm.gamma) : nlohmann::json(nullptr);
    j["movies"] = movies;
    j["test_fraction"] = test_fraction;
    j["seed"] = seed;
    j["shuffle_labels"] = shuffle_labels;
    j["evaluate_on_training"] = evaluate_on_training;
    return j;
  }
};

// A fitted text representation: TF-IDF or embedding mean.
struct FeatureModel {
  FeatureKind kind = FeatureKind::kTfIdf;
  TfIdfModel tfidf;
  EmbeddingModel embedding;

  FeatureVector transform(const TokenizedReview& doc) const {
    return kind == FeatureKind::kTfIdf ? tfidf.transform(doc) : embedding.embed(doc);
  }

  nlohmann::ordered_json to_json() const {
    return kind == FeatureKind::kTfIdf ? tfidf.to_json() : embedding.to_json();
  }
};

inline EmbeddingParams cell_embedding_params(const ExperimentConfig& config) {
  EmbeddingParams p = config.embedding;
  p.seed = derive_seed(config.seed, "embedding");
  return p;
}

inline FeatureModel fit_features(const ExperimentConfig& config, std::span<const TokenizedReview> train_docs) {
  FeatureModel fm;
  fm.kind = config.features;
  if (config.features == FeatureKind::kTfIdf) {
    fm.tfidf = fit_tfidf(train_docs, config.tf_mode);
  } else {
    fm.embedding = train_embeddings(train_docs, cell_embedding_params(config));
  }
  return fm;
}

struct ClassifierModel {
  ClassifierKind kind = ClassifierKind::kNaiveBayes;
  NaiveBayesModel nb;
  SvmModel svm;

  Prediction predict(const FeatureVector& x) const {
    return kind == ClassifierKind::kNaiveBayes ? nb_predict(nb, x) : svm_predict(svm, x);
  }

  nlohmann::ordered_json to_json() const {
    return kind == ClassifierKind::kNaiveBayes ? credweak::to_json(nb) : credweak::to_json(svm);
  }
};

// Multinomial naive Bayes pairs with TF-IDF, Gaussian with embedding means.
inline ClassifierModel train_classifier(const ExperimentConfig& config, std::span<const FeatureVector> xs,
                                        std::span<const int> ys, SvmTrace* trace = nullptr) {
  ClassifierModel cm;
  cm.kind = config.classifier;
  if (config.classifier == ClassifierKind::kNaiveBayes) {
    NbOptions o;
    o.variant = config.features == FeatureKind::kTfIdf ? NbVariant::kMultinomial : NbVariant::kGaussian;
    o.alpha = config.nb_alpha;
    o.epsilon = config.nb_epsilon;
    cm.nb = nb_train(xs, ys, o);
  } else {
    SvmOptions o = config.svm;
    o.seed = derive_seed(config.seed, "svm");
    cm.svm = svm_train(xs, ys, o, trace);
  }
  return cm;
}

// Binary confusion counts with Trusted as the positive class.
struct Confusion {
  std::size_t true_trusted = 0;      // predicted trusted, labeled trusted
  std::size_t false_trusted = 0;     // predicted trusted, labeled distrusted
  std::size_t true_distrusted = 0;   // predicted distrusted, labeled distrusted
  std::size_t false_distrusted = 0;  // predicted distrusted, labeled trusted

  void add(Verdict predicted, Verdict truth) {
    if (predicted == Verdict::kTrusted) {
      ++(truth == Verdict::kTrusted ? true_trusted : false_trusted);
    } else {
      ++(truth == Verdict::kDistrusted ? true_distrusted : false_distrusted);
    }
  }

  std::size_t total() const { return true_trusted + false_trusted + true_distrusted + false_distrusted; }
  std::size_t correct() const { return true_trusted + true_distrusted; }
  double accuracy() const { return total() ? static_cast<double>(correct()) / static_cast<double>(total()) : 0.0; }

  static double ratio(std::size_t num, std::size_t den) {
    return den ? static_cast<double>(num) / static_cast<double>(den) : 0.0;
  }
  double precision_trusted() const { return ratio(true_trusted, true_trusted + false_trusted); }
  double recall_trusted() const { return ratio(true_trusted, true_trusted + false_distrusted); }
  double precision_distrusted() const { return ratio(true_distrusted, true_distrusted + false_distrusted); }
  double recall_distrusted() const { return ratio(true_distrusted, true_distrusted + false_trusted); }
};

struct PhaseTimings {
  double annotation = 0.0;
  double training = 0.0;
  double testing = 0.0;
  double total() const { return annotation + training + testing; }
};

struct ExperimentReport {
  ExperimentConfig config;
  std::size_t n_train = 0;
  std::size_t n_test = 0;
  double accuracy = 0.0;
  Confusion confusion;
  PhaseTimings timings;
  std::size_t trusted = 0;  // label distribution over the annotated reviews
  std::size_t distrusted = 0;
  std::size_t unjudged = 0;
  std::map<std::string, Confusion> per_movie;
  Split split;
  std::vector<Prediction> predictions;  // evaluated side, in split order
  FeatureModel feature_model;
  ClassifierModel classifier_model;
  SvmTrace svm_trace;
};

inline std::vector<TokenizedReview> keywords_for(const Corpus& corpus, std::span<const std::string> ids,
                                                 std::size_t k) {
  std::unordered_map<std::string, const Review*> by_id;
  for (const Review& r : corpus.reviews) by_id.emplace(r.review_id, &r);
  std::vector<TokenizedReview> docs;
  docs.reserve(ids.size());
  for (const std::string& id : ids) {
    auto it = by_id.find(id);
    if (it == by_id.end()) throw ValidationError("review '" + id + "' not in corpus");
    docs.push_back(extract_keywords(id, it->second->text, k));
  }
  return docs;
}

inline Corpus select_movies(const Corpus& corpus, const std::vector<std::string>& movies) {
  if (movies.empty()) return corpus;
  const std::vector<std::string> present = corpus.movies();
  const std::set<std::string> known(present.begin(), present.end());
  for (const std::string& m : movies) {
    if (!known.count(m)) throw ValidationError("movie '" + m + "' is not in the corpus");
  }
  const std::set<std::string> wanted(movies.begin(), movies.end());
  return corpus.subset([&](const Review& r) { return wanted.count(r.movie_id) > 0; });
}

namespace detail {

inline void require_both_classes(const std::vector<int>& ys, const char* side) {
  std::size_t pos = 0;
  for (int y : ys) pos += y == 1;
  if (pos == 0 || pos == ys.size()) {
    throw ValidationError(std::string(side) + " split has a single class (" + std::to_string(pos) + " trusted, " +
                          std::to_string(ys.size() - pos) + " distrusted)");
  }
}

}  // namespace detail

// Runs the learning and evaluation phases on an already annotated,
// judged-only corpus with a given split. Exposed separately so the split can
// be controlled (leakage audits, custom protocols).
inline void learn_and_evaluate(const ExperimentConfig& config, const Corpus& judged, const AnnotationResult& labels,
                               const Split& split, ExperimentReport& report) {
  const std::vector<std::string>& eval_ids = config.evaluate_on_training ? split.train : split.test;

  // The ablation permutes the judged labels across the whole corpus, so the
  // permuted labels are also the ground truth for evaluation.
  std::unordered_map<std::string, Verdict> permuted;
  if (config.shuffle_labels) {
    std::vector<Verdict> verdicts;
    verdicts.reserve(judged.reviews.size());
    for (const Review& r : judged.reviews) verdicts.push_back(labels.verdict(r.review_id));
    Rng rng(derive_seed(config.seed, "shuffle"));
    rng.shuffle(verdicts);
    for (std::size_t i = 0; i < verdicts.size(); ++i) permuted.emplace(judged.reviews[i].review_id, verdicts[i]);
  }
  const auto truth_of = [&](const std::string& id) {
    return config.shuffle_labels ? permuted.at(id) : labels.verdict(id);
  };

  std::vector<int> train_y;
  train_y.reserve(split.train.size());
  for (const std::string& id : split.train) train_y.push_back(verdict_sign(truth_of(id)));
  detail::require_both_classes(train_y, "training");
  {
    std::vector<int> eval_y;
    for (const std::string& id : eval_ids) eval_y.push_back(verdict_sign(truth_of(id)));
    detail::require_both_classes(eval_y, config.evaluate_on_training ? "evaluation" : "testing");
  }

  const Stopwatch train_timer;
  const std::vector<TokenizedReview> train_docs = keywords_for(judged, split.train, config.keywords);
  report.feature_model = fit_features(config, train_docs);
  std::vector<FeatureVector> train_x;
  train_x.reserve(train_docs.size());
  for (const TokenizedReview& d : train_docs) train_x.push_back(report.feature_model.transform(d));
  report.classifier_model = train_classifier(config, train_x, train_y, &report.svm_trace);
  report.timings.training = train_timer.seconds();

  const Stopwatch test_timer;
  const std::vector<TokenizedReview> eval_docs = keywords_for(judged, eval_ids, config.keywords);
  report.predictions.clear();
  report.predictions.reserve(eval_docs.size());
  for (const TokenizedReview& d : eval_docs) {
    report.predictions.push_back(report.classifier_model.predict(report.feature_model.transform(d)));
  }
  report.timings.testing = test_timer.seconds();

  std::unordered_map<std::string, const Review*> by_id;
  for (const Review& r : judged.reviews) by_id.emplace(r.review_id, &r);
  report.confusion = Confusion{};
  report.per_movie.clear();
  for (const Prediction& p : report.predictions) {
    const Verdict truth = truth_of(p.review_id);
    report.confusion.add(p.verdict, truth);
    report.per_movie[by_id.at(p.review_id)->movie_id].add(p.verdict, truth);
  }
  report.n_train = split.train.size();
  report.n_test = eval_ids.size();
  report.accuracy = report.confusion.accuracy();
  report.split = split;
}

inline ExperimentReport run_experiment(const ExperimentConfig& config, const Corpus& corpus) {
  if (!(config.test_fraction > 0.0 && config.test_fraction < 1.0)) {
    throw ValidationError("test_fraction must lie in (0, 1)");
  }
  ExperimentReport report;
  report.config = config;
  const Corpus scoped = select_movies(corpus, config.movies);

  const Stopwatch annotation_timer;
  const AnnotationResult labels = annotate(scoped, config.criterion);
  report.timings.annotation = annotation_timer.seconds();
  report.trusted = labels.trusted;
  report.distrusted = labels.distrusted;
  report.unjudged = labels.unjudged;

  const Corpus judged =
      scoped.subset([&](const Review& r) { return labels.verdict(r.review_id) != Verdict::kUnjudged; });
  const Split split = split_corpus(judged, config.test_fraction, config.seed);
  learn_and_evaluate(config, judged, labels, split, report);
  return report;
}

// --- Comparisons ------------------------------------------------------------

// Relative improvement of the historical criterion over the helpfulness
// criterion, in percent.
inline double relative_improvement(double accuracy_historical, double accuracy_helpfulness) {
  if (!(accuracy_helpfulness > 0)) throw ValidationError("baseline accuracy must be positive");
  return (accuracy_historical - accuracy_helpfulness) / accuracy_helpfulness * 100.0;
}

struct ComparisonRow {
  ExperimentReport historical;
  ExperimentReport helpfulness;
  double improvement_percent = 0.0;
};

struct ComparisonReport {
  std::vector<ComparisonRow> rows;
};

// Pairs two cells that may differ only in criterion.
inline ComparisonRow compare_reports(ExperimentReport historical, ExperimentReport helpfulness) {
  if (historical.config.seed != helpfulness.config.seed) {
    throw ValidationError("paired cells use different seeds (" + std::to_string(historical.config.seed) + " vs " +
                          std::to_string(helpfulness.config.seed) + ")");
  }
  nlohmann::json a = historical.config.to_json(), b = helpfulness.config.to_json();
  a.erase("criterion");
  b.erase("criterion");
  if (a != b) throw ValidationError("paired cells differ in more than the criterion");
  ComparisonRow row;
  row.improvement_percent = relative_improvement(historical.accuracy, helpfulness.accuracy);
  row.historical = std::move(historical);
  row.helpfulness = std::move(helpfulness);
  return row;
}

// Runs every config under both criteria and pairs the results.
inline ComparisonReport run_comparison(const std::vector<ExperimentConfig>& configs, const Corpus& corpus) {
  ComparisonReport out;
  for (ExperimentConfig c : configs) {
    c.criterion = Criterion::kHistoricalCredibility;
    ExperimentReport hist = run_experiment(c, corpus);
    c.criterion = Criterion::kHelpfulnessVote;
    ExperimentReport help = run_experiment(c, corpus);
    out.rows.push_back(compare_reports(std::move(hist), std::move(help)));
  }
  return out;
}

// Cartesian product over the given axes; an empty axis keeps the base value.
inline std::vector<ExperimentConfig> expand_matrix(const ExperimentConfig& base, std::vector<FeatureKind> features,
                                                   std::vector<ClassifierKind> classifiers,
                                                   std::vector<Criterion> criteria,
                                                   std::vector<std::vector<std::string>> movie_subsets) {
  if (features.empty()) features = {base.features};
  if (classifiers.empty()) classifiers = {base.classifier};
  if (criteria.empty()) criteria = {base.criterion};
  if (movie_subsets.empty()) movie_subsets = {base.movies};
  std::vector<ExperimentConfig> out;
  for (const auto& movies : movie_subsets) {
    for (FeatureKind f : features) {
      for (ClassifierKind c : classifiers) {
        for (Criterion k : criteria) {
          ExperimentConfig cell = base;
          cell.movies = movies;
          cell.features = f;
          cell.classifier = c;
          cell.criterion = k;
          out.push_back(std::move(cell));
        }
      }
    }
  }
  return out;
}

// --- Timing benchmark -------------------------------------------------------

inline double median(std::vector<double> xs) {
  if (xs.empty()) throw ValidationError("median of an empty list");
  std::sort(xs.begin(), xs.end());
  const std::size_t n = xs.size();
  return n % 2 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

struct BenchColumn {
  FeatureKind features = FeatureKind::kTfIdf;
  ClassifierKind classifier = ClassifierKind::kNaiveBayes;
  PhaseTimings timings;  // medians

  double annotation_share() const { return timings.total() > 0 ? timings.annotation / timings.total() : 0.0; }
};

struct BenchTable {
  std::size_t repetitions = 0;
  std::size_t reviews = 0;
  std::vector<BenchColumn> columns;  // tfidf+nb, embedding+nb, tfidf+svm, embedding+svm
};

// Annotation does not depend on the feature/classifier pair, so it is timed
// once per repetition and the median is shared by every column. Cells run
// serially.
inline BenchTable bench_timings(const ExperimentConfig& base, const Corpus& corpus, std::size_t repetitions) {
  if (repetitions < 1) throw ValidationError("repetitions must be >= 1");
  const Corpus scoped = select_movies(corpus, base.movies);
  BenchTable table;
  table.repetitions = repetitions;
  table.reviews = scoped.reviews.size();

  std::vector<double> annotation;
  for (std::size_t r = 0; r < repetitions; ++r) annotation.push_back(annotate(scoped, base.criterion).elapsed);
  const double annotation_median = median(annotation);

  const std::pair<FeatureKind, ClassifierKind> order[] = {{FeatureKind::kTfIdf, ClassifierKind::kNaiveBayes},
                                                          {FeatureKind::kEmbedding, ClassifierKind::kNaiveBayes},
                                                          {FeatureKind::kTfIdf, ClassifierKind::kSvm},
                                                          {FeatureKind::kEmbedding, ClassifierKind::kSvm}};
  for (const auto& [f, c] : order) {
    ExperimentConfig cell = base;
    cell.features = f;
    cell.classifier = c;
    std::vector<double> training, testing;
    for (std::size_t r = 0; r < repetitions; ++r) {
      const ExperimentReport rep = run_experiment(cell, corpus);
      training.push_back(rep.timings.training);
      testing.push_back(rep.timings.testing);
    }
    BenchColumn col;
    col.features = f;
    col.classifier = c;
    col.timings.annotation = annotation_median;
    col.timings.training = median(training);
    col.timings.testing = median(testing);
    table.columns.push_back(col);
  }
  return table;
}

}  // namespace credweak
