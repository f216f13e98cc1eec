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

#include <algorithm>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "credweak/config.hpp"
#include "credweak/experiment.hpp"
#include "credweak/report.hpp"
#include "oracles.hpp"

namespace credweak {
namespace {

ExperimentConfig fast_config(FeatureKind f, ClassifierKind c) {
  ExperimentConfig cfg;
  cfg.features = f;
  cfg.classifier = c;
  cfg.embedding.dim = 16;
  cfg.embedding.epochs = 3;
  return cfg;
}

const Corpus& planted(double signal) {
  static const Corpus strong = synthesize_corpus(testing::planted_spec(0.9, 2, 500));
  static const Corpus weak = synthesize_corpus(testing::planted_spec(0.1, 2, 500));
  static const Corpus none = synthesize_corpus(testing::planted_spec(0.0, 2, 500));
  return signal >= 0.9 ? strong : signal > 0 ? weak : none;
}

const std::pair<FeatureKind, ClassifierKind> kCombos[] = {{FeatureKind::kTfIdf, ClassifierKind::kNaiveBayes},
                                                          {FeatureKind::kEmbedding, ClassifierKind::kNaiveBayes},
                                                          {FeatureKind::kTfIdf, ClassifierKind::kSvm},
                                                          {FeatureKind::kEmbedding, ClassifierKind::kSvm}};

TEST(Experiment, PlantedSignalRecoveredByEveryCombination) {
  for (const auto& [f, c] : kCombos) {
    const ExperimentReport strong = run_experiment(fast_config(f, c), planted(0.9));
    const ExperimentReport weak = run_experiment(fast_config(f, c), planted(0.1));
    EXPECT_GE(strong.accuracy, 0.85) << cell_name(strong.config);
    EXPECT_GT(strong.accuracy, weak.accuracy) << cell_name(strong.config);
  }
}

TEST(Experiment, ReportInvariants) {
  const ExperimentReport r = run_experiment(fast_config(FeatureKind::kTfIdf, ClassifierKind::kNaiveBayes), planted(0.9));
  EXPECT_EQ(r.confusion.total(), r.n_test);
  EXPECT_EQ(r.predictions.size(), r.n_test);
  EXPECT_EQ(r.n_train + r.n_test + r.unjudged, planted(0.9).reviews.size());
  EXPECT_EQ(r.trusted + r.distrusted + r.unjudged, planted(0.9).reviews.size());
  EXPECT_GE(r.accuracy, 0.0);
  EXPECT_LE(r.accuracy, 1.0);
  EXPECT_EQ(r.accuracy, static_cast<double>(r.confusion.correct()) / static_cast<double>(r.n_test));
  EXPECT_GE(r.timings.annotation, 0.0);
  EXPECT_GE(r.timings.training, 0.0);
  EXPECT_GE(r.timings.testing, 0.0);
  std::size_t per_movie = 0;
  for (const auto& [m, conf] : r.per_movie) per_movie += conf.total();
  EXPECT_EQ(per_movie, r.n_test);
}

TEST(Experiment, ReproducibleBitForBit) {
  for (const auto& [f, c] : kCombos) {
    const ExperimentConfig cfg = fast_config(f, c);
    const ExperimentReport a = run_experiment(cfg, planted(0.9)), b = run_experiment(cfg, planted(0.9));
    EXPECT_EQ(a.accuracy, b.accuracy);
    EXPECT_EQ(a.split, b.split);
    ASSERT_EQ(a.predictions.size(), b.predictions.size());
    for (std::size_t i = 0; i < a.predictions.size(); ++i) {
      EXPECT_EQ(a.predictions[i].score, b.predictions[i].score);
      EXPECT_EQ(a.predictions[i].verdict, b.predictions[i].verdict);
    }
    EXPECT_EQ(a.feature_model.to_json().dump(), b.feature_model.to_json().dump());
    EXPECT_EQ(a.classifier_model.to_json().dump(), b.classifier_model.to_json().dump());
  }
}

// Dropping a test review from the corpus must not change anything fitted.
TEST(Experiment, NoTestLeakageIntoFeatureModels) {
  const Corpus& corpus = planted(0.9);
  for (FeatureKind f : {FeatureKind::kTfIdf, FeatureKind::kEmbedding}) {
    const ExperimentConfig cfg = fast_config(f, ClassifierKind::kNaiveBayes);
    const AnnotationResult labels = annotate(corpus, cfg.criterion);
    const Corpus judged =
        corpus.subset([&](const Review& r) { return labels.verdict(r.review_id) != Verdict::kUnjudged; });
    const Split split = split_corpus(judged, cfg.test_fraction, cfg.seed);
    ExperimentReport full;
    learn_and_evaluate(cfg, judged, labels, split, full);
    for (std::size_t k = 0; k < 5; ++k) {
      const std::string dropped = split.test[k * split.test.size() / 5];
      const Corpus fewer = judged.subset([&](const Review& r) { return r.review_id != dropped; });
      Split reduced = split;
      std::erase(reduced.test, dropped);
      ExperimentReport r;
      learn_and_evaluate(cfg, fewer, labels, reduced, r);
      if (f == FeatureKind::kTfIdf) {
        EXPECT_EQ(r.feature_model.tfidf, full.feature_model.tfidf);
        EXPECT_EQ(r.feature_model.tfidf.tokens(), full.feature_model.tfidf.tokens());
        EXPECT_EQ(r.feature_model.tfidf.doc_freq(), full.feature_model.tfidf.doc_freq());
      } else {
        EXPECT_EQ(r.feature_model.embedding, full.feature_model.embedding);
      }
    }
  }
}

TEST(Experiment, ShuffledLabelsGiveChance) {
  // 2,000 reviews, balanced archetypes.
  const Corpus corpus = synthesize_corpus(testing::planted_spec(0.9, 2, 1000, 11));
  for (const auto& [f, c] : kCombos) {
    ExperimentConfig cfg = fast_config(f, c);
    cfg.shuffle_labels = true;
    const ExperimentReport r = run_experiment(cfg, corpus);
    EXPECT_NEAR(r.accuracy, 0.5, 0.05) << cell_name(cfg);
  }
}

TEST(Experiment, MemorizingClassifierScoresOneOnTrainingSet) {
  ExperimentConfig cfg = fast_config(FeatureKind::kTfIdf, ClassifierKind::kSvm);
  cfg.svm.gamma = 50.0;
  cfg.svm.C = 1e3;
  cfg.evaluate_on_training = true;
  const ExperimentReport r = run_experiment(cfg, planted(0.0));
  EXPECT_EQ(r.accuracy, 1.0);
  EXPECT_EQ(r.n_test, r.n_train);
}

TEST(Experiment, SingleClassSplitIsAnError) {
  SynthSpec spec = testing::planted_spec(0.9, 2, 100);
  spec.fraction_always_max = 0;
  spec.fraction_always_min = 0;
  spec.fraction_discriminating = 1;
  const Corpus corpus = synthesize_corpus(spec);
  try {
    run_experiment(fast_config(FeatureKind::kTfIdf, ClassifierKind::kNaiveBayes), corpus);
    FAIL() << "expected a validation error";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("0 distrusted"), std::string::npos) << e.what();
  }
}

TEST(Experiment, MovieFilter) {
  ExperimentConfig cfg = fast_config(FeatureKind::kTfIdf, ClassifierKind::kNaiveBayes);
  cfg.movies = {"movie02"};
  const ExperimentReport r = run_experiment(cfg, planted(0.9));
  ASSERT_EQ(r.per_movie.size(), 1u);
  EXPECT_EQ(r.per_movie.begin()->first, "movie02");
  cfg.movies = {"movie99"};
  EXPECT_THROW(run_experiment(cfg, planted(0.9)), ValidationError);
}

TEST(Comparison, RelativeImprovementArithmetic) {
  EXPECT_NEAR(relative_improvement(0.526, 0.506), 3.95, 0.01);
  EXPECT_NEAR(relative_improvement(0.526, 0.506), 3.9, 0.1);
  EXPECT_EQ(relative_improvement(0.7, 0.7), 0.0);
  EXPECT_THROW(relative_improvement(0.5, 0.0), ValidationError);
}

TEST(Comparison, PairsCellsAndChecksSeeds) {
  const ExperimentConfig cfg = fast_config(FeatureKind::kTfIdf, ClassifierKind::kNaiveBayes);
  const ComparisonReport cmp = run_comparison({cfg}, planted(0.9));
  ASSERT_EQ(cmp.rows.size(), 1u);
  const ComparisonRow& row = cmp.rows[0];
  EXPECT_EQ(row.historical.config.criterion, Criterion::kHistoricalCredibility);
  EXPECT_EQ(row.helpfulness.config.criterion, Criterion::kHelpfulnessVote);
  EXPECT_EQ(row.improvement_percent, relative_improvement(row.historical.accuracy, row.helpfulness.accuracy));

  EXPECT_EQ(compare_reports(row.historical, row.historical).improvement_percent, 0.0);
  ExperimentReport other = row.helpfulness;
  other.config.seed += 1;
  EXPECT_THROW(compare_reports(row.historical, other), ValidationError);
  other = row.helpfulness;
  other.config.keywords = 5;
  EXPECT_THROW(compare_reports(row.historical, other), ValidationError);
}

TEST(Comparison, MatrixShape) {
  const auto cells = expand_matrix(ExperimentConfig{}, {FeatureKind::kTfIdf, FeatureKind::kEmbedding},
                                   {ClassifierKind::kNaiveBayes, ClassifierKind::kSvm},
                                   {Criterion::kHistoricalCredibility, Criterion::kHelpfulnessVote}, {});
  EXPECT_EQ(cells.size(), 8u);
  EXPECT_EQ(expand_matrix(ExperimentConfig{}, {}, {}, {}, {{"a"}, {"b", "c"}}).size(), 2u);
}

TEST(Bench, MedianAndSharedAnnotation) {
  EXPECT_EQ(median({3.0, 1.0, 2.0}), 2.0);
  EXPECT_EQ(median({4.0, 1.0}), 2.5);
  EXPECT_THROW(median({}), ValidationError);
  ExperimentConfig cfg = fast_config(FeatureKind::kTfIdf, ClassifierKind::kNaiveBayes);
  const Corpus corpus = synthesize_corpus(testing::planted_spec(0.9, 2, 150));
  const BenchTable t = bench_timings(cfg, corpus, 1);
  ASSERT_EQ(t.columns.size(), 4u);
  for (const BenchColumn& c : t.columns) {
    EXPECT_EQ(c.timings.annotation, t.columns[0].timings.annotation);
    EXPECT_GT(c.timings.total(), 0.0);
    EXPECT_GE(c.annotation_share(), 0.0);
    EXPECT_LE(c.annotation_share(), 1.0);
  }
  EXPECT_THROW(bench_timings(cfg, corpus, 0), ValidationError);
  const std::string md = bench_to_markdown(t);
  for (const char* row : {"| Annotation |", "| Training |", "| Testing |", "| Total |"}) {
    EXPECT_NE(md.find(row), std::string::npos) << row;
  }
}

TEST(Report, CsvHasOneRowPerCellAndParsesBack) {
  std::vector<ExperimentReport> reports;
  for (const auto& [f, c] : kCombos) {
    if (f == FeatureKind::kEmbedding) continue;
    reports.push_back(run_experiment(fast_config(f, c), planted(0.9)));
  }
  const std::string csv = reports_to_csv(reports);
  std::istringstream in(csv);
  const auto rows = parse_csv(in);
  ASSERT_EQ(rows.size(), reports.size() + 1);
  EXPECT_EQ(rows[0], report_csv_columns());
  for (std::size_t i = 1; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i].size(), report_csv_columns().size());
    EXPECT_EQ(std::stod(rows[i][10]), reports[i - 1].accuracy);
  }
  EXPECT_NE(summarize_csv(rows).find(cell_name(reports[0].config)), std::string::npos);
}

TEST(Report, CsvQuoting) {
  EXPECT_EQ(csv_field("plain"), "plain");
  EXPECT_EQ(csv_field("a,b"), "\"a,b\"");
  std::istringstream in(join_csv({"x\"y", "a,b", ""}));
  EXPECT_EQ(parse_csv(in)[0], (std::vector<std::string>{"x\"y", "a,b", ""}));
  EXPECT_EQ(format_real(0.1), "0.1");
  EXPECT_EQ(std::stod(format_real(1.0 / 3.0)), 1.0 / 3.0);
}

TEST(Config, ParsesAllSections) {
  const auto j = nlohmann::json::parse(R"({
    "corpus": {"reviews": "r.jsonl", "histories": "/abs/h.jsonl", "max_text_len": 200},
    "seed": 3, "test_fraction": 0.25, "criterion": "helpfulness",
    "features": {"kind": "embedding", "keywords": 10, "tf_mode": "augmented", "embedding": {"dim": 8}},
    "classifier": {"kind": "svm", "svm": {"C": 2.0, "gamma": 0.5}, "nb": {"alpha": 0.5}},
    "movies": ["m1"],
    "matrix": {"features": ["tfidf", "embedding"], "classifiers": ["nb", "svm"]},
    "shuffle_labels": true,
    "output": {"dir": "o", "save_models": true}})");
  const RunConfig rc = parse_run_config(j, "/base");
  EXPECT_EQ(rc.reviews, std::filesystem::path("/base/r.jsonl"));
  EXPECT_EQ(*rc.histories, std::filesystem::path("/abs/h.jsonl"));
  EXPECT_EQ(rc.max_text_len, 200u);
  EXPECT_EQ(rc.base.seed, 3u);
  EXPECT_EQ(rc.base.criterion, Criterion::kHelpfulnessVote);
  EXPECT_EQ(rc.base.features, FeatureKind::kEmbedding);
  EXPECT_EQ(rc.base.embedding.dim, 8u);
  EXPECT_EQ(rc.base.tf_mode, TfMode::kAugmented);
  EXPECT_EQ(rc.base.svm.C, 2.0);
  EXPECT_EQ(*rc.base.svm.gamma, 0.5);
  EXPECT_EQ(rc.base.nb_alpha, 0.5);
  EXPECT_TRUE(rc.base.shuffle_labels);
  EXPECT_EQ(rc.output_dir, std::filesystem::path("/base/o"));
  EXPECT_EQ(rc.cells().size(), 4u);
}

TEST(Config, RejectsInvalidDocuments) {
  const auto bad = [](const char* text) { return parse_run_config(nlohmann::json::parse(text)); };
  EXPECT_THROW(bad(R"({})"), ValidationError);
  EXPECT_THROW(bad(R"({"corpus": {"reviews": "r"}, "colour": 1})"), ValidationError);
  EXPECT_THROW(bad(R"({"corpus": {"reviews": "r"}, "criterion": "stars"})"), ValidationError);
  EXPECT_THROW(bad(R"({"corpus": {"reviews": "r"}, "test_fraction": 1.5})"), ValidationError);
  EXPECT_THROW(bad(R"({"corpus": {"reviews": "r"}, "features": {"kind": "bert"}})"), ValidationError);
  EXPECT_THROW(bad(R"({"corpus": {"reviews": "r"}, "seed": "seven"})"), ValidationError);
  EXPECT_THROW(bad(R"({"corpus": {"reviews": "r"}, "classifier": {"svm": {"C": -1}}})"), ValidationError);
}

}  // namespace
}  // namespace credweak
