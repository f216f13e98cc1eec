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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "credweak/credweak.hpp"
#include "oracles.hpp"

namespace credweak {
namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
  void note(const std::string& what) { detail += (detail.empty() ? "" : "; ") + what; }
};

std::string fmt(double v, int digits = 4) { return format_fixed(v, digits); }

const Corpus& reference_corpus() {
  static const Corpus c = synthesize_corpus(testing::planted_spec(0.9, 5, 1600, 7));
  return c;
}

std::vector<TokenizedReview> all_keywords(const Corpus& c) {
  std::vector<TokenizedReview> docs;
  for (const Review& r : c.reviews) docs.push_back(extract_keywords(r.review_id, r.text));
  return docs;
}

const std::pair<FeatureKind, ClassifierKind> kCombos[] = {{FeatureKind::kTfIdf, ClassifierKind::kNaiveBayes},
                                                          {FeatureKind::kEmbedding, ClassifierKind::kNaiveBayes},
                                                          {FeatureKind::kTfIdf, ClassifierKind::kSvm},
                                                          {FeatureKind::kEmbedding, ClassifierKind::kSvm}};

ExperimentConfig combo(FeatureKind f, ClassifierKind c) {
  ExperimentConfig cfg;
  cfg.features = f;
  cfg.classifier = c;
  cfg.seed = 7;
  return cfg;
}

Outcome annotation_throughput() {
  Outcome o;
  const Corpus& c = reference_corpus();
  std::vector<double> times;
  for (int i = 0; i < 3; ++i) times.push_back(annotate(c, Criterion::kHistoricalCredibility).elapsed);
  const double t = median(times);
  o.require(c.reviews.size() == 8000, "corpus size " + std::to_string(c.reviews.size()));
  o.require(t < 1.0, "annotation took " + fmt(t) + " s");
  const BenchTable table = bench_timings(combo(FeatureKind::kEmbedding, ClassifierKind::kSvm), c, 1);
  const BenchColumn& col = table.columns.back();
  o.require(col.features == FeatureKind::kEmbedding && col.classifier == ClassifierKind::kSvm, "column order");
  o.require(col.annotation_share() < 0.01, "annotation share " + fmt(100 * col.annotation_share()) + "%");
  o.note("8000 reviews annotated in " + fmt(t, 6) + " s; embedding+SVM share " +
         fmt(100 * col.annotation_share(), 4) + "% of " + fmt(col.timings.total(), 2) + " s");
  return o;
}

Outcome labeling_oracle() {
  Outcome o;
  std::mt19937_64 gen(20240601);
  int mismatches = 0, singletons = 0, bad_singletons = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto r = testing::random_history(gen, 1, 10);
    const Verdict got = label_historical(std::span<const int>(r), 1, 10);
    mismatches += got != testing::historical_oracle(r, 1, 10);
    if (r.size() == 1) {
      ++singletons;
      bad_singletons += got != Verdict::kUnjudged;
    }
  }
  std::uniform_int_distribution<std::int64_t> votes(0, 100);
  int antisymmetry = 0;
  for (int i = 0; i < 1000; ++i) {
    const std::int64_t h = votes(gen), u = votes(gen);
    const bool ok = h == u ? label_helpfulness(h, u) == Verdict::kDistrusted
                           : label_helpfulness(h, u) != label_helpfulness(u, h);
    antisymmetry += !ok;
  }
  o.require(mismatches == 0, std::to_string(mismatches) + " oracle mismatches");
  o.require(bad_singletons == 0, std::to_string(bad_singletons) + " singletons judged");
  o.require(antisymmetry == 0, std::to_string(antisymmetry) + " antisymmetry failures");
  o.note("1000 histories (" + std::to_string(singletons) + " singletons), 1000 vote pairs");
  return o;
}

Outcome tfidf_exactness() {
  Outcome o;
  std::vector<TokenizedReview> docs{select_keywords({"a", "b", "a"}, 20), select_keywords({"b", "c"}, 20)};
  docs[0].review_id = "d1";
  docs[1].review_id = "d2";
  const TfIdfModel m = fit_tfidf(docs, TfMode::kAugmented);
  const double w = m.transform(docs[0]).at(static_cast<std::size_t>(m.index_of("a")));
  o.require(std::abs(w - std::numbers::ln2) <= 1e-12, "weight(a, d1) = " + format_real(w));
  o.require(m.idf(static_cast<std::size_t>(m.index_of("b"))) == 0.0, "IDF of universal token is not 0");
  std::mt19937_64 gen(3);
  int out_of_range = 0;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::string> tokens;
    const int n = 1 + static_cast<int>(gen() % 40);
    for (int i = 0; i < n; ++i) tokens.push_back("t" + std::to_string(gen() % 15));
    const TokenizedReview d = select_keywords(tokens, 20);
    const std::uint32_t mx = *std::max_element(d.counts.begin(), d.counts.end());
    for (std::uint32_t c : d.counts) {
      const double tf = term_frequency(TfMode::kAugmented, c, mx);
      out_of_range += !(tf > 0.5 && tf <= 1.0);
    }
  }
  o.require(out_of_range == 0, std::to_string(out_of_range) + " TF values outside (0.5, 1]");
  o.note("weight(a, d1) - ln 2 = " + format_real(w - std::numbers::ln2));
  return o;
}

double gradient_error(std::mt19937_64& gen) {
  const std::size_t vocab = 2 + gen() % 19, dim = 1 + gen() % 8;
  std::normal_distribution<double> w(0.0, 0.5);
  std::vector<double> input(vocab * dim), output(vocab * dim);
  for (double& x : input) x = w(gen);
  for (double& x : output) x = w(gen);
  TrainingExample ex;
  ex.inputs.push_back(static_cast<std::uint32_t>(gen() % vocab));
  ex.targets.push_back({static_cast<std::uint32_t>(gen() % vocab), true});
  for (std::size_t k = 0, n = gen() % 6; k < n; ++k) {
    ex.targets.push_back({static_cast<std::uint32_t>(gen() % vocab), false});
  }
  std::vector<double> gi(input.size(), 0.0), go(output.size(), 0.0);
  example_loss(input, output, dim, ex, gi, go);
  double diff = 0, na = 0, nn = 0;
  const auto check = [&](std::vector<double>& p, const std::vector<double>& g) {
    for (std::size_t i = 0; i < p.size(); ++i) {
      const double saved = p[i];
      p[i] = saved + 1e-6;
      const double up = example_loss(input, output, dim, ex, {}, {});
      p[i] = saved - 1e-6;
      const double down = example_loss(input, output, dim, ex, {}, {});
      p[i] = saved;
      const double num = (up - down) / 2e-6;
      diff += (g[i] - num) * (g[i] - num);
      na += g[i] * g[i];
      nn += num * num;
    }
  };
  check(input, gi);
  check(output, go);
  return std::sqrt(diff) / (std::sqrt(na) + std::sqrt(nn));
}

Outcome embedding_checks() {
  Outcome o;
  std::mt19937_64 gen(77);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) worst = std::max(worst, gradient_error(gen));
  o.require(worst < 1e-4, "gradient relative error " + format_real(worst));

  EmbeddingParams p;
  p.seed = 7;
  const EmbeddingModel m = train_embeddings(all_keywords(reference_corpus()), p);
  const auto& loss = m.epoch_loss();
  bool decreasing = true;
  for (std::size_t e = 1; e < loss.size(); ++e) decreasing = decreasing && loss[e] < loss[e - 1];
  o.require(decreasing, "epoch loss not strictly decreasing");

  int wins = 0;
  for (std::uint64_t run = 0; run < 20; ++run) {
    EmbeddingParams small;
    small.dim = 16;
    small.epochs = 10;
    small.window = 2;
    small.seed = run;
    wins += testing::planted_pair_wins(train_embeddings(testing::planted_pair_docs(5000 + run, 400), small), run);
  }
  o.require(wins >= 19, "planted pair won " + std::to_string(wins) + "/20");
  o.note("max gradient rel. error " + format_real(worst) + "; loss " + fmt(loss.front()) + " -> " + fmt(loss.back()) +
         "; planted pair won " + std::to_string(wins) + "/20");
  return o;
}

FeatureVector sparse3(double a, double b, double c) {
  std::vector<std::pair<std::uint32_t, double>> e;
  if (a) e.emplace_back(0, a);
  if (b) e.emplace_back(1, b);
  if (c) e.emplace_back(2, c);
  return FeatureVector::sparse("", 3, e);
}

Outcome naive_bayes_checks() {
  Outcome o;
  const std::vector<FeatureVector> xs{sparse3(2, 1, 0), sparse3(1, 0, 1), sparse3(0, 2, 1), sparse3(0, 0, 2)};
  const std::vector<int> ys{1, 1, -1, -1};
  const NaiveBayesModel m = nb_train(xs, ys, NbOptions{});
  // Hand enumeration: theta_T = (1/2, 1/4, 1/4), theta_D = (1/8, 3/8, 1/2).
  const struct {
    FeatureVector x;
    double p_trusted;
  } cases[] = {{sparse3(1, 1, 0), 8.0 / 11.0}, {sparse3(1, 0, 0), 0.8}, {sparse3(0, 0, 1), 1.0 / 3.0},
               {sparse3(0, 1, 1), (1.0 / 16) / (1.0 / 16 + 3.0 / 16)}};
  double worst = 0.0, worst_sum = 0.0;
  for (const auto& c : cases) {
    const auto post = nb_posterior(m, c.x);
    worst = std::max(worst, std::abs(post[0] - c.p_trusted));
    worst_sum = std::max(worst_sum, std::abs(post[0] + post[1] - 1.0));
  }
  o.require(worst <= 1e-9, "posterior error " + format_real(worst));
  o.require(worst_sum <= 1e-12, "posterior sum error " + format_real(worst_sum));

  std::mt19937_64 gen(9);
  bool priors_exact = m.priors[0] == 0.5 && m.priors[1] == 0.5;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + gen() % 20;
    std::vector<FeatureVector> dx;
    std::vector<int> dy;
    for (std::size_t i = 0; i < n; ++i) {
      dx.push_back(FeatureVector::dense("", {static_cast<double>(gen() % 10), static_cast<double>(gen() % 7)}));
      dy.push_back(i == 0 ? 1 : i == 1 ? -1 : ((gen() & 1) ? 1 : -1));
    }
    NbOptions g;
    g.variant = NbVariant::kGaussian;
    const NaiveBayesModel gm = nb_train(dx, dy, g);
    const double pos = static_cast<double>(std::count(dy.begin(), dy.end(), 1));
    priors_exact = priors_exact && gm.priors[0] == pos / static_cast<double>(n) &&
                   gm.priors[1] == (static_cast<double>(n) - pos) / static_cast<double>(n);
    const auto post = nb_posterior(gm, FeatureVector::dense("", {static_cast<double>(gen() % 12), 3.5}));
    worst_sum = std::max(worst_sum, std::abs(post[0] + post[1] - 1.0));
  }
  o.require(priors_exact, "priors differ from class frequencies");
  o.require(worst_sum <= 1e-12, "posterior sum error " + format_real(worst_sum));
  o.note("max posterior error " + format_real(worst) + ", max |sum - 1| " + format_real(worst_sum));
  return o;
}

Outcome svm_checks() {
  Outcome o;
  std::mt19937_64 gen(4242);
  std::normal_distribution<double> coord(0.0, 1.0);
  double worst_gap = 0.0, worst_kkt = 0.0, worst_sum = 0.0;
  const auto audit = [&](const std::vector<FeatureVector>& xs, const std::vector<int>& ys, const SvmOptions& opt,
                         const SvmModel& m, const SvmTrace& tr) {
    worst_kkt = std::max(worst_kkt, svm_kkt_violation(m, xs, ys, tr.alphas));
    double s = 0.0;
    for (std::size_t i = 0; i < ys.size(); ++i) s += tr.alphas[i] * ys[i];
    worst_sum = std::max(worst_sum, std::abs(s));
    o.require(tr.converged, "SMO did not converge");
    (void)opt;
  };
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 2 + gen() % 5, dim = 1 + gen() % 3;
    std::vector<FeatureVector> xs;
    std::vector<int> ys;
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<double> v(dim);
      for (double& x : v) x = coord(gen);
      xs.push_back(FeatureVector::dense("", v));
      ys.push_back(i == 0 ? 1 : i == 1 ? -1 : ((gen() & 1) ? 1 : -1));
    }
    SvmOptions opt;
    opt.C = std::vector<double>{0.1, 1.0, 10.0}[gen() % 3];
    opt.gamma = std::vector<double>{0.3, 1.0, 3.0}[gen() % 3];
    SvmTrace tr;
    const SvmModel m = svm_train(xs, ys, opt, &tr);
    std::vector<std::vector<double>> k(n, std::vector<double>(n)), q = k;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        k[i][j] = gaussian_kernel(xs[i], xs[j], *opt.gamma);
        q[i][j] = ys[i] * ys[j] * k[i][j];
      }
    }
    const auto best = testing::svm_dual_oracle(k, ys, opt.C);
    worst_gap = std::max(worst_gap, std::abs(testing::dual_objective(q, tr.alphas) - best.objective));
    audit(xs, ys, opt, m, tr);
  }
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 20 + gen() % 200;
    std::vector<FeatureVector> xs;
    std::vector<int> ys;
    for (std::size_t i = 0; i < n; ++i) {
      const int y = i == 0 ? 1 : i == 1 ? -1 : ((gen() & 1) ? 1 : -1);
      xs.push_back(FeatureVector::dense("", {coord(gen) + 0.7 * y, coord(gen), coord(gen)}));
      ys.push_back(y);
    }
    SvmOptions opt;
    SvmTrace tr;
    const SvmModel m = svm_train(xs, ys, opt, &tr);
    audit(xs, ys, opt, m, tr);
  }
  const std::vector<FeatureVector> xor_x{FeatureVector::dense("", {0, 0}), FeatureVector::dense("", {1, 1}),
                                         FeatureVector::dense("", {0, 1}), FeatureVector::dense("", {1, 0})};
  const std::vector<int> xor_y{1, 1, -1, -1};
  SvmOptions xo;
  xo.C = 10;
  xo.gamma = 1;
  SvmTrace xt;
  const SvmModel xm = svm_train(xor_x, xor_y, xo, &xt);
  audit(xor_x, xor_y, xo, xm, xt);
  int xor_correct = 0;
  for (std::size_t i = 0; i < 4; ++i) xor_correct += verdict_sign(svm_predict(xm, xor_x[i]).verdict) == xor_y[i];

  o.require(worst_gap <= 1e-3, "dual objective gap " + format_real(worst_gap));
  o.require(worst_kkt <= 1e-3, "KKT violation " + format_real(worst_kkt));
  o.require(xor_correct == 4, "XOR training accuracy " + std::to_string(xor_correct) + "/4");
  o.require(worst_sum <= 1e-6, "|sum alpha y| " + format_real(worst_sum));
  o.note("max objective gap " + format_real(worst_gap) + ", max KKT violation " + format_real(worst_kkt) +
         ", max |sum alpha y| " + format_real(worst_sum) + ", XOR " + std::to_string(xor_correct) + "/4");
  return o;
}

Outcome planted_recovery() {
  Outcome o;
  std::ostringstream accs, shuffled;
  for (const auto& [f, c] : kCombos) {
    ExperimentConfig cfg = combo(f, c);
    const ExperimentReport r = run_experiment(cfg, reference_corpus());
    o.require(r.accuracy >= 0.85, cell_name(cfg) + " accuracy " + fmt(r.accuracy));
    accs << (accs.tellp() ? ", " : "") << feature_kind_name(f) << "+" << classifier_kind_name(c) << " "
         << fmt(r.accuracy);
    cfg.shuffle_labels = true;
    const ExperimentReport s = run_experiment(cfg, reference_corpus());
    o.require(std::abs(s.accuracy - 0.5) <= 0.05, cell_name(cfg) + " shuffled accuracy " + fmt(s.accuracy));
    shuffled << (shuffled.tellp() ? ", " : "") << fmt(s.accuracy);
  }
  o.note("accuracy " + accs.str() + "; shuffled " + shuffled.str());
  return o;
}

Outcome comparison_arithmetic() {
  Outcome o;
  const double imp = relative_improvement(0.526, 0.506);
  o.require(std::abs(imp - 3.9) <= 0.1, "improvement " + fmt(imp));
  o.note("0.526 vs 0.506 -> +" + fmt(imp, 3) + "%");
  return o;
}

Outcome reproducibility() {
  Outcome o;
  const Corpus& c = reference_corpus();
  for (Criterion crit : {Criterion::kHistoricalCredibility, Criterion::kHelpfulnessVote}) {
    std::ostringstream a, b;
    write_labels(a, c, annotate(c, crit));
    write_labels(b, c, annotate(c, crit));
    o.require(a.str() == b.str(), std::string(criterion_name(crit)) + " labels differ");
  }
  for (const auto& [f, k] : kCombos) {
    const ExperimentConfig cfg = combo(f, k);
    const ExperimentReport r1 = run_experiment(cfg, c), r2 = run_experiment(cfg, c);
    o.require(r1.accuracy == r2.accuracy, cell_name(cfg) + " accuracy differs");
    o.require(r1.feature_model.to_json().dump() == r2.feature_model.to_json().dump(),
              cell_name(cfg) + " feature model differs");
    o.require(r1.classifier_model.to_json().dump() == r2.classifier_model.to_json().dump(),
              cell_name(cfg) + " classifier model differs");
  }
  o.note("labels, 4 cells x (accuracy, feature model, classifier model) compared");
  return o;
}

Outcome no_leakage() {
  Outcome o;
  const Corpus& corpus = reference_corpus();
  std::size_t checks = 0;
  for (FeatureKind f : {FeatureKind::kTfIdf, FeatureKind::kEmbedding}) {
    const ExperimentConfig cfg = combo(f, ClassifierKind::kNaiveBayes);
    const AnnotationResult labels = annotate(corpus, cfg.criterion);
    const Corpus judged =
        corpus.subset([&](const Review& r) { return labels.verdict(r.review_id) != Verdict::kUnjudged; });
    const Split split = split_corpus(judged, cfg.test_fraction, cfg.seed);
    ExperimentReport full;
    learn_and_evaluate(cfg, judged, labels, split, full);
    const auto same = [&](const ExperimentReport& r) {
      return f == FeatureKind::kTfIdf ? r.feature_model.tfidf == full.feature_model.tfidf
                                      : r.feature_model.embedding == full.feature_model.embedding;
    };
    // Single-document removals.
    const std::size_t samples = f == FeatureKind::kTfIdf ? 25 : 3;
    for (std::size_t s = 0; s < samples; ++s) {
      const std::string drop = split.test[(s * 7919) % split.test.size()];
      Split reduced = split;
      std::erase(reduced.test, drop);
      ExperimentReport r;
      learn_and_evaluate(cfg, judged.subset([&](const Review& x) { return x.review_id != drop; }), labels,
                         reduced, r);
      o.require(same(r), std::string(feature_kind_name(f)) + " changed after removing " + drop);
      ++checks;
    }
    // Remove every test document except one per class.
    Split kept = split;
    kept.test.clear();
    bool have_t = false, have_d = false;
    for (const std::string& id : split.test) {
      const bool t = labels.verdict(id) == Verdict::kTrusted;
      if ((t && !have_t) || (!t && !have_d)) {
        kept.test.push_back(id);
        (t ? have_t : have_d) = true;
      }
    }
    const std::set<std::string> keep_ids(kept.test.begin(), kept.test.end());
    const std::set<std::string> test_ids(split.test.begin(), split.test.end());
    ExperimentReport r;
    learn_and_evaluate(cfg,
                       judged.subset([&](const Review& x) {
                         return !test_ids.count(x.review_id) || keep_ids.count(x.review_id);
                       }),
                       labels, kept, r);
    o.require(same(r), std::string(feature_kind_name(f)) + " changed after removing the test split");
    ++checks;
  }
  o.note(std::to_string(checks) + " removal audits over vocabulary, IDF table and embedding matrix");
  return o;
}

}  // namespace
}  // namespace credweak

int main() {
  using namespace credweak;
  struct Criterion {
    int id;
    const char* name;
    Outcome (*run)();
  };
  const Criterion criteria[] = {{1, "annotation throughput", annotation_throughput},
                                {2, "labeling oracle", labeling_oracle},
                                {3, "TF-IDF exactness", tfidf_exactness},
                                {4, "embedding gradients and training", embedding_checks},
                                {5, "naive Bayes correctness", naive_bayes_checks},
                                {6, "SVM correctness", svm_checks},
                                {7, "planted-signal recovery", planted_recovery},
                                {8, "comparison arithmetic", comparison_arithmetic},
                                {9, "reproducibility", reproducibility},
                                {10, "no-leakage audit", no_leakage}};
  int failures = 0;
  for (const Criterion& c : criteria) {
    Outcome o;
    const Stopwatch timer;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    failures += !o.pass;
    std::printf("%s criterion %d (%s): %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(),
                timer.seconds());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
