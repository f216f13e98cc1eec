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

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "credweak/naive_bayes.hpp"
#include "oracles.hpp"

namespace credweak {
namespace {

FeatureVector sparse(std::vector<double> counts) {
  std::vector<std::pair<std::uint32_t, double>> e;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] != 0) e.emplace_back(static_cast<std::uint32_t>(i), counts[i]);
  }
  return FeatureVector::sparse("", counts.size(), e);
}

// Vocabulary {a, b, c}. Trusted: {a:2,b:1}, {a:1,c:1}. Distrusted: {b:2,c:1}, {c:2}.
// With alpha = 1: theta_T = (1/2, 1/4, 1/4), theta_D = (1/8, 3/8, 1/2).
struct Tiny {
  std::vector<FeatureVector> xs{sparse({2, 1, 0}), sparse({1, 0, 1}), sparse({0, 2, 1}), sparse({0, 0, 2})};
  std::vector<int> ys{1, 1, -1, -1};
};

TEST(MultinomialNb, HandEnumeratedParameters) {
  Tiny t;
  const NaiveBayesModel m = nb_train(t.xs, t.ys, NbOptions{});
  EXPECT_EQ(m.priors[0], 0.5);
  EXPECT_EQ(m.priors[1], 0.5);
  const double theta_t[] = {0.5, 0.25, 0.25}, theta_d[] = {0.125, 0.375, 0.5};
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_NEAR(std::exp(m.log_likelihood[0][i]), theta_t[i], 1e-12);
    EXPECT_NEAR(std::exp(m.log_likelihood[1][i]), theta_d[i], 1e-12);
  }
}

TEST(MultinomialNb, HandEnumeratedPosteriors) {
  Tiny t;
  const NaiveBayesModel m = nb_train(t.xs, t.ys, NbOptions{});
  // {a:1, b:1}: (1/2 * 1/2 * 1/4) / (1/2 * 1/2 * 1/4 + 1/2 * 1/8 * 3/8) = 8/11.
  const auto post = nb_posterior(m, sparse({1, 1, 0}));
  EXPECT_NEAR(post[0], 8.0 / 11.0, 1e-9);
  EXPECT_NEAR(post[0] + post[1], 1.0, 1e-12);
  // {a:1}: 4 to 1 for Trusted.
  EXPECT_NEAR(nb_posterior(m, sparse({1, 0, 0}))[0], 0.8, 1e-9);
  EXPECT_EQ(nb_predict(m, sparse({1, 0, 0})).verdict, Verdict::kTrusted);
  // {c:1}: 1/4 vs 1/2 -> Distrusted with P(T) = 1/3.
  EXPECT_NEAR(nb_posterior(m, sparse({0, 0, 1}))[0], 1.0 / 3.0, 1e-9);
  EXPECT_EQ(nb_predict(m, sparse({0, 0, 1})).verdict, Verdict::kDistrusted);
}

TEST(MultinomialNb, MatchesProductOracleOnRandomCorpora) {
  std::mt19937_64 gen(17);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t v = 2 + gen() % 6;
    std::vector<FeatureVector> xs;
    std::vector<int> ys;
    std::vector<std::vector<double>> totals(2, std::vector<double>(v, 0.0));
    const std::size_t n = 2 + gen() % 8;
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<double> counts(v);
      for (double& c : counts) c = static_cast<double>(gen() % 4);
      const int y = i == 0 ? 1 : i == 1 ? -1 : ((gen() & 1) ? 1 : -1);
      for (std::size_t t = 0; t < v; ++t) totals[y == 1 ? 0 : 1][t] += counts[t];
      xs.push_back(sparse(counts));
      ys.push_back(y);
    }
    const double alpha = 0.5 + static_cast<double>(gen() % 3);
    NbOptions o;
    o.alpha = alpha;
    const NaiveBayesModel m = nb_train(xs, ys, o);
    const double pos = static_cast<double>(std::count(ys.begin(), ys.end(), 1));
    EXPECT_EQ(m.priors[0], pos / static_cast<double>(n));
    EXPECT_EQ(m.priors[1], (static_cast<double>(n) - pos) / static_cast<double>(n));
    std::vector<double> query(v);
    for (double& q : query) q = static_cast<double>(gen() % 3);
    const double expected =
        testing::multinomial_posterior_oracle(totals, {m.priors[0], m.priors[1]}, query, alpha);
    const auto post = nb_posterior(m, sparse(query));
    EXPECT_NEAR(post[0], expected, 1e-9);
    EXPECT_NEAR(post[0] + post[1], 1.0, 1e-12);
  }
}

// Scaling training weights, alpha and the query by one factor leaves the
// likelihoods unchanged and scales the evidence, so with equal priors the
// decision cannot flip.
TEST(MultinomialNb, ScaleInvarianceWithBalancedPriors) {
  Tiny t;
  const NaiveBayesModel base = nb_train(t.xs, t.ys, NbOptions{});
  for (double s : {0.5, 3.0, 10.0}) {
    std::vector<FeatureVector> scaled;
    for (const FeatureVector& x : t.xs) {
      FeatureVector y = x;
      for (double& v : y.values) v *= s;
      scaled.push_back(y);
    }
    NbOptions o;
    o.alpha = s;
    const NaiveBayesModel m = nb_train(scaled, t.ys, o);
    for (const auto& q : {std::vector<double>{1, 1, 0}, {0, 0, 1}, {2, 0, 1}}) {
      std::vector<double> qs = q;
      for (double& v : qs) v *= s;
      EXPECT_EQ(nb_predict(m, sparse(qs)).verdict, nb_predict(base, sparse(q)).verdict);
      EXPECT_NEAR(nb_predict(m, sparse(qs)).score, s * nb_predict(base, sparse(q)).score, 1e-9);
    }
  }
}

TEST(MultinomialNb, Errors) {
  Tiny t;
  std::vector<int> one_class{1, 1, 1, 1};
  EXPECT_THROW(nb_train(t.xs, one_class, NbOptions{}), ValidationError);
  std::vector<FeatureVector> negative = t.xs;
  negative[0].values[0] = -1;
  EXPECT_THROW(nb_train(negative, t.ys, NbOptions{}), ValidationError);
  NbOptions g;
  g.variant = NbVariant::kGaussian;
  EXPECT_THROW(nb_train(t.xs, t.ys, g), ValidationError);
  const NaiveBayesModel m = nb_train(t.xs, t.ys, NbOptions{});
  EXPECT_THROW(nb_predict(m, sparse({1, 0})), ValidationError);
}

TEST(GaussianNb, HandComputedMoments) {
  const std::vector<FeatureVector> xs{FeatureVector::dense("", {0.0, 1.0}), FeatureVector::dense("", {2.0, 1.0}),
                                      FeatureVector::dense("", {4.0, 3.0}), FeatureVector::dense("", {6.0, 3.0})};
  const std::vector<int> ys{1, 1, -1, -1};
  NbOptions o;
  o.variant = NbVariant::kGaussian;
  const NaiveBayesModel m = nb_train(xs, ys, o);
  EXPECT_EQ(m.mean[0], (std::vector<double>{1.0, 1.0}));
  EXPECT_EQ(m.mean[1], (std::vector<double>{5.0, 3.0}));
  EXPECT_EQ(m.variance[0][0], 1.0);
  EXPECT_EQ(m.variance[0][1], o.epsilon);  // constant feature floored

  // Midway on both dimensions the log joints tie exactly: Distrusted.
  const Prediction mid = nb_predict(m, FeatureVector::dense("", {3.0, 2.0}));
  EXPECT_EQ(mid.score, 0.0);
  EXPECT_EQ(mid.verdict, Verdict::kDistrusted);

  // Direct density product on dimension 0 only.
  NaiveBayesModel one = m;
  one.dim = 1;
  for (auto* v : {&one.mean[0], &one.mean[1], &one.variance[0], &one.variance[1]}) v->resize(1);
  const double x = 2.5;
  const auto pdf = [](double x, double mu, double var) {
    return std::exp(-(x - mu) * (x - mu) / (2 * var)) / std::sqrt(2 * std::numbers::pi * var);
  };
  const double pt = 0.5 * pdf(x, 1, 1), pd = 0.5 * pdf(x, 5, 1);
  EXPECT_NEAR(nb_posterior(one, FeatureVector::dense("", {x}))[0], pt / (pt + pd), 1e-12);
}

TEST(GaussianNb, PriorsAreClassFrequencies) {
  const std::vector<FeatureVector> xs{FeatureVector::dense("", {0.0}), FeatureVector::dense("", {0.1}),
                                      FeatureVector::dense("", {0.2}), FeatureVector::dense("", {5.0})};
  const std::vector<int> ys{1, 1, 1, -1};
  NbOptions o;
  o.variant = NbVariant::kGaussian;
  const NaiveBayesModel m = nb_train(xs, ys, o);
  EXPECT_EQ(m.priors[0], 0.75);
  EXPECT_EQ(m.priors[1], 0.25);
  const auto post = nb_posterior(m, FeatureVector::dense("", {1e6}));
  EXPECT_TRUE(std::isfinite(post[0]));
  EXPECT_NEAR(post[0] + post[1], 1.0, 1e-12);
}

TEST(NaiveBayes, JsonRoundTrip) {
  Tiny t;
  const NaiveBayesModel m = nb_train(t.xs, t.ys, NbOptions{});
  EXPECT_EQ(naive_bayes_from_json(nlohmann::json::parse(to_json(m).dump())), m);
  const std::vector<FeatureVector> xs{FeatureVector::dense("", {0.0}), FeatureVector::dense("", {1.0})};
  NbOptions o;
  o.variant = NbVariant::kGaussian;
  const NaiveBayesModel g = nb_train(xs, std::vector<int>{1, -1}, o);
  EXPECT_EQ(naive_bayes_from_json(nlohmann::json::parse(to_json(g).dump())), g);
}

}  // namespace
}  // namespace credweak
