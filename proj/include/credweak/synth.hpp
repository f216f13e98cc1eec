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

// Synthetic review corpora with planted structure.
//
// Reviewers come in three archetypes: always_max (every rating at the top of
// the scale), always_min (every rating at the bottom) and discriminating
// (ratings spread over the scale). Review text is drawn from a neutral
// vocabulary and from one of two class vocabularies: the "distrusted" pool for
// the two extreme archetypes, the "trusted" pool for discriminating
// reviewers. signal_strength is the probability that a token comes from the
// class pool rather than the neutral pool, so at 0 the text carries no
// information about the reviewer's archetype.

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "credweak/common.hpp"
#include "credweak/corpus.hpp"

namespace credweak {

enum class Archetype { kAlwaysMax, kAlwaysMin, kDiscriminating };

struct SynthSpec {
  int movies = 5;
  int reviews_per_movie = 1600;
  std::vector<std::string> genres = {"drama", "drama", "drama", "comedy", "action"};
  double fraction_always_max = 0.25;
  double fraction_always_min = 0.25;
  double fraction_discriminating = 0.5;
  int signal_vocab = 150;   // words per class pool
  int neutral_vocab = 300;  // words in the shared pool
  double signal_strength = 0.9;
  std::uint64_t seed = 7;
  int max_reviews_per_reviewer = 3;  // in-corpus reviews per reviewer, drawn in [1, max]
  int max_history = 12;              // history length drawn in [2, max]
  double singleton_fraction = 0.05;  // share of one-review reviewers with a single rating
  double vote_agreement = 0.8;       // P(helpfulness votes agree with the archetype)
  std::size_t max_text_len = kDefaultMaxTextLength;
  std::size_t min_text_len = 40;

  void validate() const {
    const double sum = fraction_always_max + fraction_always_min + fraction_discriminating;
    if (std::abs(sum - 1.0) > 1e-9) {
      throw ValidationError("archetype fractions sum to " + std::to_string(sum) + ", expected 1");
    }
    if (fraction_always_max < 0 || fraction_always_min < 0 || fraction_discriminating < 0) {
      throw ValidationError("archetype fractions must be non-negative");
    }
    if (movies < 1 || reviews_per_movie < 1) throw ValidationError("movies and reviews_per_movie must be >= 1");
    if (genres.empty()) throw ValidationError("genres must be non-empty");
    if (signal_vocab < 1 || neutral_vocab < 1) throw ValidationError("vocabulary sizes must be >= 1");
    if (!(signal_strength >= 0.0 && signal_strength <= 1.0)) throw ValidationError("signal_strength must lie in [0, 1]");
    if (max_reviews_per_reviewer < 1) throw ValidationError("max_reviews_per_reviewer must be >= 1");
    if (max_history < 2) throw ValidationError("max_history must be >= 2");
    if (!(singleton_fraction >= 0.0 && singleton_fraction <= 1.0)) throw ValidationError("singleton_fraction must lie in [0, 1]");
    if (!(vote_agreement >= 0.0 && vote_agreement <= 1.0)) throw ValidationError("vote_agreement must lie in [0, 1]");
    if (max_text_len < 8 || min_text_len > max_text_len) throw ValidationError("invalid text length bounds");
  }
};

inline SynthSpec parse_synth_spec(const nlohmann::json& j) {
  if (!j.is_object()) throw ValidationError("synth spec must be a JSON object");
  SynthSpec s;
  for (const auto& item : j.items()) {
    const std::string& k = item.key();
    const nlohmann::json& v = item.value();
    try {
      if (k == "movies") s.movies = v.get<int>();
      else if (k == "reviews_per_movie") s.reviews_per_movie = v.get<int>();
      else if (k == "genres") s.genres = v.get<std::vector<std::string>>();
      else if (k == "fractions") {
        s.fraction_always_max = v.at("always_max").get<double>();
        s.fraction_always_min = v.at("always_min").get<double>();
        s.fraction_discriminating = v.at("discriminating").get<double>();
      }
      else if (k == "signal_vocab") s.signal_vocab = v.get<int>();
      else if (k == "neutral_vocab") s.neutral_vocab = v.get<int>();
      else if (k == "signal_strength") s.signal_strength = v.get<double>();
      else if (k == "seed") s.seed = v.get<std::uint64_t>();
      else if (k == "max_reviews_per_reviewer") s.max_reviews_per_reviewer = v.get<int>();
      else if (k == "max_history") s.max_history = v.get<int>();
      else if (k == "singleton_fraction") s.singleton_fraction = v.get<double>();
      else if (k == "vote_agreement") s.vote_agreement = v.get<double>();
      else if (k == "max_text_len") s.max_text_len = v.get<std::size_t>();
      else if (k == "min_text_len") s.min_text_len = v.get<std::size_t>();
      else throw ValidationError("unknown synth spec key '" + k + "'");
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError("synth spec key '" + k + "': " + e.what());
    }
  }
  s.validate();
  return s;
}

namespace detail {

// Pronounceable pseudo-word for a non-negative id: base-70 digits rendered
// as consonant-vowel syllables, at least two syllables. Distinct ids give
// distinct words.
inline std::string pseudo_word(std::size_t id) {
  static constexpr std::string_view kConsonants = "bdfghjklmnprst";
  static constexpr std::string_view kVowels = "aeiou";
  constexpr std::size_t kBase = kConsonants.size() * kVowels.size();
  std::vector<std::size_t> digits;
  do {
    digits.push_back(id % kBase);
    id /= kBase;
  } while (id > 0);
  if (digits.size() < 2) digits.push_back(0);
  std::string word;
  for (auto it = digits.rbegin(); it != digits.rend(); ++it) {
    word += kConsonants[*it / kVowels.size()];
    word += kVowels[*it % kVowels.size()];
  }
  return word;
}

inline std::string zero_pad(std::size_t value, int width) {
  std::string s = std::to_string(value);
  if (static_cast<int>(s.size()) < width) s.insert(0, static_cast<std::size_t>(width) - s.size(), '0');
  return s;
}

}  // namespace detail

struct SynthVocabulary {
  std::vector<std::string> neutral;
  std::vector<std::string> trusted;
  std::vector<std::string> distrusted;
};

inline SynthVocabulary synth_vocabulary(const SynthSpec& spec) {
  SynthVocabulary v;
  std::size_t id = 0;
  for (int i = 0; i < spec.neutral_vocab; ++i) v.neutral.push_back(detail::pseudo_word(id++));
  for (int i = 0; i < spec.signal_vocab; ++i) v.trusted.push_back(detail::pseudo_word(id++));
  for (int i = 0; i < spec.signal_vocab; ++i) v.distrusted.push_back(detail::pseudo_word(id++));
  return v;
}

inline Corpus synthesize_corpus(const SynthSpec& spec) {
  spec.validate();
  const SynthVocabulary vocab = synth_vocabulary(spec);
  Rng rng(derive_seed(spec.seed, "synth"));
  Corpus corpus;

  std::vector<std::string> movie_ids;
  for (int m = 0; m < spec.movies; ++m) movie_ids.push_back("movie" + detail::zero_pad(m + 1, 2));

  // Slots are visited movie-interleaved so consecutive reviews of one
  // reviewer land on different movies.
  const std::size_t total = static_cast<std::size_t>(spec.movies) * spec.reviews_per_movie;
  corpus.reviews.reserve(total);
  std::vector<std::vector<Review>> per_movie(spec.movies);

  const auto draw_text = [&](bool distrusted) {
    const std::vector<std::string>& pool = distrusted ? vocab.distrusted : vocab.trusted;
    const auto target = static_cast<std::size_t>(
        rng.between(static_cast<std::int64_t>(spec.min_text_len), static_cast<std::int64_t>(spec.max_text_len)));
    std::string text;
    for (;;) {
      const std::string& word = rng.bernoulli(spec.signal_strength) ? pool[rng.below(pool.size())]
                                                                    : vocab.neutral[rng.below(vocab.neutral.size())];
      const std::size_t extra = text.empty() ? word.size() : word.size() + 1;
      if (text.size() + extra > target) break;
      if (!text.empty()) text += ' ';
      text += word;
    }
    if (!text.empty()) text[0] = static_cast<char>(text[0] - 'a' + 'A');
    if (text.size() < spec.max_text_len) text += '.';
    return text;
  };

  const auto draw_votes = [&](bool distrusted, Review& r) {
    const bool agree = rng.bernoulli(spec.vote_agreement);
    const bool helpful_wins = distrusted ? !agree : agree;
    if (helpful_wins) {
      r.unhelpful = rng.between(0, 5);
      r.helpful = r.unhelpful + rng.between(1, 5);
    } else {
      r.helpful = rng.between(0, 5);
      r.unhelpful = r.helpful + rng.between(0, 5);
    }
  };

  std::size_t slot = 0;
  std::size_t reviewer_index = 0;
  while (slot < total) {
    const std::string reviewer_id = "user" + detail::zero_pad(++reviewer_index, 6);
    const double u = rng.unit();
    const Archetype archetype = u < spec.fraction_always_max ? Archetype::kAlwaysMax
                                : u < spec.fraction_always_max + spec.fraction_always_min
                                    ? Archetype::kAlwaysMin
                                    : Archetype::kDiscriminating;
    const auto in_corpus = static_cast<std::size_t>(
        std::min<std::int64_t>(rng.between(1, spec.max_reviews_per_reviewer), static_cast<std::int64_t>(total - slot)));
    std::size_t length = 0;
    if (in_corpus == 1 && rng.bernoulli(spec.singleton_fraction)) {
      length = 1;
    } else {
      const std::int64_t lo = std::max<std::int64_t>(2, static_cast<std::int64_t>(in_corpus));
      const std::int64_t hi = std::max<std::int64_t>(spec.max_history, lo);
      length = static_cast<std::size_t>(rng.between(lo, hi));
    }

    ReviewerHistory history;
    history.reviewer_id = reviewer_id;
    for (std::size_t i = 0; i < length; ++i) {
      switch (archetype) {
        case Archetype::kAlwaysMax:
          history.ratings.push_back(corpus.scale_max);
          break;
        case Archetype::kAlwaysMin:
          history.ratings.push_back(corpus.scale_min);
          break;
        case Archetype::kDiscriminating:
          history.ratings.push_back(static_cast<int>(rng.between(corpus.scale_min, corpus.scale_max)));
          break;
      }
    }
    if (archetype == Archetype::kDiscriminating && length >= 2 &&
        std::all_of(history.ratings.begin(), history.ratings.end(),
                    [&](int x) { return x == history.ratings.front(); })) {
      int& last = history.ratings.back();
      last = last == corpus.scale_max ? corpus.scale_min : last + 1;
    }

    const bool distrusted = archetype != Archetype::kDiscriminating;
    for (std::size_t i = 0; i < in_corpus; ++i, ++slot) {
      const std::size_t movie = slot % spec.movies;
      Review r;
      r.movie_id = movie_ids[movie];
      r.review_id = r.movie_id + "-" + detail::zero_pad(per_movie[movie].size() + 1, 5);
      r.reviewer_id = reviewer_id;
      r.genre = spec.genres[movie % spec.genres.size()];
      r.rating = history.ratings[i];
      r.text = draw_text(distrusted);
      draw_votes(distrusted, r);
      per_movie[movie].push_back(std::move(r));
    }
    corpus.histories.emplace(reviewer_id, std::move(history));
  }
  for (auto& reviews : per_movie) {
    for (Review& r : reviews) corpus.reviews.push_back(std::move(r));
  }
  return corpus;
}

}  // namespace credweak
