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

// Review corpora: data model, JSONL ingestion and serialization, and
// stratified train/test splitting.
//
// Reviews file: one JSON object per line with exactly the keys review_id,
// reviewer_id, movie_id, genre, rating, text, helpful, unhelpful.
// Histories file: one JSON object per line with keys reviewer_id, ratings.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <nlohmann/json.hpp>

#include "credweak/common.hpp"
#include "credweak/io.hpp"
#include "credweak/text.hpp"

namespace credweak {

inline constexpr std::size_t kDefaultMaxTextLength = 140;
inline constexpr int kDefaultScaleMin = 1;
inline constexpr int kDefaultScaleMax = 10;

struct Review {
  std::string review_id;
  std::string reviewer_id;
  std::string movie_id;
  std::string genre;
  int rating = 0;
  std::string text;
  std::int64_t helpful = 0;
  std::int64_t unhelpful = 0;

  bool operator==(const Review&) const = default;
};

// The rating multiset of one reviewer. Order carries no meaning.
struct ReviewerHistory {
  std::string reviewer_id;
  std::vector<int> ratings;

  bool operator==(const ReviewerHistory&) const = default;
};

struct Corpus {
  std::vector<Review> reviews;
  std::map<std::string, ReviewerHistory> histories;
  int scale_min = kDefaultScaleMin;
  int scale_max = kDefaultScaleMax;

  bool operator==(const Corpus&) const = default;

  const ReviewerHistory& history(const std::string& reviewer_id) const {
    auto it = histories.find(reviewer_id);
    if (it == histories.end()) throw ValidationError("no history for reviewer '" + reviewer_id + "'");
    return it->second;
  }

  // Movie ids in order of first appearance.
  std::vector<std::string> movies() const {
    std::vector<std::string> out;
    std::unordered_set<std::string> seen;
    for (const Review& r : reviews) {
      if (seen.insert(r.movie_id).second) out.push_back(r.movie_id);
    }
    return out;
  }

  // Same histories and scale, reviews restricted to those matching keep.
  Corpus subset(const std::function<bool(const Review&)>& keep) const {
    Corpus out;
    out.histories = histories;
    out.scale_min = scale_min;
    out.scale_max = scale_max;
    for (const Review& r : reviews) {
      if (keep(r)) out.reviews.push_back(r);
    }
    return out;
  }
};

// Histories built from the in-corpus ratings of each reviewer, across all
// movies, in corpus order.
inline std::map<std::string, ReviewerHistory> derive_histories(const std::vector<Review>& reviews) {
  std::map<std::string, ReviewerHistory> out;
  for (const Review& r : reviews) {
    ReviewerHistory& h = out[r.reviewer_id];
    h.reviewer_id = r.reviewer_id;
    h.ratings.push_back(r.rating);
  }
  return out;
}

// Checks the cross-record invariants: unique review ids, ratings within
// scale, every reviewer has a history at least as long as their in-corpus
// review count.
inline void validate_corpus(const Corpus& corpus) {
  if (corpus.scale_min >= corpus.scale_max) throw ValidationError("scale_min must be below scale_max");
  std::unordered_set<std::string> ids;
  std::unordered_map<std::string, std::size_t> per_reviewer;
  for (const Review& r : corpus.reviews) {
    if (!ids.insert(r.review_id).second) throw ValidationError("duplicate review_id '" + r.review_id + "'");
    if (r.rating < corpus.scale_min || r.rating > corpus.scale_max) {
      throw ValidationError("review '" + r.review_id + "' rating " + std::to_string(r.rating) + " out of scale");
    }
    if (r.helpful < 0 || r.unhelpful < 0) throw ValidationError("review '" + r.review_id + "' has negative votes");
    ++per_reviewer[r.reviewer_id];
  }
  for (const auto& [reviewer, count] : per_reviewer) {
    auto it = corpus.histories.find(reviewer);
    if (it == corpus.histories.end()) throw ValidationError("reviewer '" + reviewer + "' has no history");
    if (it->second.ratings.size() < count) {
      throw ValidationError("history of reviewer '" + reviewer + "' is shorter than their in-corpus review count");
    }
  }
  for (const auto& [reviewer, h] : corpus.histories) {
    if (h.ratings.empty()) throw ValidationError("empty history for reviewer '" + reviewer + "'");
    for (int x : h.ratings) {
      if (x < corpus.scale_min || x > corpus.scale_max) {
        throw ValidationError("history of reviewer '" + reviewer + "' has rating " + std::to_string(x) + " out of scale");
      }
    }
  }
}

namespace detail {

inline const nlohmann::json& require_key(const nlohmann::json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ValidationError(std::string("missing key '") + key + "'");
  return *it;
}

inline std::string require_string(const nlohmann::json& obj, const char* key) {
  const nlohmann::json& v = require_key(obj, key);
  if (!v.is_string()) throw ValidationError(std::string("key '") + key + "' must be a string");
  return v.get<std::string>();
}

inline std::int64_t require_integer(const nlohmann::json& obj, const char* key) {
  const nlohmann::json& v = require_key(obj, key);
  if (!v.is_number_integer()) throw ValidationError(std::string("key '") + key + "' must be an integer");
  return v.get<std::int64_t>();
}

template <typename Fn>
void for_each_line(std::istream& in, Fn&& fn) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    try {
      fn(line, line_no);
    } catch (const Error& e) {
      throw ValidationError("line " + std::to_string(line_no) + ": " + e.what());
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError("line " + std::to_string(line_no) + ": malformed JSON: " + e.what());
    }
  }
}

}  // namespace detail

inline Review parse_review(const std::string& line, std::size_t max_text_len,
                           int scale_min = kDefaultScaleMin, int scale_max = kDefaultScaleMax) {
  static const std::set<std::string> kKeys = {"review_id", "reviewer_id", "movie_id", "genre",
                                              "rating",    "text",        "helpful",  "unhelpful"};
  const nlohmann::json obj = nlohmann::json::parse(line);
  if (!obj.is_object()) throw ValidationError("record is not a JSON object");
  for (const auto& item : obj.items()) {
    if (!kKeys.count(item.key())) throw ValidationError("unexpected key '" + item.key() + "'");
  }
  Review r;
  r.review_id = detail::require_string(obj, "review_id");
  r.reviewer_id = detail::require_string(obj, "reviewer_id");
  r.movie_id = detail::require_string(obj, "movie_id");
  r.genre = detail::require_string(obj, "genre");
  r.text = detail::require_string(obj, "text");
  const std::int64_t rating = detail::require_integer(obj, "rating");
  r.helpful = detail::require_integer(obj, "helpful");
  r.unhelpful = detail::require_integer(obj, "unhelpful");
  if (r.review_id.empty() || r.reviewer_id.empty() || r.movie_id.empty()) {
    throw ValidationError("review_id, reviewer_id and movie_id must be non-empty");
  }
  if (rating < scale_min || rating > scale_max) {
    throw ValidationError("rating " + std::to_string(rating) + " outside [" + std::to_string(scale_min) + ", " +
                          std::to_string(scale_max) + "]");
  }
  r.rating = static_cast<int>(rating);
  if (r.helpful < 0 || r.unhelpful < 0) throw ValidationError("vote counts must be non-negative");
  const std::size_t len = utf8::length(r.text);
  if (len > max_text_len) {
    throw ValidationError("text of " + std::to_string(len) + " characters exceeds limit " + std::to_string(max_text_len));
  }
  return r;
}

inline Corpus read_reviews(std::istream& in, std::size_t max_text_len = kDefaultMaxTextLength) {
  Corpus corpus;
  std::unordered_set<std::string> ids;
  detail::for_each_line(in, [&](const std::string& line, std::size_t) {
    Review r = parse_review(line, max_text_len, corpus.scale_min, corpus.scale_max);
    if (!ids.insert(r.review_id).second) throw ValidationError("duplicate review_id '" + r.review_id + "'");
    corpus.reviews.push_back(std::move(r));
  });
  corpus.histories = derive_histories(corpus.reviews);
  return corpus;
}

// Reads a reviews file. Histories are derived from the file's own reviews
// until replaced with ingest_histories.
inline Corpus ingest_reviews(const std::filesystem::path& path,
                             std::size_t max_text_len = kDefaultMaxTextLength) {
  std::ifstream in = open_input(path);
  try {
    return read_reviews(in, max_text_len);
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

inline std::map<std::string, ReviewerHistory> read_histories(std::istream& in, int scale_min, int scale_max) {
  std::map<std::string, ReviewerHistory> out;
  detail::for_each_line(in, [&](const std::string& line, std::size_t) {
    const nlohmann::json obj = nlohmann::json::parse(line);
    if (!obj.is_object()) throw ValidationError("record is not a JSON object");
    for (const auto& item : obj.items()) {
      if (item.key() != "reviewer_id" && item.key() != "ratings") {
        throw ValidationError("unexpected key '" + item.key() + "'");
      }
    }
    ReviewerHistory h;
    h.reviewer_id = detail::require_string(obj, "reviewer_id");
    const nlohmann::json& ratings = detail::require_key(obj, "ratings");
    if (!ratings.is_array() || ratings.empty()) throw ValidationError("ratings must be a non-empty array");
    for (const nlohmann::json& x : ratings) {
      if (!x.is_number_integer()) throw ValidationError("ratings must be integers");
      const std::int64_t v = x.get<std::int64_t>();
      if (v < scale_min || v > scale_max) {
        throw ValidationError("rating " + std::to_string(v) + " outside [" + std::to_string(scale_min) + ", " +
                              std::to_string(scale_max) + "]");
      }
      h.ratings.push_back(static_cast<int>(v));
    }
    if (out.count(h.reviewer_id)) throw ValidationError("duplicate reviewer_id '" + h.reviewer_id + "'");
    out.emplace(h.reviewer_id, std::move(h));
  });
  return out;
}

// Replaces derived histories with file-provided ones. Reviewers missing from
// the file keep their derived history.
inline Corpus apply_histories(Corpus corpus, std::map<std::string, ReviewerHistory> histories) {
  for (auto& [reviewer, h] : histories) corpus.histories[reviewer] = std::move(h);
  validate_corpus(corpus);
  return corpus;
}

inline Corpus ingest_histories(Corpus corpus, const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  std::map<std::string, ReviewerHistory> histories;
  try {
    histories = read_histories(in, corpus.scale_min, corpus.scale_max);
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
  return apply_histories(std::move(corpus), std::move(histories));
}

inline void write_reviews(std::ostream& out, const Corpus& corpus) {
  for (const Review& r : corpus.reviews) {
    nlohmann::ordered_json obj;
    obj["review_id"] = r.review_id;
    obj["reviewer_id"] = r.reviewer_id;
    obj["movie_id"] = r.movie_id;
    obj["genre"] = r.genre;
    obj["rating"] = r.rating;
    obj["text"] = r.text;
    obj["helpful"] = r.helpful;
    obj["unhelpful"] = r.unhelpful;
    out << obj.dump() << '\n';
  }
}

inline void write_histories(std::ostream& out, const Corpus& corpus) {
  for (const auto& [reviewer, h] : corpus.histories) {
    nlohmann::ordered_json obj;
    obj["reviewer_id"] = reviewer;
    obj["ratings"] = h.ratings;
    out << obj.dump() << '\n';
  }
}

inline void save_reviews(const std::filesystem::path& path, const Corpus& corpus) {
  std::ostringstream out;
  write_reviews(out, corpus);
  write_file_atomic(path, out.str());
}

inline void save_histories(const std::filesystem::path& path, const Corpus& corpus) {
  std::ostringstream out;
  write_histories(out, corpus);
  write_file_atomic(path, out.str());
}

// --- Splitting ------------------------------------------------------------

struct Split {
  std::vector<std::string> train;
  std::vector<std::string> test;
  std::uint64_t seed = 0;

  bool operator==(const Split&) const = default;
};

// Number of test reviews for a movie with n reviews: n * fraction rounded to
// nearest, clamped so both sides are non-empty.
inline std::size_t stratum_test_count(std::size_t n, double test_fraction) {
  const auto k = static_cast<std::size_t>(std::llround(static_cast<double>(n) * test_fraction));
  return std::clamp<std::size_t>(k, 1, n - 1);
}

// Stratified per movie. Both id lists come back in corpus order.
inline Split split_corpus(const Corpus& corpus, double test_fraction, std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) throw ValidationError("test_fraction must lie in (0, 1)");
  std::map<std::string, std::vector<std::size_t>> by_movie;
  for (std::size_t i = 0; i < corpus.reviews.size(); ++i) by_movie[corpus.reviews[i].movie_id].push_back(i);

  Rng rng(derive_seed(seed, "split"));
  std::vector<bool> is_test(corpus.reviews.size(), false);
  for (auto& [movie, indices] : by_movie) {
    if (indices.size() < 2) throw ValidationError("movie '" + movie + "' has fewer than 2 reviews; cannot stratify");
    const std::size_t k = stratum_test_count(indices.size(), test_fraction);
    rng.shuffle(indices);
    for (std::size_t i = 0; i < k; ++i) is_test[indices[i]] = true;
  }
  Split split;
  split.seed = seed;
  for (std::size_t i = 0; i < corpus.reviews.size(); ++i) {
    (is_test[i] ? split.test : split.train).push_back(corpus.reviews[i].review_id);
  }
  return split;
}

}  // namespace credweak
