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

// Labeling functions that annotate reviews as trusted or distrusted.
//
// Historical credibility: a reviewer whose ratings are all identical and
// sit at one end of the rating scale is distrusted, together with every
// review they wrote. Reviewers with a single rating cannot be judged.
//
// Helpfulness vote: a review is trusted iff it has strictly more helpful than
// unhelpful votes.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <map>
#include <numeric>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "credweak/common.hpp"
#include "credweak/corpus.hpp"
#include "credweak/io.hpp"

namespace credweak {

enum class Criterion { kHistoricalCredibility, kHelpfulnessVote };

inline std::string_view criterion_name(Criterion c) {
  return c == Criterion::kHistoricalCredibility ? "historical" : "helpfulness";
}

inline Criterion parse_criterion(std::string_view name) {
  if (name == "historical") return Criterion::kHistoricalCredibility;
  if (name == "helpfulness") return Criterion::kHelpfulnessVote;
  throw ValidationError("unknown criterion '" + std::string(name) + "' (expected historical or helpfulness)");
}

struct WeakLabel {
  std::string review_id;
  Verdict verdict = Verdict::kUnjudged;
  Criterion criterion = Criterion::kHistoricalCredibility;

  bool operator==(const WeakLabel&) const = default;
};

struct AnnotationResult {
  std::map<std::string, WeakLabel> labels;
  double elapsed = 0.0;  // seconds, whole pass
  std::size_t trusted = 0;
  std::size_t distrusted = 0;
  std::size_t unjudged = 0;

  Verdict verdict(const std::string& review_id) const {
    auto it = labels.find(review_id);
    if (it == labels.end()) throw ValidationError("no label for review '" + review_id + "'");
    return it->second.verdict;
  }
};

// Population statistics of a rating multiset, for reporting. The labeling
// rule itself does not go through floating point.
struct RatingStats {
  double mean = 0.0;
  double stddev = 0.0;
};

inline RatingStats rating_stats(std::span<const int> ratings) {
  if (ratings.empty()) throw ValidationError("empty rating history");
  RatingStats s;
  s.mean = std::accumulate(ratings.begin(), ratings.end(), 0.0) / static_cast<double>(ratings.size());
  double ss = 0.0;
  for (int x : ratings) ss += (x - s.mean) * (x - s.mean);
  s.stddev = std::sqrt(ss / static_cast<double>(ratings.size()));
  return s;
}

// Zero population standard deviation over integers is exactly "all ratings
// equal", and then the mean is that common value.
inline Verdict label_historical(std::span<const int> ratings, int scale_min, int scale_max) {
  if (ratings.empty()) throw ValidationError("empty rating history");
  if (ratings.size() == 1) return Verdict::kUnjudged;
  const int first = ratings.front();
  const bool constant = std::all_of(ratings.begin(), ratings.end(), [first](int x) { return x == first; });
  if (constant && (first == scale_min || first == scale_max)) return Verdict::kDistrusted;
  return Verdict::kTrusted;
}

inline Verdict label_historical(const ReviewerHistory& history, int scale_min = kDefaultScaleMin,
                                int scale_max = kDefaultScaleMax) {
  return label_historical(std::span<const int>(history.ratings), scale_min, scale_max);
}

// Ties, including 0-0, are distrusted.
inline Verdict label_helpfulness(std::int64_t helpful, std::int64_t unhelpful) {
  return helpful > unhelpful ? Verdict::kTrusted : Verdict::kDistrusted;
}

inline Verdict label_helpfulness(const Review& review) {
  return label_helpfulness(review.helpful, review.unhelpful);
}

// Labels every review of the corpus. Historical verdicts are computed once
// per reviewer; the elapsed time covers the whole pass.
inline AnnotationResult annotate(const Corpus& corpus, Criterion criterion) {
  const Stopwatch timer;
  AnnotationResult result;
  std::unordered_map<std::string, Verdict> per_reviewer;
  for (const Review& r : corpus.reviews) {
    Verdict v;
    if (criterion == Criterion::kHistoricalCredibility) {
      auto it = per_reviewer.find(r.reviewer_id);
      if (it == per_reviewer.end()) {
        it = per_reviewer
                 .emplace(r.reviewer_id, label_historical(corpus.history(r.reviewer_id), corpus.scale_min,
                                                          corpus.scale_max))
                 .first;
      }
      v = it->second;
    } else {
      v = label_helpfulness(r);
    }
    switch (v) {
      case Verdict::kTrusted:
        ++result.trusted;
        break;
      case Verdict::kDistrusted:
        ++result.distrusted;
        break;
      case Verdict::kUnjudged:
        ++result.unjudged;
        break;
    }
    result.labels.emplace_hint(result.labels.end(), r.review_id, WeakLabel{r.review_id, v, criterion});
  }
  result.elapsed = timer.seconds();
  return result;
}

// Labels file: one JSON object per line, in corpus order.
inline void write_labels(std::ostream& out, const Corpus& corpus, const AnnotationResult& result) {
  for (const Review& r : corpus.reviews) {
    const WeakLabel& label = result.labels.at(r.review_id);
    nlohmann::ordered_json obj;
    obj["review_id"] = label.review_id;
    obj["verdict"] = verdict_name(label.verdict);
    obj["criterion"] = criterion_name(label.criterion);
    out << obj.dump() << '\n';
  }
}

inline void save_labels(const std::filesystem::path& path, const Corpus& corpus, const AnnotationResult& result) {
  std::ostringstream out;
  write_labels(out, corpus, result);
  write_file_atomic(path, out.str());
}

inline std::vector<WeakLabel> read_labels(std::istream& in) {
  std::vector<WeakLabel> labels;
  detail::for_each_line(in, [&](const std::string& line, std::size_t) {
    const nlohmann::json obj = nlohmann::json::parse(line);
    WeakLabel label;
    label.review_id = detail::require_string(obj, "review_id");
    label.verdict = parse_verdict(detail::require_string(obj, "verdict"));
    label.criterion = parse_criterion(detail::require_string(obj, "criterion"));
    labels.push_back(std::move(label));
  });
  return labels;
}

}  // namespace credweak
