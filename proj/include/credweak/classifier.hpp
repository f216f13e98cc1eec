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

#pragma once

#include <span>
#include <string>
#include <vector>

#include "credweak/common.hpp"
#include "credweak/feature_vector.hpp"

namespace credweak {

// Positive scores mean Trusted. A score of exactly zero maps to tie_verdict.
struct Prediction {
  std::string review_id;
  Verdict verdict = Verdict::kDistrusted;
  double score = 0.0;
};

inline Verdict verdict_from_score(double score, Verdict tie_verdict = Verdict::kDistrusted) {
  if (score > 0) return Verdict::kTrusted;
  if (score < 0) return Verdict::kDistrusted;
  return tie_verdict;
}

// Checks a training set: equal lengths, labels in {+1, -1}, both classes
// present, one vector kind and dimension, finite values.
inline void validate_training_set(std::span<const FeatureVector> xs, std::span<const int> ys) {
  if (xs.size() != ys.size()) throw ValidationError("feature and label counts differ");
  if (xs.empty()) throw ValidationError("empty training set");
  bool pos = false, neg = false;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (ys[i] == 1) {
      pos = true;
    } else if (ys[i] == -1) {
      neg = true;
    } else {
      throw ValidationError("labels must be +1 or -1");
    }
    if (xs[i].kind != xs[0].kind) throw ValidationError("mixed feature vector kinds in training set");
    if (xs[i].dim != xs[0].dim) throw ValidationError("mixed feature dimensions in training set");
    if (!xs[i].finite()) throw ValidationError("non-finite feature value in training set");
  }
  if (!pos) throw ValidationError("training set has no Trusted (+1) examples");
  if (!neg) throw ValidationError("training set has no Distrusted (-1) examples");
}

}  // namespace credweak
