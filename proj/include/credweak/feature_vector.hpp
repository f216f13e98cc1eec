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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "credweak/common.hpp"

namespace credweak {

enum class VectorKind { kSparse, kDense };

// One review's features. Sparse vectors keep strictly increasing indices
// below dim; dense vectors keep dim values and no indices.
struct FeatureVector {
  std::string review_id;
  VectorKind kind = VectorKind::kDense;
  std::size_t dim = 0;
  std::vector<std::uint32_t> indices;
  std::vector<double> values;

  bool operator==(const FeatureVector&) const = default;

  static FeatureVector dense(std::string review_id, std::vector<double> values) {
    FeatureVector v;
    v.review_id = std::move(review_id);
    v.kind = VectorKind::kDense;
    v.dim = values.size();
    v.values = std::move(values);
    return v;
  }

  static FeatureVector sparse(std::string review_id, std::size_t dim,
                              std::vector<std::pair<std::uint32_t, double>> entries) {
    std::sort(entries.begin(), entries.end());
    FeatureVector v;
    v.review_id = std::move(review_id);
    v.kind = VectorKind::kSparse;
    v.dim = dim;
    for (const auto& [index, value] : entries) {
      if (index >= dim) throw ValidationError("sparse index out of range");
      if (!v.indices.empty() && v.indices.back() == index) throw ValidationError("duplicate sparse index");
      v.indices.push_back(index);
      v.values.push_back(value);
    }
    return v;
  }

  // Value at coordinate i (sparse lookups are binary searches).
  double at(std::size_t i) const {
    if (kind == VectorKind::kDense) return values.at(i);
    auto it = std::lower_bound(indices.begin(), indices.end(), i);
    if (it == indices.end() || *it != i) return 0.0;
    return values[static_cast<std::size_t>(it - indices.begin())];
  }

  bool finite() const {
    return std::all_of(values.begin(), values.end(), [](double x) { return std::isfinite(x); });
  }

  double squared_norm() const {
    double s = 0.0;
    for (double x : values) s += x * x;
    return s;
  }
};

inline void require_compatible(const FeatureVector& a, const FeatureVector& b) {
  if (a.kind != b.kind) throw ValidationError("feature vector kinds differ");
  if (a.dim != b.dim) {
    throw ValidationError("dimension mismatch: " + std::to_string(a.dim) + " vs " + std::to_string(b.dim));
  }
}

inline double dot(const FeatureVector& a, const FeatureVector& b) {
  require_compatible(a, b);
  double s = 0.0;
  if (a.kind == VectorKind::kDense) {
    for (std::size_t i = 0; i < a.dim; ++i) s += a.values[i] * b.values[i];
    return s;
  }
  std::size_t i = 0, j = 0;
  while (i < a.indices.size() && j < b.indices.size()) {
    if (a.indices[i] < b.indices[j]) {
      ++i;
    } else if (a.indices[i] > b.indices[j]) {
      ++j;
    } else {
      s += a.values[i++] * b.values[j++];
    }
  }
  return s;
}

// Exact squared Euclidean distance; dense vectors subtract coordinatewise,
// sparse vectors merge so that shared coordinates are subtracted directly.
inline double squared_distance(const FeatureVector& a, const FeatureVector& b) {
  require_compatible(a, b);
  double s = 0.0;
  if (a.kind == VectorKind::kDense) {
    for (std::size_t i = 0; i < a.dim; ++i) {
      const double d = a.values[i] - b.values[i];
      s += d * d;
    }
    return s;
  }
  std::size_t i = 0, j = 0;
  while (i < a.indices.size() || j < b.indices.size()) {
    if (j == b.indices.size() || (i < a.indices.size() && a.indices[i] < b.indices[j])) {
      s += a.values[i] * a.values[i];
      ++i;
    } else if (i == a.indices.size() || a.indices[i] > b.indices[j]) {
      s += b.values[j] * b.values[j];
      ++j;
    } else {
      const double d = a.values[i++] - b.values[j++];
      s += d * d;
    }
  }
  return s;
}

}  // namespace credweak
