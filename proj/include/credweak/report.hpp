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

// CSV and markdown renderings of experiment results.

#pragma once

#include <cstdio>
#include <istream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "credweak/common.hpp"
#include "credweak/experiment.hpp"

namespace credweak {

inline const std::vector<std::string>& report_csv_columns() {
  static const std::vector<std::string> columns = {
      "cell",           "criterion",          "features",         "classifier",        "movies",
      "test_fraction",  "seed",               "shuffle_labels",   "n_train",           "n_test",
      "accuracy",       "precision_trusted",  "recall_trusted",   "precision_distrusted",
      "recall_distrusted", "annotation_s",    "training_s",       "testing_s",         "trusted",
      "distrusted",     "unjudged"};
  return columns;
}

// Shortest representation that round-trips.
inline std::string format_real(double v) {
  char buf[32];
  for (int precision = 1; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof buf, "%.*g", precision, v);
    if (std::stod(buf) == v) break;
  }
  return buf;
}

inline std::string format_fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::vector<std::string> csv_row(const std::string& cell, const ExperimentReport& r) {
  const ExperimentConfig& c = r.config;
  return {cell,
          std::string(criterion_name(c.criterion)),
          std::string(feature_kind_name(c.features)),
          std::string(classifier_kind_name(c.classifier)),
          c.movies_label(),
          format_real(c.test_fraction),
          std::to_string(c.seed),
          c.shuffle_labels ? "true" : "false",
          std::to_string(r.n_train),
          std::to_string(r.n_test),
          format_real(r.accuracy),
          format_real(r.confusion.precision_trusted()),
          format_real(r.confusion.recall_trusted()),
          format_real(r.confusion.precision_distrusted()),
          format_real(r.confusion.recall_distrusted()),
          format_real(r.timings.annotation),
          format_real(r.timings.training),
          format_real(r.timings.testing),
          std::to_string(r.trusted),
          std::to_string(r.distrusted),
          std::to_string(r.unjudged)};
}

inline std::string join_csv(const std::vector<std::string>& fields) {
  std::string line;
  for (std::size_t i = 0; i < fields.size(); ++i) line += (i ? "," : "") + csv_field(fields[i]);
  return line + "\n";
}

inline std::string cell_name(const ExperimentConfig& c) {
  return std::string(criterion_name(c.criterion)) + "/" + std::string(feature_kind_name(c.features)) + "+" +
         std::string(classifier_kind_name(c.classifier)) + "/" + c.movies_label();
}

inline std::string reports_to_csv(const std::vector<ExperimentReport>& reports) {
  std::string out = join_csv(report_csv_columns());
  for (const ExperimentReport& r : reports) out += join_csv(csv_row(cell_name(r.config), r));
  return out;
}

// Minimal RFC 4180 reader: quoted fields, doubled quotes, no embedded newlines.
inline std::vector<std::vector<std::string>> parse_csv(std::istream& in) {
  std::vector<std::vector<std::string>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields(1);
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      const char ch = line[i];
      if (quoted) {
        if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
          fields.back() += '"';
          ++i;
        } else if (ch == '"') {
          quoted = false;
        } else {
          fields.back() += ch;
        }
      } else if (ch == '"') {
        quoted = true;
      } else if (ch == ',') {
        fields.emplace_back();
      } else {
        fields.back() += ch;
      }
    }
    if (quoted) throw ValidationError("line " + std::to_string(line_no) + ": unterminated quoted field");
    rows.push_back(std::move(fields));
  }
  return rows;
}

inline std::string comparison_to_csv(const ComparisonReport& cmp) {
  std::string out = join_csv({"features", "classifier", "movies", "seed", "accuracy_historical",
                              "accuracy_helpfulness", "improvement_percent"});
  for (const ComparisonRow& row : cmp.rows) {
    const ExperimentConfig& c = row.historical.config;
    out += join_csv({std::string(feature_kind_name(c.features)), std::string(classifier_kind_name(c.classifier)),
                     c.movies_label(), std::to_string(c.seed), format_real(row.historical.accuracy),
                     format_real(row.helpfulness.accuracy), format_real(row.improvement_percent)});
  }
  return out;
}

// Markdown summary of a results CSV (as produced by reports_to_csv).
inline std::string summarize_csv(const std::vector<std::vector<std::string>>& rows) {
  if (rows.empty()) throw ValidationError("report CSV is empty");
  const std::vector<std::string>& header = rows.front();
  std::map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < header.size(); ++i) col[header[i]] = i;
  for (const char* needed : {"cell", "accuracy", "n_test", "annotation_s", "training_s", "testing_s"}) {
    if (!col.count(needed)) throw ValidationError(std::string("report CSV lacks column '") + needed + "'");
  }
  std::ostringstream md;
  md << "| Cell | n_test | Accuracy | Annotation (s) | Training (s) | Testing (s) |\n";
  md << "|---|---:|---:|---:|---:|---:|\n";
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& f = rows[r];
    if (f.size() != header.size()) {
      throw ValidationError("report CSV row " + std::to_string(r + 1) + " has " + std::to_string(f.size()) +
                            " fields, expected " + std::to_string(header.size()));
    }
    md << "| " << f[col["cell"]] << " | " << f[col["n_test"]] << " | "
       << format_fixed(std::stod(f[col["accuracy"]]), 4) << " | "
       << format_fixed(std::stod(f[col["annotation_s"]]), 3) << " | "
       << format_fixed(std::stod(f[col["training_s"]]), 3) << " | "
       << format_fixed(std::stod(f[col["testing_s"]]), 3) << " |\n";
  }
  return md.str();
}

inline std::string reports_to_markdown(const std::vector<ExperimentReport>& reports) {
  std::ostringstream md;
  md << "## Cells\n\n";
  md << "| Cell | n_train | n_test | Accuracy | P(T) | R(T) | P(D) | R(D) | Annotation (s) | Training (s) | "
        "Testing (s) |\n";
  md << "|---|---:|---:|---:|---:|---:|---:|---:|---:|---:|---:|\n";
  for (const ExperimentReport& r : reports) {
    md << "| " << cell_name(r.config) << " | " << r.n_train << " | " << r.n_test << " | "
       << format_fixed(r.accuracy, 4) << " | " << format_fixed(r.confusion.precision_trusted(), 3) << " | "
       << format_fixed(r.confusion.recall_trusted(), 3) << " | "
       << format_fixed(r.confusion.precision_distrusted(), 3) << " | "
       << format_fixed(r.confusion.recall_distrusted(), 3) << " | " << format_fixed(r.timings.annotation, 3)
       << " | " << format_fixed(r.timings.training, 3) << " | " << format_fixed(r.timings.testing, 3) << " |\n";
  }
  bool any_movies = false;
  for (const ExperimentReport& r : reports) any_movies |= r.per_movie.size() > 1;
  if (any_movies) {
    md << "\n## Per-movie accuracy\n\n| Cell | Movie | n | Accuracy |\n|---|---|---:|---:|\n";
    for (const ExperimentReport& r : reports) {
      for (const auto& [movie, conf] : r.per_movie) {
        md << "| " << cell_name(r.config) << " | " << movie << " | " << conf.total() << " | "
           << format_fixed(conf.accuracy(), 4) << " |\n";
      }
    }
  }
  return md.str();
}

inline std::string comparison_to_markdown(const ComparisonReport& cmp) {
  std::ostringstream md;
  md << "## Historical credibility vs helpfulness vote\n\n";
  md << "| Features | Classifier | Movies | Historical | Helpfulness | Improvement (%) |\n";
  md << "|---|---|---|---:|---:|---:|\n";
  for (const ComparisonRow& row : cmp.rows) {
    const ExperimentConfig& c = row.historical.config;
    md << "| " << feature_kind_name(c.features) << " | " << classifier_kind_name(c.classifier) << " | "
       << c.movies_label() << " | " << format_fixed(row.historical.accuracy, 4) << " | "
       << format_fixed(row.helpfulness.accuracy, 4) << " | " << format_fixed(row.improvement_percent, 2)
       << " |\n";
  }
  return md.str();
}

inline std::string bench_column_label(const BenchColumn& c) {
  return std::string(c.features == FeatureKind::kTfIdf ? "TF-IDF" : "Embedding") + " + " +
         (c.classifier == ClassifierKind::kNaiveBayes ? "NB" : "SVM");
}

// Phase rows x feature/classifier columns, seconds.
inline std::string bench_to_markdown(const BenchTable& t) {
  std::ostringstream md;
  md << "Elapsed time in seconds, median of " << t.repetitions << " repetition(s), " << t.reviews
     << " reviews.\n\n| Phase |";
  for (const BenchColumn& c : t.columns) md << " " << bench_column_label(c) << " |";
  md << "\n|---|";
  for (std::size_t i = 0; i < t.columns.size(); ++i) md << "---:|";
  md << "\n";
  const auto row = [&](const char* name, auto value, int digits) {
    md << "| " << name << " |";
    for (const BenchColumn& c : t.columns) md << " " << format_fixed(value(c), digits) << " |";
    md << "\n";
  };
  row("Annotation", [](const BenchColumn& c) { return c.timings.annotation; }, 3);
  row("Training", [](const BenchColumn& c) { return c.timings.training; }, 3);
  row("Testing", [](const BenchColumn& c) { return c.timings.testing; }, 3);
  row("Total", [](const BenchColumn& c) { return c.timings.total(); }, 3);
  row("Annotation share (%)", [](const BenchColumn& c) { return 100.0 * c.annotation_share(); }, 3);
  return md.str();
}

inline std::string bench_to_csv(const BenchTable& t) {
  std::string out = join_csv({"features", "classifier", "repetitions", "reviews", "annotation_s", "training_s",
                              "testing_s", "total_s", "annotation_share"});
  for (const BenchColumn& c : t.columns) {
    out += join_csv({std::string(feature_kind_name(c.features)), std::string(classifier_kind_name(c.classifier)),
                     std::to_string(t.repetitions), std::to_string(t.reviews), format_real(c.timings.annotation),
                     format_real(c.timings.training), format_real(c.timings.testing),
                     format_real(c.timings.total()), format_real(c.annotation_share())});
  }
  return out;
}

}  // namespace credweak
