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

// The credweak command line. Kept in a header so tests can drive it
// in-process.
//
// Exit codes: 0 success, 1 I/O or runtime failure, 2 validation failure
// (bad arguments, bad config, malformed input).

#pragma once

#include <chrono>
#include <filesystem>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "credweak/credweak.hpp"
#include "credweak/manifest.hpp"

namespace credweak::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitIo = 1;
inline constexpr int kExitValidation = 2;

struct Globals {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  bool quiet = false;
};

struct Streams {
  std::ostream& out;
  std::ostream& err;
  bool quiet;

  std::ostream& info() {
    static std::ostringstream sink;
    sink.str("");
    return quiet ? sink : err;
  }
};

// "reviews.jsonl" -> "reviews.histories.jsonl"
inline std::filesystem::path histories_path_for(const std::filesystem::path& reviews) {
  std::filesystem::path p = reviews;
  const std::string ext = p.has_extension() ? p.extension().string() : ".jsonl";
  p.replace_extension();
  return p.string() + ".histories" + ext;
}

inline std::string file_safe(std::string s) {
  for (char& c : s) {
    if (c == '/' || c == '+' || c == ';' || c == ' ') c = '_';
  }
  return s;
}

inline int cmd_synth(const Globals& g, Streams io, const std::string& spec_path, const std::string& out_path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(spec_path));
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(spec_path + ": " + e.what());
  }
  if (g.seed && j.is_object()) j["seed"] = *g.seed;
  SynthSpec spec;
  try {
    spec = parse_synth_spec(j);
  } catch (const ValidationError& e) {
    throw ValidationError(spec_path + ": " + e.what());
  }
  std::filesystem::path out = out_path;
  if (g.out) out = std::filesystem::path(*g.out) / out.filename();
  const Corpus corpus = synthesize_corpus(spec);
  save_reviews(out, corpus);
  const std::filesystem::path hist = histories_path_for(out);
  save_histories(hist, corpus);
  io.info() << "wrote " << corpus.reviews.size() << " reviews to " << out.string() << " and "
            << corpus.histories.size() << " histories to " << hist.string() << "\n";
  return kExitOk;
}

inline Corpus load_reviews_and_histories(const std::string& reviews, const std::string& histories,
                                         std::size_t max_text_len) {
  Corpus corpus = ingest_reviews(reviews, max_text_len);
  if (!histories.empty()) corpus = ingest_histories(std::move(corpus), histories);
  return corpus;
}

inline int cmd_ingest(Streams io, const std::string& reviews, const std::string& histories,
                      std::size_t max_text_len) {
  const Corpus corpus = load_reviews_and_histories(reviews, histories, max_text_len);
  nlohmann::ordered_json summary;
  summary["reviews"] = corpus.reviews.size();
  summary["reviewers"] = corpus.histories.size();
  nlohmann::ordered_json movies = nlohmann::ordered_json::object();
  for (const std::string& m : corpus.movies()) movies[m] = 0;
  for (const Review& r : corpus.reviews) movies[r.movie_id] = movies[r.movie_id].get<std::size_t>() + 1;
  summary["movies"] = std::move(movies);
  io.out << summary.dump(2) << "\n";
  return kExitOk;
}

inline int cmd_label(const Globals& g, Streams io, const std::string& reviews, const std::string& histories,
                     const std::string& criterion_text, const std::string& out_path, std::size_t max_text_len) {
  const Criterion criterion = parse_criterion(criterion_text);
  const Corpus corpus = load_reviews_and_histories(reviews, histories, max_text_len);
  const AnnotationResult result = annotate(corpus, criterion);
  std::filesystem::path out = out_path;
  if (g.out) out = std::filesystem::path(*g.out) / out.filename();
  save_labels(out, corpus, result);
  io.err << "annotated " << corpus.reviews.size() << " reviews in " << format_fixed(result.elapsed, 6)
         << " s (trusted " << result.trusted << ", distrusted " << result.distrusted << ", unjudged "
         << result.unjudged << ")\n";
  return kExitOk;
}

struct LoadedRun {
  RunConfig config;
  Corpus corpus;
  RunManifest manifest;
  std::filesystem::path config_path;
};

inline LoadedRun load_run(const Globals& g, const std::string& config_path, std::string command) {
  LoadedRun run;
  run.manifest.started = iso8601_utc(std::chrono::system_clock::now());
  run.config_path = config_path;
  run.config = load_run_config(config_path);
  nlohmann::json hashed = run.config.document;
  if (g.seed) {
    run.config.base.seed = *g.seed;
    hashed["seed"] = *g.seed;
  }
  if (g.out) run.config.output_dir = *g.out;
  run.corpus = load_corpus(run.config);
  run.manifest.command = std::move(command);
  run.manifest.config_hash = config_hash(hashed);
  run.manifest.seed = run.config.base.seed;
  run.manifest.add_input(config_path);
  for (const auto& p : run.config.inputs()) run.manifest.add_input(p);
  return run;
}

inline void emit(LoadedRun& run, const std::string& name, const std::string& content) {
  const std::filesystem::path p = run.config.output_dir / name;
  write_file_atomic(p, content);
  run.manifest.outputs.push_back(p.string());
}

inline void finish_manifest(LoadedRun& run) {
  run.manifest.finished = iso8601_utc(std::chrono::system_clock::now());
  const std::filesystem::path p = run.config.output_dir / "manifest.json";
  run.manifest.outputs.push_back(p.string());
  write_file_atomic(p, run.manifest.to_json().dump(2) + "\n");
}

inline void save_cell_models(LoadedRun& run, const ExperimentReport& r) {
  nlohmann::ordered_json j;
  j["features"] = r.feature_model.to_json();
  j["classifier"] = r.classifier_model.to_json();
  emit(run, "models/" + file_safe(cell_name(r.config)) + ".json", j.dump(2) + "\n");
}

inline void save_criterion_labels(LoadedRun& run, const std::set<Criterion>& criteria) {
  for (Criterion c : criteria) {
    std::ostringstream labels;
    write_labels(labels, run.corpus, annotate(run.corpus, c));
    emit(run, "labels-" + std::string(criterion_name(c)) + ".jsonl", labels.str());
  }
}

inline int cmd_run(const Globals& g, Streams io, const std::string& config_path, bool compare) {
  LoadedRun run = load_run(g, config_path, compare ? "run --compare" : "run");
  std::vector<ExperimentReport> reports;
  std::set<Criterion> criteria;
  if (compare) {
    std::vector<ExperimentConfig> unique;
    for (const ExperimentConfig& c : run.config.cells()) {
      ExperimentConfig probe = c;
      probe.criterion = Criterion::kHistoricalCredibility;
      bool seen = false;
      for (const ExperimentConfig& u : unique) seen |= u.to_json() == probe.to_json();
      if (!seen) unique.push_back(probe);
    }
    const ComparisonReport cmp = run_comparison(unique, run.corpus);
    for (const ComparisonRow& row : cmp.rows) {
      reports.push_back(row.historical);
      reports.push_back(row.helpfulness);
    }
    criteria = {Criterion::kHistoricalCredibility, Criterion::kHelpfulnessVote};
    emit(run, "comparison.csv", comparison_to_csv(cmp));
    emit(run, "comparison.md", comparison_to_markdown(cmp));
    io.out << comparison_to_markdown(cmp);
  } else {
    for (const ExperimentConfig& c : run.config.cells()) {
      io.info() << "running " << cell_name(c) << "\n";
      reports.push_back(run_experiment(c, run.corpus));
      criteria.insert(c.criterion);
    }
  }
  emit(run, "results.csv", reports_to_csv(reports));
  emit(run, "results.md", reports_to_markdown(reports));
  if (run.config.save_models) {
    for (const ExperimentReport& r : reports) save_cell_models(run, r);
    save_criterion_labels(run, criteria);
  }
  finish_manifest(run);
  if (!compare) io.out << reports_to_markdown(reports);
  return kExitOk;
}

inline int cmd_bench(const Globals& g, Streams io, const std::string& config_path, std::size_t repetitions) {
  LoadedRun run = load_run(g, config_path, "bench");
  const BenchTable table = bench_timings(run.config.base, run.corpus, repetitions);
  emit(run, "bench.csv", bench_to_csv(table));
  emit(run, "bench.md", bench_to_markdown(table));
  finish_manifest(run);
  io.out << bench_to_markdown(table);
  return kExitOk;
}

inline int cmd_report(const Globals& g, Streams io, const std::string& csv_path) {
  std::ifstream in = open_input(csv_path);
  std::string md;
  try {
    md = summarize_csv(parse_csv(in));
  } catch (const ValidationError& e) {
    throw ValidationError(csv_path + ": " + e.what());
  } catch (const std::invalid_argument&) {
    throw ValidationError(csv_path + ": non-numeric value in a numeric column");
  }
  if (g.out) write_file_atomic(std::filesystem::path(*g.out) / "summary.md", md);
  io.out << md;
  return kExitOk;
}

inline int run_cli(const std::vector<std::string>& args, std::ostream& out = std::cout,
                   std::ostream& err = std::cerr) {
  CLI::App app{"Weakly supervised review credibility experiments"};
  app.name("credweak");
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "Override the top-level seed");
  app.add_option("--out", g.out, "Output directory");
  app.add_flag("--quiet", g.quiet, "Suppress progress messages");
  app.set_version_flag("--version", std::string(kToolVersion));

  std::string spec_path, out_path, reviews, histories, criterion, config_path, csv_path;
  std::size_t max_text_len = kDefaultMaxTextLength;
  std::size_t repetitions = 3;
  bool compare = false;

  CLI::App* synth = app.add_subcommand("synth", "Generate a synthetic corpus from a JSON spec");
  synth->add_option("spec", spec_path, "Spec file")->required();
  synth->add_option("out", out_path, "Reviews output file")->required();

  CLI::App* ingest = app.add_subcommand("ingest", "Validate a reviews file and print a summary");
  ingest->add_option("reviews", reviews, "Reviews file")->required();
  ingest->add_option("--histories", histories, "Reviewer histories file");
  ingest->add_option("--max-text-len", max_text_len, "Maximum review length in code points");

  CLI::App* label = app.add_subcommand("label", "Annotate reviews with weak labels");
  label->add_option("reviews", reviews, "Reviews file")->required();
  label->add_option("out", out_path, "Labels output file")->required();
  label->add_option("--criterion", criterion, "historical or helpfulness")->required();
  label->add_option("--histories", histories, "Reviewer histories file");
  label->add_option("--max-text-len", max_text_len, "Maximum review length in code points");

  CLI::App* run = app.add_subcommand("run", "Run the experiment cells of a config");
  run->add_option("config", config_path, "Config file")->required();
  run->add_flag("--compare", compare, "Pair historical and helpfulness cells");

  CLI::App* bench = app.add_subcommand("bench", "Time the four feature/classifier pipelines");
  bench->add_option("config", config_path, "Config file")->required();
  bench->add_option("--repetitions", repetitions, "Repetitions per pipeline (median reported)")
      ->check(CLI::PositiveNumber);

  CLI::App* report = app.add_subcommand("report", "Summarize a results CSV as markdown");
  report->add_option("csv", csv_path, "results.csv")->required();

  std::vector<std::string> argv_store{"credweak"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const std::string& a : argv_store) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  Streams io{out, err, g.quiet};
  try {
    if (*synth) return cmd_synth(g, io, spec_path, out_path);
    if (*ingest) return cmd_ingest(io, reviews, histories, max_text_len);
    if (*label) return cmd_label(g, io, reviews, histories, criterion, out_path, max_text_len);
    if (*run) return cmd_run(g, io, config_path, compare);
    if (*bench) return cmd_bench(g, io, config_path, repetitions);
    if (*report) return cmd_report(g, io, csv_path);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitValidation;
}

inline int run_cli(int argc, char** argv) { return run_cli(std::vector<std::string>(argv + 1, argv + argc)); }

}  // namespace credweak::cli
