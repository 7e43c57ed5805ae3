#ifndef TFSEL_EXPERIMENT_HPP
#define TFSEL_EXPERIMENT_HPP

/*
 End-to-end runs: ingest -> preprocess -> TRAIN statistics -> select ->
 ltc vectors -> classify -> evaluate, over a grid of (method, feature count)
 cells. Output of a run with an output directory:

   <out>/report_<method>_<combiner>_<n>.json   one EvalReport per cell
   <out>/aggregate.csv                          method,n_features,macro_f1,micro_f1
*/

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "tfsel/classify.hpp"
#include "tfsel/corpus.hpp"
#include "tfsel/errors.hpp"
#include "tfsel/eval.hpp"
#include "tfsel/scoring.hpp"
#include "tfsel/term_stats.hpp"
#include "tfsel/weighting.hpp"

namespace tfsel {

enum class CorpusFormat { Jsonl, Reuters, Newsgroups };

inline CorpusFormat parse_format(std::string_view name) {
  if (name == "jsonl") return CorpusFormat::Jsonl;
  if (name == "reuters") return CorpusFormat::Reuters;
  if (name == "20ng") return CorpusFormat::Newsgroups;
  throw ValidationError("unknown corpus format: " + std::string(name));
}

/// Default sweep grids for the two benchmark corpora.
inline std::vector<std::size_t> default_feature_grid(CorpusFormat format) {
  if (format == CorpusFormat::Newsgroups) return {kAllFeatures, 2000, 1500, 1000, 500, 200};
  return {kAllFeatures, 17000, 15000, 13000, 11000, 10000, 8000, 6000, 4000, 2000};
}

inline std::string feature_count_name(std::size_t n) { return n == kAllFeatures ? "all" : std::to_string(n); }

inline std::size_t parse_feature_count(std::string_view s) {
  if (s == "all") return kAllFeatures;
  std::size_t n = 0;
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), n);
  if (ec != std::errc() || end != s.data() + s.size() || n == 0)
    throw ValidationError("feature count must be a positive integer or \"all\": " + std::string(s));
  return n;
}

inline std::pair<int, int> parse_split_ratio(std::string_view s) {
  const auto colon = s.find(':');
  int a = -1, b = -1;
  if (colon != std::string_view::npos) {
    std::from_chars(s.data(), s.data() + colon, a);
    std::from_chars(s.data() + colon + 1, s.data() + s.size(), b);
  }
  if (a < 0 || b < 0 || a + b == 0) throw ValidationError("split must look like 2:1, got " + std::string(s));
  return {a, b};
}

struct ExperimentConfig {
  std::filesystem::path input;
  CorpusFormat format = CorpusFormat::Jsonl;
  PreprocessConfig preprocess;
  std::vector<Method> methods = {Method::TTest};
  Combiner combiner = Combiner::Avg;
  std::vector<std::size_t> feature_counts = {kAllFeatures};
  ClassifierParams classifier;
  std::pair<int, int> split_ratio = {2, 1};
  std::uint64_t seed = 0;
  std::filesystem::path out_dir;                  // empty: nothing written
  std::optional<std::filesystem::path> cache_dir; // TermStats cache
  std::vector<std::string> terms;                 // score dump subset; empty means all
  std::size_t threads = 0;                        // 0: hardware concurrency
};

inline void validate(const ExperimentConfig& c) {
  if (c.methods.empty()) throw ValidationError("at least one method is required");
  if (c.feature_counts.empty()) throw ValidationError("at least one feature count is required");
  for (auto n : c.feature_counts)
    if (n == 0) throw ValidationError("feature counts must be positive");
  if (c.classifier.kind == ClassifierKind::Knn && c.classifier.k == 0) throw ValidationError("--knn-k must be >= 1");
  if (c.split_ratio.first < 0 || c.split_ratio.second < 0 || c.split_ratio.first + c.split_ratio.second == 0)
    throw ValidationError("invalid split ratio");
  if (c.input.empty()) throw ValidationError("an input corpus is required");
}

/// Raw (unpreprocessed) corpus named by the config.
inline Corpus load_corpus(const ExperimentConfig& c) {
  switch (c.format) {
    case CorpusFormat::Jsonl: return ingest_jsonl(c.input);
    case CorpusFormat::Reuters: return ingest_reuters_modapte(c.input);
    case CorpusFormat::Newsgroups: return ingest_20newsgroups(c.input, c.split_ratio, c.seed);
  }
  throw ValidationError("unknown corpus format");
}

/// Statistics for a raw corpus, through the cache when one is configured.
inline TermStats stats_for(const Corpus& raw, const Corpus& preprocessed, const ExperimentConfig& c) {
  if (!c.cache_dir) return build_stats(preprocessed);
  std::ostringstream name;
  name << "stats-" << std::hex << stats_cache_key(raw, c.preprocess) << ".bin";
  const auto path = *c.cache_dir / name.str();
  if (std::filesystem::exists(path)) return load_stats(path);
  auto stats = build_stats(preprocessed);
  std::filesystem::create_directories(*c.cache_dir);
  save_stats(path, stats);
  return stats;
}

/// Predicts every vector; work is split across threads, output order is input order.
inline std::vector<std::size_t> predict_all(const Classifier& model, std::span<const WeightedVector> vectors,
                                            std::size_t threads = 0) {
  std::vector<std::size_t> out(vectors.size());
  if (threads == 0) threads = std::max(1U, std::thread::hardware_concurrency());
  threads = std::min(threads, std::max<std::size_t>(1, vectors.size() / 64));
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) out[i] = model.predict(vectors[i]);
  };
  if (threads <= 1) {
    work(0, vectors.size());
    return out;
  }
  std::vector<std::jthread> pool;
  const std::size_t chunk = (vectors.size() + threads - 1) / threads;
  for (std::size_t b = 0; b < vectors.size(); b += chunk) pool.emplace_back(work, b, std::min(vectors.size(), b + chunk));
  pool.clear();  // joins
  return out;
}

struct CellResult {
  Method method = Method::TTest;
  Combiner combiner = Combiner::Avg;
  std::size_t requested = kAllFeatures;
  std::size_t selected = 0;
  EvalReport report;
};

inline std::string cell_name(const CellResult& c) {
  return "report_" + std::string(to_string(c.method)) + "_" + std::string(to_string(c.combiner)) + "_" +
         feature_count_name(c.requested);
}

/// One grid cell on an already preprocessed corpus and its TRAIN statistics.
inline CellResult run_cell(const Corpus& corpus, const TermStats& stats, Method method, std::size_t n,
                           const ExperimentConfig& c) {
  CellResult cell{method, c.combiner, n, 0, {}};
  const auto features = select_features(stats, method, c.combiner, n);
  cell.selected = features.selected.size();
  const Vectorizer vectorize_doc(features, stats);

  std::vector<LabeledVector> train;
  std::vector<WeightedVector> test;
  std::vector<std::size_t> gold;
  for (const auto& d : corpus.documents) {
    const auto label = corpus.category_index(d.label);
    if (d.split == Split::Train) {
      train.push_back({vectorize_doc(d), label});
    } else {
      test.push_back(vectorize_doc(d));
      gold.push_back(label);
    }
  }
  if (test.empty()) throw ValidationError("corpus has no TEST documents");
  const auto model = fit(train, corpus.categories.size(), c.classifier);
  const auto predicted = predict_all(*model, test, c.threads);
  cell.report = evaluate(std::span<const std::size_t>(gold), std::span<const std::size_t>(predicted),
                         std::span<const std::string>(corpus.categories));
  return cell;
}

inline void write_aggregate_csv(std::ostream& out, std::span<const CellResult> cells) {
  out << "method,n_features,macro_f1,micro_f1\n";
  for (const auto& c : cells) {
    out << to_string(c.method) << ',' << feature_count_name(c.requested) << ','
        << detail::format_double(c.report.macro_f1) << ',' << detail::format_double(c.report.micro_f1) << '\n';
  }
}

/// Runs the full method x feature-count grid. Writes outputs when out_dir is set.
inline std::vector<CellResult> run_experiment(const ExperimentConfig& c) {
  validate(c);
  const auto raw = load_corpus(c);
  const auto corpus = preprocess_corpus(raw, c.preprocess);
  const auto stats = stats_for(raw, corpus, c);

  std::vector<CellResult> cells;
  for (auto method : c.methods) {
    for (auto n : c.feature_counts) {
      try {
        cells.push_back(run_cell(corpus, stats, method, n, c));
      } catch (const std::exception& e) {
        throw std::runtime_error("cell " + std::string(to_string(method)) + "/" + feature_count_name(n) +
                                 " failed: " + e.what());
      }
    }
  }

  if (!c.out_dir.empty()) {
    std::filesystem::create_directories(c.out_dir);
    for (const auto& cell : cells) {
      std::ofstream out(c.out_dir / (cell_name(cell) + ".json"));
      if (!out) throw IoError("cannot write report in " + c.out_dir.string());
      out << to_json(cell.report).dump(2) << '\n';
    }
    std::ofstream agg(c.out_dir / "aggregate.csv");
    if (!agg) throw IoError("cannot write aggregate.csv in " + c.out_dir.string());
    write_aggregate_csv(agg, cells);
  }
  return cells;
}

/*
 Score dump for the configured methods. Rows per method are ordered by
 descending combined score, then term; requested terms missing from the
 vocabulary follow as rows with empty scores, one warning each.
 Returns the number of warnings.
*/
inline std::size_t dump_scores(const TermStats& stats, const ExperimentConfig& c, std::ostream& out,
                               std::ostream& warnings) {
  std::vector<TermId> ids;
  std::vector<std::string> missing;
  if (c.terms.empty()) {
    ids.resize(stats.num_terms());
    std::iota(ids.begin(), ids.end(), TermId{0});
  } else {
    for (const auto& t : c.terms) {
      if (auto id = stats.find(t)) ids.push_back(*id);
      else missing.push_back(t);
    }
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());

  write_score_header(out, stats);
  for (auto method : c.methods) {
    std::vector<FeatureScore> rows;
    rows.reserve(ids.size());
    for (auto id : ids) rows.push_back(score_term(stats, id, method, c.combiner));
    rank_scores(rows);
    for (const auto& fs : rows) write_score_row(out, stats, fs, c.combiner);
    for (const auto& t : missing) write_missing_row(out, stats, t, method, c.combiner);
  }
  for (const auto& t : missing) warnings << "warning: term not in vocabulary: " << t << '\n';
  return missing.size();
}

inline std::size_t dump_scores(const ExperimentConfig& c, std::ostream& out, std::ostream& warnings) {
  const auto raw = load_corpus(c);
  const auto corpus = preprocess_corpus(raw, c.preprocess);
  return dump_scores(stats_for(raw, corpus, c), c, out, warnings);
}

}  // namespace tfsel

#endif  // TFSEL_EXPERIMENT_HPP
