// tfsel: command-line driver for corpus ingestion, feature scoring, selection
// and classification experiments.
//
//   tfsel ingest  --input DIR --format reuters --out OUT
//   tfsel score   --input corpus.jsonl --method ttest,chi2 --terms acquir,stake
//   tfsel select  --input corpus.jsonl --method ttest --features 4000
//   tfsel run     --input corpus.jsonl --method ttest --features 4000 --out OUT
//   tfsel sweep   --input DIR --format reuters --classifier knn --out OUT
//
// Every option may also be set in a flat key=value file passed with --config;
// command-line values win.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tfsel/tfsel.hpp"

namespace {

struct Options {
  std::string input;
  std::string format = "jsonl";
  std::vector<std::string> methods;
  std::string combine = "avg";
  std::vector<std::string> features;
  std::string classifier = "knn";
  std::size_t knn_k = 10;
  std::string split = "2:1";
  std::uint64_t seed = 0;
  std::string stopwords;
  bool no_stem = false;
  bool keep_numeric = false;
  bool keep_case = false;
  std::size_t min_token_length = 2;
  std::string out;
  std::string cache;
  std::vector<std::string> terms;
  std::size_t threads = 0;
};

tfsel::ExperimentConfig to_config(const Options& o, bool sweep) {
  tfsel::ExperimentConfig c;
  c.input = o.input;
  c.format = tfsel::parse_format(o.format);
  if (!o.stopwords.empty()) c.preprocess.stopwords = tfsel::load_stopwords(o.stopwords);
  c.preprocess.stemming = !o.no_stem;
  c.preprocess.drop_numeric_tokens = !o.keep_numeric;
  c.preprocess.lowercase = !o.keep_case;
  c.preprocess.min_token_length = o.min_token_length;

  c.methods.clear();
  for (const auto& m : o.methods) c.methods.push_back(tfsel::parse_method(m));
  if (c.methods.empty()) {
    if (sweep) {
      c.methods = {tfsel::Method::TTest, tfsel::Method::Chi2, tfsel::Method::InfoGain, tfsel::Method::MutualInfo,
                   tfsel::Method::CrossEntropy};
    } else {
      c.methods = {tfsel::Method::TTest};
    }
  }
  c.combiner = tfsel::parse_combiner(o.combine);

  c.feature_counts.clear();
  for (const auto& f : o.features) c.feature_counts.push_back(tfsel::parse_feature_count(f));
  if (c.feature_counts.empty())
    c.feature_counts = sweep ? tfsel::default_feature_grid(c.format) : std::vector<std::size_t>{tfsel::kAllFeatures};

  c.classifier.kind = tfsel::parse_classifier(o.classifier);
  c.classifier.k = o.knn_k;
  c.split_ratio = tfsel::parse_split_ratio(o.split);
  c.seed = o.seed;
  c.out_dir = o.out;
  if (!o.cache.empty()) c.cache_dir = o.cache;
  c.terms = o.terms;
  c.threads = o.threads;
  tfsel::validate(c);
  return c;
}

// Writes to <out>/<name> when an output directory is set, stdout otherwise.
template <typename Fn>
void emit(const tfsel::ExperimentConfig& c, const std::string& name, Fn&& write) {
  if (c.out_dir.empty()) {
    write(std::cout);
    return;
  }
  std::filesystem::create_directories(c.out_dir);
  const auto path = c.out_dir / name;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw tfsel::IoError("cannot write " + path.string());
  write(out);
  std::cerr << "wrote " << path.string() << '\n';
}

void cmd_ingest(const tfsel::ExperimentConfig& c) {
  const auto corpus = tfsel::load_corpus(c);
  std::cerr << corpus.documents.size() << " documents, " << corpus.categories.size() << " categories ("
            << corpus.count(tfsel::Split::Train) << " train, " << corpus.count(tfsel::Split::Test) << " test)\n";
  emit(c, "corpus.jsonl", [&](std::ostream& out) { tfsel::write_jsonl(out, corpus); });
}

void cmd_score(const tfsel::ExperimentConfig& c) {
  emit(c, "scores.csv", [&](std::ostream& out) { tfsel::dump_scores(c, out, std::cerr); });
}

void cmd_select(const tfsel::ExperimentConfig& c) {
  const auto raw = tfsel::load_corpus(c);
  const auto corpus = tfsel::preprocess_corpus(raw, c.preprocess);
  const auto stats = tfsel::stats_for(raw, corpus, c);
  const auto method = c.methods.front();
  const auto n = c.feature_counts.front();
  const auto fs = tfsel::select_features(stats, method, c.combiner, n);
  const std::string name = "features_" + std::string(tfsel::to_string(method)) + "_" +
                           std::string(tfsel::to_string(c.combiner)) + "_" + tfsel::feature_count_name(n) + ".csv";
  emit(c, name, [&](std::ostream& out) {
    out << "rank,term,score\n";
    for (std::size_t i = 0; i < fs.selected.size(); ++i)
      out << (i + 1) << ',' << tfsel::detail::csv_field(stats.vocab[fs.selected[i]]) << ','
          << tfsel::detail::format_double(fs.scores[i]) << '\n';
  });
}

void cmd_run(const tfsel::ExperimentConfig& c) {
  const auto cells = tfsel::run_experiment(c);
  tfsel::write_aggregate_csv(std::cout, cells);
  if (!c.out_dir.empty()) std::cerr << "wrote " << cells.size() << " reports to " << c.out_dir.string() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Term-frequency t-test feature selection and text categorization experiments"};
  app.set_config("--config", "", "Flat key=value file; keys are the long option names");
  app.fallthrough();
  app.require_subcommand(1);

  Options o;
  app.add_option("--input", o.input, "Corpus file (jsonl) or directory (reuters, 20ng)");
  app.add_option("--format", o.format, "Corpus format")->check(CLI::IsMember({"jsonl", "reuters", "20ng"}));
  app.add_option("--method", o.methods, "Scoring methods: ttest,chi2,ig,mi,ece,df,tf")->delimiter(',');
  app.add_option("--combine", o.combine, "Per-class combiner")->check(CLI::IsMember({"avg", "max"}));
  app.add_option("--features", o.features, "Feature counts, N or 'all'")->delimiter(',');
  app.add_option("--classifier", o.classifier, "Classifier")->check(CLI::IsMember({"knn", "centroid"}));
  app.add_option("--knn-k", o.knn_k, "Neighbours for kNN");
  app.add_option("--split", o.split, "Train:test ratio for 20ng");
  app.add_option("--seed", o.seed, "Seed for the random split");
  app.add_option("--stopwords", o.stopwords, "Stopword file (default: built-in SMART list)");
  app.add_flag("--no-stem", o.no_stem, "Disable Porter stemming");
  app.add_flag("--keep-numeric", o.keep_numeric, "Keep tokens containing digits");
  app.add_flag("--keep-case", o.keep_case, "Do not lowercase");
  app.add_option("--min-token-length", o.min_token_length, "Shortest token kept");
  app.add_option("--out", o.out, "Output directory (default: stdout)");
  app.add_option("--cache", o.cache, "Directory for cached term statistics");
  app.add_option("--terms", o.terms, "Terms for 'score' (default: whole vocabulary)")->delimiter(',');
  app.add_option("--threads", o.threads, "Prediction threads (0: all cores)");

  auto* ingest = app.add_subcommand("ingest", "Read a corpus and write it as JSONL");
  auto* score = app.add_subcommand("score", "Dump per-term scores as CSV");
  auto* select = app.add_subcommand("select", "Write the top-N feature list");
  auto* run = app.add_subcommand("run", "Run every method x feature-count cell");
  auto* sweep = app.add_subcommand("sweep", "Run the default feature-count grid for the corpus format");

  CLI11_PARSE(app, argc, argv);

  try {
    const auto config = to_config(o, sweep->parsed());
    if (ingest->parsed()) cmd_ingest(config);
    else if (score->parsed()) cmd_score(config);
    else if (select->parsed()) cmd_select(config);
    else if (run->parsed() || sweep->parsed()) cmd_run(config);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
