#ifndef TFSEL_CORPUS_HPP
#define TFSEL_CORPUS_HPP

/*
 Corpus ingestion: canonical JSONL, the preprocessed Reuters-21578 ModApte
 distribution, and 20 Newsgroups. Ingesters keep the raw text; tokens are
 filled by preprocess_corpus().
*/

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include <json.hpp>

#include "tfsel/errors.hpp"
#include "tfsel/preprocess.hpp"

namespace tfsel {

enum class Split { Train, Test };

inline std::string_view to_string(Split s) { return s == Split::Train ? "train" : "test"; }

struct Document {
  std::string id;
  std::string label;
  std::string text;
  std::vector<std::string> tokens;
  Split split = Split::Train;
};

struct Corpus {
  std::vector<Document> documents;
  std::vector<std::string> categories;  // sorted, unique

  std::size_t category_index(std::string_view label) const {
    auto it = std::lower_bound(categories.begin(), categories.end(), label);
    if (it == categories.end() || *it != label)
      throw ValidationError("unknown category: " + std::string(label));
    return static_cast<std::size_t>(it - categories.begin());
  }

  std::size_t count(Split s) const {
    return static_cast<std::size_t>(std::count_if(documents.begin(), documents.end(),
                                                  [s](const Document& d) { return d.split == s; }));
  }
};

/// Throws ValidationError on duplicate ids or labels missing from categories.
inline void validate(const Corpus& corpus) {
  if (!std::is_sorted(corpus.categories.begin(), corpus.categories.end()) ||
      std::adjacent_find(corpus.categories.begin(), corpus.categories.end()) != corpus.categories.end())
    throw ValidationError("categories must be sorted and unique");
  std::unordered_set<std::string_view> ids;
  for (const auto& d : corpus.documents) {
    if (!ids.insert(d.id).second) throw ValidationError("duplicate document id: " + d.id);
    if (!std::binary_search(corpus.categories.begin(), corpus.categories.end(), d.label))
      throw ValidationError("document " + d.id + " has unknown label " + d.label);
  }
}

/// Builds the category list from the documents' labels and validates.
inline Corpus make_corpus(std::vector<Document> documents) {
  Corpus corpus;
  std::set<std::string> labels;
  for (const auto& d : documents) labels.insert(d.label);
  corpus.categories.assign(labels.begin(), labels.end());
  corpus.documents = std::move(documents);
  validate(corpus);
  return corpus;
}

inline Corpus preprocess_corpus(Corpus corpus, const PreprocessConfig& config) {
  for (auto& d : corpus.documents) d.tokens = preprocess(d.text, config);
  return corpus;
}

// ---------------------------------------------------------------------------
// JSONL

inline Corpus read_jsonl(std::istream& in) {
  std::vector<Document> docs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json record;
    try {
      record = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(line_no, e.what());
    }
    if (!record.is_object()) throw ParseError(line_no, "expected a JSON object");
    Document d;
    try {
      d.id = record.at("id").get<std::string>();
      d.label = record.at("label").get<std::string>();
      d.text = record.at("text").get<std::string>();
      const auto split = record.at("split").get<std::string>();
      if (split == "train") {
        d.split = Split::Train;
      } else if (split == "test") {
        d.split = Split::Test;
      } else {
        throw ParseError(line_no, "split must be \"train\" or \"test\", got \"" + split + "\"");
      }
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(line_no, e.what());
    }
    docs.push_back(std::move(d));
  }
  return make_corpus(std::move(docs));
}

inline Corpus ingest_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open corpus file: " + path.string());
  return read_jsonl(in);
}

inline void write_jsonl(std::ostream& out, const Corpus& corpus) {
  for (const auto& d : corpus.documents) {
    nlohmann::json record = {
        {"id", d.id}, {"label", d.label}, {"text", d.text}, {"split", std::string(to_string(d.split))}};
    // Latin-1 input may not be valid UTF-8; replace rather than fail.
    out << record.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace) << '\n';
  }
}

// ---------------------------------------------------------------------------
// Directory corpora

namespace detail {

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void require_directory(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw IoError("not a directory: " + dir.string());
}

inline std::vector<std::filesystem::path> sorted_entries(const std::filesystem::path& dir, bool directories) {
  std::vector<std::filesystem::path> out;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    if (directories ? e.is_directory() : e.is_regular_file()) out.push_back(e.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline bool is_train_dir(const std::string& name) { return name == "train" || name == "training"; }
inline bool is_test_dir(const std::string& name) { return name == "test"; }

struct RawFile {
  std::filesystem::path path;
  std::string label;
  Split split;
};

inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  // Rejection sampling keeps the result identical across standard libraries.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

}  // namespace detail

/*
 Preprocessed ModApte layout. Either split-first
   <dir>/{training|train}/<category>/<doc>, <dir>/test/<category>/<doc>
 or category-first
   <dir>/<category>/{training|train|test}/<doc>.
 The document id is its file name. A file name filed under more than one
 category is multi-labelled and dropped; documents outside any category
 directory are unlabelled and never read. Empty categories are omitted.
*/
inline Corpus ingest_reuters_modapte(const std::filesystem::path& dir) {
  using detail::RawFile;
  detail::require_directory(dir);

  std::vector<RawFile> files;
  const auto top = detail::sorted_entries(dir, true);
  const bool split_first = std::any_of(top.begin(), top.end(), [](const auto& p) {
    const auto name = p.filename().string();
    return detail::is_train_dir(name) || detail::is_test_dir(name);
  });

  auto collect = [&files](const std::filesystem::path& d, const std::string& label, Split split) {
    for (const auto& f : detail::sorted_entries(d, false)) files.push_back({f, label, split});
  };

  for (const auto& sub : top) {
    const auto name = sub.filename().string();
    if (split_first) {
      if (!detail::is_train_dir(name) && !detail::is_test_dir(name)) continue;
      const Split split = detail::is_train_dir(name) ? Split::Train : Split::Test;
      for (const auto& cat : detail::sorted_entries(sub, true)) collect(cat, cat.filename().string(), split);
    } else {
      for (const auto& part : detail::sorted_entries(sub, true)) {
        const auto pname = part.filename().string();
        if (detail::is_train_dir(pname)) collect(part, name, Split::Train);
        else if (detail::is_test_dir(pname)) collect(part, name, Split::Test);
      }
    }
  }

  std::map<std::string, int> occurrences;
  for (const auto& f : files) ++occurrences[f.path.filename().string()];

  std::vector<Document> docs;
  for (const auto& f : files) {
    auto id = f.path.filename().string();
    if (occurrences[id] != 1) continue;
    docs.push_back(Document{std::move(id), f.label, detail::read_file(f.path), {}, f.split});
  }
  if (docs.empty()) throw ValidationError("no readable single-label documents under " + dir.string());
  return make_corpus(std::move(docs));
}

/// Keeps the Subject and Keywords header values plus the body (everything after
/// the first blank line) of a newsgroup posting.
inline std::string extract_newsgroup_text(std::string_view raw) {
  std::string kept;
  std::size_t pos = 0;
  bool in_headers = true;
  while (pos < raw.size() && in_headers) {
    auto eol = raw.find('\n', pos);
    if (eol == std::string_view::npos) eol = raw.size();
    std::string_view line = raw.substr(pos, eol - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    pos = eol + 1;
    if (line.find_first_not_of(" \t") == std::string_view::npos) {
      in_headers = false;
      break;
    }
    auto colon = line.find(':');
    if (colon == std::string_view::npos) continue;
    std::string key(line.substr(0, colon));
    std::transform(key.begin(), key.end(), key.begin(), [](unsigned char c) { return std::tolower(c); });
    if (key == "subject" || key == "keywords") {
      kept.append(line.substr(colon + 1));
      kept.push_back('\n');
    }
  }
  if (pos < raw.size()) kept.append(raw.substr(pos));
  return kept;
}

/// Per-category seeded split. Train count is round(n * train / (train + test)).
inline Corpus ingest_20newsgroups(const std::filesystem::path& dir, std::pair<int, int> split_ratio,
                                  std::uint64_t seed) {
  detail::require_directory(dir);
  if (split_ratio.first < 0 || split_ratio.second < 0 || split_ratio.first + split_ratio.second == 0)
    throw ValidationError("split ratio must be non-negative with a positive sum");

  std::vector<Document> docs;
  std::mt19937_64 rng(seed);
  const auto total = static_cast<std::uint64_t>(split_ratio.first + split_ratio.second);
  for (const auto& cat : detail::sorted_entries(dir, true)) {
    const auto label = cat.filename().string();
    auto files = detail::sorted_entries(cat, false);
    if (files.empty()) continue;

    // Fisher-Yates over the sorted file list.
    for (std::size_t i = files.size() - 1; i > 0; --i)
      std::swap(files[i], files[detail::uniform_below(rng, i + 1)]);
    const std::uint64_t n = files.size();
    const std::uint64_t n_train = (n * static_cast<std::uint64_t>(split_ratio.first) + total / 2) / total;

    for (std::size_t i = 0; i < files.size(); ++i) {
      docs.push_back(Document{label + "/" + files[i].filename().string(), label,
                              extract_newsgroup_text(detail::read_file(files[i])), {},
                              i < n_train ? Split::Train : Split::Test});
    }
  }
  std::sort(docs.begin(), docs.end(), [](const Document& a, const Document& b) { return a.id < b.id; });
  return make_corpus(std::move(docs));
}

}  // namespace tfsel

#endif  // TFSEL_CORPUS_HPP
