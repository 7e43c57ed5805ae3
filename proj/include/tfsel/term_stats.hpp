#ifndef TFSEL_TERM_STATS_HPP
#define TFSEL_TERM_STATS_HPP

/*
 Sparse term x document frequency statistics over the TRAIN split, plus the
 per-class aggregates every scorer reads.

 Postings are stored term-major (CSR): for term i, documents
 posting_docs[offsets[i] .. offsets[i+1]) with counts posting_tf[...].
 Per-class arrays are flattened row-major as [term * K + class].
*/

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "tfsel/corpus.hpp"
#include "tfsel/errors.hpp"

namespace tfsel {

using TermId = std::uint32_t;

/// One document's term counts as (term id, count) pairs; ids need not be sorted.
using SparseCounts = std::vector<std::pair<TermId, std::int64_t>>;

struct TermStats {
  std::vector<std::string> vocab;       // sorted, ids are positions
  std::vector<std::string> categories;  // class ids are positions
  std::int64_t num_docs = 0;            // N
  std::vector<std::int64_t> class_docs; // N_k
  std::vector<std::uint32_t> doc_class; // class of each train document

  std::vector<std::size_t> posting_offsets;
  std::vector<std::uint32_t> posting_docs;
  std::vector<std::int64_t> posting_tf;

  std::vector<std::int64_t> df;         // documents containing the term
  std::vector<std::int64_t> df_class;   // [term * K + k]
  std::vector<std::int64_t> tf_total;   // summed frequency over all train docs
  std::vector<double> tf_mean;          // (1/N) sum_j tf_ij
  std::vector<double> tf_mean_class;    // [term * K + k], sum_{j in C_k} tf_ij / N_k
  std::vector<double> pooled_sd;        // s_i; empty when N <= K

  std::size_t num_terms() const { return vocab.size(); }
  std::size_t num_classes() const { return categories.size(); }

  std::optional<TermId> find(std::string_view term) const {
    auto it = std::lower_bound(vocab.begin(), vocab.end(), term);
    if (it == vocab.end() || *it != term) return std::nullopt;
    return static_cast<TermId>(it - vocab.begin());
  }

  std::span<const std::int64_t> class_df(TermId term) const {
    return {df_class.data() + static_cast<std::size_t>(term) * num_classes(), num_classes()};
  }
  std::span<const double> class_mean(TermId term) const {
    return {tf_mean_class.data() + static_cast<std::size_t>(term) * num_classes(), num_classes()};
  }
  std::span<const std::uint32_t> postings(TermId term) const {
    return {posting_docs.data() + posting_offsets[term], posting_offsets[term + 1] - posting_offsets[term]};
  }
  std::span<const std::int64_t> posting_counts(TermId term) const {
    return {posting_tf.data() + posting_offsets[term], posting_offsets[term + 1] - posting_offsets[term]};
  }
};

/*
 Builds statistics from pre-counted documents. vocab must be sorted and
 unique; doc_labels index into categories. Requires at least two categories,
 each with at least one document.
*/
inline TermStats build_stats_from_counts(std::vector<std::string> vocab, std::vector<std::string> categories,
                                         std::span<const std::size_t> doc_labels,
                                         std::span<const SparseCounts> docs) {
  if (doc_labels.size() != docs.size()) throw ValidationError("one label per document required");
  if (categories.size() < 2)
    throw ValidationError("at least two categories with training documents are required");
  if (std::adjacent_find(vocab.begin(), vocab.end(), std::greater_equal<>()) != vocab.end())
    throw ValidationError("vocabulary must be sorted and unique");

  const std::size_t V = vocab.size();
  const std::size_t K = categories.size();
  TermStats s;
  s.num_docs = static_cast<std::int64_t>(docs.size());
  s.class_docs.assign(K, 0);
  s.doc_class.reserve(docs.size());
  for (auto label : doc_labels) {
    if (label >= K) throw ValidationError("document label out of range");
    ++s.class_docs[label];
    s.doc_class.push_back(static_cast<std::uint32_t>(label));
  }
  for (std::size_t k = 0; k < K; ++k)
    if (s.class_docs[k] == 0) throw ValidationError("category without training documents: " + categories[k]);

  // Merge duplicate term ids per document and count postings per term.
  std::vector<SparseCounts> merged(docs.size());
  std::vector<std::size_t> per_term(V, 0);
  for (std::size_t j = 0; j < docs.size(); ++j) {
    auto& m = merged[j];
    m = docs[j];
    std::sort(m.begin(), m.end());
    std::size_t out = 0;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (m[i].first >= V) throw ValidationError("term id out of range");
      if (m[i].second < 0) throw ValidationError("negative term count");
      if (out > 0 && m[out - 1].first == m[i].first) {
        m[out - 1].second += m[i].second;
      } else {
        m[out++] = m[i];
      }
    }
    m.resize(out);
    std::erase_if(m, [](const auto& e) { return e.second == 0; });
    for (const auto& [t, c] : m) ++per_term[t];
  }

  s.posting_offsets.assign(V + 1, 0);
  for (std::size_t t = 0; t < V; ++t) s.posting_offsets[t + 1] = s.posting_offsets[t] + per_term[t];
  s.posting_docs.resize(s.posting_offsets[V]);
  s.posting_tf.resize(s.posting_offsets[V]);
  {
    std::vector<std::size_t> cursor(s.posting_offsets.begin(), s.posting_offsets.end() - 1);
    for (std::size_t j = 0; j < merged.size(); ++j) {
      for (const auto& [t, c] : merged[j]) {
        s.posting_docs[cursor[t]] = static_cast<std::uint32_t>(j);
        s.posting_tf[cursor[t]] = c;
        ++cursor[t];
      }
    }
  }

  s.df.assign(V, 0);
  s.tf_total.assign(V, 0);
  s.df_class.assign(V * K, 0);
  s.tf_mean.assign(V, 0.0);
  s.tf_mean_class.assign(V * K, 0.0);
  const double N = static_cast<double>(s.num_docs);
  const bool has_dof = s.num_docs > static_cast<std::int64_t>(K);
  if (has_dof) s.pooled_sd.assign(V, 0.0);

  std::vector<std::int64_t> class_sum(K);
  for (std::size_t t = 0; t < V; ++t) {
    std::fill(class_sum.begin(), class_sum.end(), 0);
    const auto docs_t = s.postings(static_cast<TermId>(t));
    const auto tf_t = s.posting_counts(static_cast<TermId>(t));
    std::int64_t total = 0;
    for (std::size_t p = 0; p < docs_t.size(); ++p) {
      const auto k = s.doc_class[docs_t[p]];
      class_sum[k] += tf_t[p];
      ++s.df_class[t * K + k];
      total += tf_t[p];
    }
    s.df[t] = static_cast<std::int64_t>(docs_t.size());
    s.tf_total[t] = total;
    s.tf_mean[t] = static_cast<double>(total) / N;
    for (std::size_t k = 0; k < K; ++k)
      s.tf_mean_class[t * K + k] = static_cast<double>(class_sum[k]) / static_cast<double>(s.class_docs[k]);

    if (has_dof) {
      // Absent documents contribute (N_k - nnz_k) * mean_k^2 in closed form.
      double ss = 0.0;
      for (std::size_t p = 0; p < docs_t.size(); ++p) {
        const double d = static_cast<double>(tf_t[p]) - s.tf_mean_class[t * K + s.doc_class[docs_t[p]]];
        ss += d * d;
      }
      for (std::size_t k = 0; k < K; ++k) {
        const double mean = s.tf_mean_class[t * K + k];
        ss += static_cast<double>(s.class_docs[k] - s.df_class[t * K + k]) * mean * mean;
      }
      s.pooled_sd[t] = std::sqrt(ss / (N - static_cast<double>(K)));
    }
  }

  s.vocab = std::move(vocab);
  s.categories = std::move(categories);
  return s;
}

/// Statistics over the TRAIN documents of a preprocessed corpus.
inline TermStats build_stats(const Corpus& corpus) {
  std::vector<const Document*> train;
  for (const auto& d : corpus.documents)
    if (d.split == Split::Train) train.push_back(&d);

  std::vector<bool> used(corpus.categories.size(), false);
  for (const auto* d : train) used[corpus.category_index(d->label)] = true;
  std::vector<std::string> categories;
  for (std::size_t k = 0; k < used.size(); ++k)
    if (used[k]) categories.push_back(corpus.categories[k]);
  if (categories.size() < 2)
    throw ValidationError("at least two categories with training documents are required");
  if (categories.size() != corpus.categories.size())
    throw ValidationError("every category needs at least one training document");

  std::unordered_map<std::string_view, TermId> ids;
  for (const auto* d : train)
    for (const auto& tok : d->tokens) ids.emplace(tok, 0);
  std::vector<std::string> vocab;
  vocab.reserve(ids.size());
  for (const auto& [term, _] : ids) vocab.emplace_back(term);
  std::sort(vocab.begin(), vocab.end());
  for (std::size_t i = 0; i < vocab.size(); ++i) ids[vocab[i]] = static_cast<TermId>(i);

  std::vector<std::size_t> labels;
  std::vector<SparseCounts> counts;
  labels.reserve(train.size());
  counts.reserve(train.size());
  std::unordered_map<TermId, std::int64_t> tf;
  for (const auto* d : train) {
    labels.push_back(corpus.category_index(d->label));
    tf.clear();
    for (const auto& tok : d->tokens) ++tf[ids.at(tok)];
    counts.emplace_back(tf.begin(), tf.end());
  }
  return build_stats_from_counts(std::move(vocab), std::move(categories), labels, counts);
}

/// s_i, the pooled within-class standard deviation with N - K degrees of freedom.
inline double pooled_deviation(const TermStats& stats, TermId term) {
  if (stats.num_docs <= static_cast<std::int64_t>(stats.num_classes()))
    throw ValidationError("pooled deviation needs more documents than classes (N > K)");
  if (term >= stats.num_terms()) throw ValidationError("term id out of range");
  return stats.pooled_sd[term];
}

// ---------------------------------------------------------------------------
// Binary cache

namespace detail {

inline constexpr char kStatsMagic[8] = {'T', 'F', 'S', 'T', 'A', 'T', 'S', '\0'};
inline constexpr std::uint32_t kStatsVersion = 1;

inline void fnv1a(std::uint64_t& h, std::string_view bytes) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  h ^= 0xff;  // field separator
  h *= 0x100000001b3ULL;
}

template <typename T>
void put(std::ostream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}
template <typename T>
void put_vec(std::ostream& out, const std::vector<T>& v) {
  put<std::uint64_t>(out, v.size());
  out.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(T)));
}
inline void put_strings(std::ostream& out, const std::vector<std::string>& v) {
  put<std::uint64_t>(out, v.size());
  for (const auto& s : v) {
    put<std::uint64_t>(out, s.size());
    out.write(s.data(), static_cast<std::streamsize>(s.size()));
  }
}
template <typename T>
T get(std::istream& in) {
  T v{};
  if (!in.read(reinterpret_cast<char*>(&v), sizeof(T))) throw IoError("truncated stats cache");
  return v;
}
template <typename T>
std::vector<T> get_vec(std::istream& in) {
  std::vector<T> v(get<std::uint64_t>(in));
  if (!in.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(T))))
    throw IoError("truncated stats cache");
  return v;
}
inline std::vector<std::string> get_strings(std::istream& in) {
  std::vector<std::string> v(get<std::uint64_t>(in));
  for (auto& s : v) {
    s.resize(get<std::uint64_t>(in));
    if (!in.read(s.data(), static_cast<std::streamsize>(s.size()))) throw IoError("truncated stats cache");
  }
  return v;
}

}  // namespace detail

/// Content hash of the raw corpus and the preprocessing settings, used as a cache key.
inline std::uint64_t stats_cache_key(const Corpus& corpus, const PreprocessConfig& config) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const auto& d : corpus.documents) {
    detail::fnv1a(h, d.id);
    detail::fnv1a(h, d.label);
    detail::fnv1a(h, to_string(d.split));
    detail::fnv1a(h, d.text);
  }
  std::vector<std::string> stop(config.stopwords.begin(), config.stopwords.end());
  std::sort(stop.begin(), stop.end());
  for (const auto& w : stop) detail::fnv1a(h, w);
  detail::fnv1a(h, std::to_string(config.stemming) + std::to_string(config.drop_numeric_tokens) +
                       std::to_string(config.lowercase) + std::to_string(config.min_token_length));
  return h;
}

inline void save_stats(const std::filesystem::path& path, const TermStats& s) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(detail::kStatsMagic, sizeof(detail::kStatsMagic));
  detail::put(out, detail::kStatsVersion);
  detail::put_strings(out, s.vocab);
  detail::put_strings(out, s.categories);
  detail::put(out, s.num_docs);
  detail::put_vec(out, s.class_docs);
  detail::put_vec(out, s.doc_class);
  detail::put_vec(out, s.posting_offsets);
  detail::put_vec(out, s.posting_docs);
  detail::put_vec(out, s.posting_tf);
  detail::put_vec(out, s.df);
  detail::put_vec(out, s.df_class);
  detail::put_vec(out, s.tf_total);
  detail::put_vec(out, s.tf_mean);
  detail::put_vec(out, s.tf_mean_class);
  detail::put_vec(out, s.pooled_sd);
  if (!out) throw IoError("failed writing " + path.string());
}

inline TermStats load_stats(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  char magic[sizeof(detail::kStatsMagic)];
  if (!in.read(magic, sizeof(magic)) || !std::equal(magic, magic + sizeof(magic), detail::kStatsMagic))
    throw IoError("not a stats cache: " + path.string());
  if (detail::get<std::uint32_t>(in) != detail::kStatsVersion)
    throw IoError("unsupported stats cache version: " + path.string());
  TermStats s;
  s.vocab = detail::get_strings(in);
  s.categories = detail::get_strings(in);
  s.num_docs = detail::get<std::int64_t>(in);
  s.class_docs = detail::get_vec<std::int64_t>(in);
  s.doc_class = detail::get_vec<std::uint32_t>(in);
  s.posting_offsets = detail::get_vec<std::size_t>(in);
  s.posting_docs = detail::get_vec<std::uint32_t>(in);
  s.posting_tf = detail::get_vec<std::int64_t>(in);
  s.df = detail::get_vec<std::int64_t>(in);
  s.df_class = detail::get_vec<std::int64_t>(in);
  s.tf_total = detail::get_vec<std::int64_t>(in);
  s.tf_mean = detail::get_vec<double>(in);
  s.tf_mean_class = detail::get_vec<double>(in);
  s.pooled_sd = detail::get_vec<double>(in);
  return s;
}

}  // namespace tfsel

#endif  // TFSEL_TERM_STATS_HPP
