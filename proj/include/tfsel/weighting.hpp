#ifndef TFSEL_WEIGHTING_HPP
#define TFSEL_WEIGHTING_HPP

#include <algorithm>
#include <cmath>
#include <ostream>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "tfsel/corpus.hpp"
#include "tfsel/scoring.hpp"
#include "tfsel/term_stats.hpp"

namespace tfsel {

/// Sparse non-negative vector, unit length unless flagged zero.
struct WeightedVector {
  std::vector<std::pair<TermId, double>> entries;  // sorted by term id, weights > 0
  bool zero = true;

  /// Sorts, drops non-positive weights and L2-normalizes.
  static WeightedVector normalized(std::vector<std::pair<TermId, double>> weights) {
    std::sort(weights.begin(), weights.end());
    std::erase_if(weights, [](const auto& e) { return !(e.second > 0.0); });
    double norm = 0.0;
    for (const auto& [_, w] : weights) norm += w * w;
    norm = std::sqrt(norm);
    WeightedVector v;
    if (norm > 0.0) {
      for (auto& [_, w] : weights) w /= norm;
      v.entries = std::move(weights);
      v.zero = false;
    }
    return v;
  }

  double norm() const {
    double s = 0.0;
    for (const auto& [_, w] : entries) s += w * w;
    return std::sqrt(s);
  }
};

/// Dot product of two unit vectors, clamped to [0, 1]. Zero vectors give 0.
inline double cosine(const WeightedVector& u, const WeightedVector& v) {
  if (u.zero || v.zero) return 0.0;
  double dot = 0.0;
  auto a = u.entries.begin();
  auto b = v.entries.begin();
  while (a != u.entries.end() && b != v.entries.end()) {
    if (a->first < b->first) {
      ++a;
    } else if (b->first < a->first) {
      ++b;
    } else {
      dot += a->second * b->second;
      ++a;
      ++b;
    }
  }
  return std::clamp(dot, 0.0, 1.0);
}

/*
 ltc weighting over a fixed feature set:
   w = (1 + ln tf) * ln(N / df), N and df from the TRAIN statistics,
 followed by cosine normalization. Terms with df = 0 get weight 0.
 Build once per feature set and reuse across documents.
*/
class Vectorizer {
 public:
  Vectorizer(const FeatureSet& features, const TermStats& stats) : stats_(&stats) {
    index_.reserve(features.selected.size());
    for (auto id : features.selected) index_.emplace(stats.vocab.at(id), id);
  }

  WeightedVector operator()(std::span<const std::string> tokens) const {
    std::unordered_map<TermId, std::int64_t> tf;
    for (const auto& tok : tokens) {
      if (auto it = index_.find(tok); it != index_.end()) ++tf[it->second];
    }
    std::vector<std::pair<TermId, double>> weights;
    weights.reserve(tf.size());
    const auto N = static_cast<double>(stats_->num_docs);
    for (const auto& [id, count] : tf) {
      const auto df = stats_->df[id];
      if (df == 0) continue;
      const double w = (1.0 + std::log(static_cast<double>(count))) * std::log(N / static_cast<double>(df));
      weights.emplace_back(id, w);
    }
    return WeightedVector::normalized(std::move(weights));
  }

  WeightedVector operator()(const Document& doc) const { return (*this)(std::span<const std::string>(doc.tokens)); }

 private:
  const TermStats* stats_;
  std::unordered_map<std::string_view, TermId> index_;
};

inline WeightedVector vectorize(const Document& doc, const FeatureSet& features, const TermStats& stats) {
  return Vectorizer(features, stats)(doc);
}

/// One line per document: id then term_id:weight pairs in term order.
inline void write_vector_dump(std::ostream& out, std::span<const std::string> ids,
                              std::span<const WeightedVector> vectors) {
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    out << ids[i];
    for (const auto& [t, w] : vectors[i].entries) out << ' ' << t << ':' << detail::format_double(w);
    out << '\n';
  }
}

}  // namespace tfsel

#endif  // TFSEL_WEIGHTING_HPP
