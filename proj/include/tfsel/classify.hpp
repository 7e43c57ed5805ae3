#ifndef TFSEL_CLASSIFY_HPP
#define TFSEL_CLASSIFY_HPP

/*
 Classifiers over ltc vectors behind one interface.

   KNN       similarity-weighted vote: each of the k most cosine-similar
             training vectors adds its similarity to its class.
   CENTROID  per-class mean vector, re-normalized; predict the class whose
             centroid is most cosine-similar.

 Class ids are positions in the sorted category list, so "ties go to the
 smallest class id" is the same as ascending category-identifier order.

 External classifiers (e.g. an SVM tool) plug in through the sparse line
 format below: "label idx:weight ..." with 1-based feature indices.
*/

#include <algorithm>
#include <cstdint>
#include <istream>
#include <memory>
#include <numeric>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "tfsel/errors.hpp"
#include "tfsel/weighting.hpp"

namespace tfsel {

enum class ClassifierKind { Knn, Centroid };

inline std::string_view to_string(ClassifierKind k) { return k == ClassifierKind::Knn ? "knn" : "centroid"; }

inline ClassifierKind parse_classifier(std::string_view name) {
  if (name == "knn") return ClassifierKind::Knn;
  if (name == "centroid") return ClassifierKind::Centroid;
  throw ValidationError("unknown classifier: " + std::string(name));
}

struct ClassifierParams {
  ClassifierKind kind = ClassifierKind::Knn;
  std::size_t k = 10;
};

struct LabeledVector {
  WeightedVector vector;
  std::size_t label = 0;
};

namespace detail {

inline std::size_t argmax_first(std::span<const double> scores) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i)
    if (scores[i] > scores[best]) best = i;
  return best;
}

}  // namespace detail

class Classifier {
 public:
  virtual ~Classifier() = default;

  virtual ClassifierKind kind() const = 0;
  virtual std::size_t num_classes() const = 0;
  /// One score per class; predict() is their argmax with ties to the lowest id.
  virtual std::vector<double> class_scores(const WeightedVector& v) const = 0;

  std::size_t predict(const WeightedVector& v) const { return detail::argmax_first(class_scores(v)); }
};

class KnnClassifier final : public Classifier {
 public:
  KnnClassifier(std::span<const LabeledVector> train, std::size_t num_classes, std::size_t k)
      : k_(k), num_classes_(num_classes) {
    if (k == 0) throw ValidationError("kNN needs k >= 1");
    if (k > train.size()) throw ValidationError("kNN k exceeds the number of training vectors");
    labels_.reserve(train.size());
    for (std::size_t i = 0; i < train.size(); ++i) {
      if (train[i].label >= num_classes) throw ValidationError("training label out of range");
      labels_.push_back(train[i].label);
      for (const auto& [t, w] : train[i].vector.entries) {
        if (t >= postings_.size()) postings_.resize(static_cast<std::size_t>(t) + 1);
        postings_[t].emplace_back(static_cast<std::uint32_t>(i), w);
      }
    }
  }

  ClassifierKind kind() const override { return ClassifierKind::Knn; }
  std::size_t num_classes() const override { return num_classes_; }
  std::size_t k() const { return k_; }
  std::size_t train_size() const { return labels_.size(); }

  /// Cosine similarity against every training vector.
  std::vector<double> similarities(const WeightedVector& v) const {
    std::vector<double> sims(labels_.size(), 0.0);
    if (v.zero) return sims;
    for (const auto& [t, w] : v.entries) {
      if (t >= postings_.size()) continue;
      for (const auto& [doc, dw] : postings_[t]) sims[doc] += w * dw;
    }
    for (auto& s : sims) s = std::clamp(s, 0.0, 1.0);
    return sims;
  }

  std::vector<double> class_scores(const WeightedVector& v) const override {
    const auto sims = similarities(v);
    std::vector<std::uint32_t> order(sims.size());
    std::iota(order.begin(), order.end(), 0U);
    // Nearest first; equal similarity keeps training order.
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k_), order.end(),
                      [&sims](std::uint32_t a, std::uint32_t b) {
                        return sims[a] != sims[b] ? sims[a] > sims[b] : a < b;
                      });
    std::vector<double> scores(num_classes_, 0.0);
    for (std::size_t i = 0; i < k_; ++i) scores[labels_[order[i]]] += sims[order[i]];
    return scores;
  }

 private:
  std::size_t k_;
  std::size_t num_classes_;
  std::vector<std::size_t> labels_;
  std::vector<std::vector<std::pair<std::uint32_t, double>>> postings_;
};

class CentroidClassifier final : public Classifier {
 public:
  CentroidClassifier(std::span<const LabeledVector> train, std::size_t num_classes) {
    std::vector<std::vector<double>> sums(num_classes);
    std::vector<std::size_t> counts(num_classes, 0);
    for (const auto& lv : train) {
      if (lv.label >= num_classes) throw ValidationError("training label out of range");
      ++counts[lv.label];
      auto& sum = sums[lv.label];
      for (const auto& [t, w] : lv.vector.entries) {
        if (t >= sum.size()) sum.resize(static_cast<std::size_t>(t) + 1, 0.0);
        sum[t] += w;
      }
    }
    centroids_.reserve(num_classes);
    for (std::size_t c = 0; c < num_classes; ++c) {
      if (counts[c] == 0) throw ValidationError("centroid classifier: class " + std::to_string(c) + " is empty");
      std::vector<std::pair<TermId, double>> mean;
      for (std::size_t t = 0; t < sums[c].size(); ++t)
        if (sums[c][t] > 0.0) mean.emplace_back(static_cast<TermId>(t), sums[c][t] / static_cast<double>(counts[c]));
      centroids_.push_back(WeightedVector::normalized(std::move(mean)));
    }
  }

  ClassifierKind kind() const override { return ClassifierKind::Centroid; }
  std::size_t num_classes() const override { return centroids_.size(); }
  const std::vector<WeightedVector>& centroids() const { return centroids_; }

  std::vector<double> class_scores(const WeightedVector& v) const override {
    std::vector<double> scores;
    scores.reserve(centroids_.size());
    for (const auto& c : centroids_) scores.push_back(cosine(v, c));
    return scores;
  }

 private:
  std::vector<WeightedVector> centroids_;
};

inline std::unique_ptr<Classifier> fit(std::span<const LabeledVector> train, std::size_t num_classes,
                                       const ClassifierParams& params) {
  if (params.kind == ClassifierKind::Knn) return std::make_unique<KnnClassifier>(train, num_classes, params.k);
  return std::make_unique<CentroidClassifier>(train, num_classes);
}

// ---------------------------------------------------------------------------
// Sparse line format for external tools

inline void write_sparse_vectors(std::ostream& out, std::span<const LabeledVector> vectors) {
  for (const auto& lv : vectors) {
    out << lv.label;
    for (const auto& [t, w] : lv.vector.entries) out << ' ' << (t + 1) << ':' << detail::format_double(w);
    out << '\n';
  }
}

/// Reads lines written by write_sparse_vectors. Weights are taken as given.
inline std::vector<LabeledVector> read_sparse_vectors(std::istream& in) {
  std::vector<LabeledVector> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream fields(line);
    LabeledVector lv;
    if (!(fields >> lv.label)) throw ParseError(line_no, "missing label");
    std::string pair;
    while (fields >> pair) {
      const auto colon = pair.find(':');
      if (colon == std::string::npos) throw ParseError(line_no, "expected index:weight, got " + pair);
      std::size_t index = 0;
      double weight = 0.0;
      try {
        index = std::stoul(pair.substr(0, colon));
        weight = std::stod(pair.substr(colon + 1));
      } catch (const std::exception&) {
        throw ParseError(line_no, "bad index:weight pair " + pair);
      }
      if (index == 0) throw ParseError(line_no, "feature indices are 1-based");
      lv.vector.entries.emplace_back(static_cast<TermId>(index - 1), weight);
    }
    lv.vector.zero = lv.vector.entries.empty();
    out.push_back(std::move(lv));
  }
  return out;
}

}  // namespace tfsel

#endif  // TFSEL_CLASSIFY_HPP
