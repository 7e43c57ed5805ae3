#ifndef TFSEL_EVAL_HPP
#define TFSEL_EVAL_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "tfsel/errors.hpp"

namespace tfsel {

struct ClassReport {
  std::string label;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::int64_t support = 0;
};

struct EvalReport {
  std::vector<ClassReport> per_class;
  double macro_f1 = 0.0;
  double micro_f1 = 0.0;
  double micro_precision = 0.0;
  double micro_recall = 0.0;
  double accuracy = 0.0;
  std::vector<std::vector<std::int64_t>> confusion;  // [gold][predicted]
};

namespace detail {

inline double safe_ratio(std::int64_t num, std::int64_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

inline double f1_of(double p, double r) { return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r); }

}  // namespace detail

/*
 Labels are class ids into categories. Precision, recall and F1 are 0 when
 their denominator is 0. Macro-F1 averages over every category, including
 ones with no support. Micro-F1 pools tp/fp/fn over classes and is computed
 as 2TP / (2TP + FP + FN), the count form of 2pr/(p+r).
*/
inline EvalReport evaluate(std::span<const std::size_t> gold, std::span<const std::size_t> predicted,
                           std::span<const std::string> categories) {
  if (gold.size() != predicted.size()) throw ValidationError("gold and predicted lengths differ");
  if (gold.empty()) throw ValidationError("nothing to evaluate");
  const std::size_t K = categories.size();

  EvalReport r;
  r.confusion.assign(K, std::vector<std::int64_t>(K, 0));
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (gold[i] >= K || predicted[i] >= K) throw ValidationError("label outside the category list");
    ++r.confusion[gold[i]][predicted[i]];
  }

  std::int64_t tp_all = 0, fp_all = 0, fn_all = 0;
  double f1_sum = 0.0;
  for (std::size_t c = 0; c < K; ++c) {
    std::int64_t tp = r.confusion[c][c], fp = 0, fn = 0;
    for (std::size_t o = 0; o < K; ++o) {
      if (o == c) continue;
      fp += r.confusion[o][c];
      fn += r.confusion[c][o];
    }
    ClassReport cr;
    cr.label = categories[c];
    cr.precision = detail::safe_ratio(tp, tp + fp);
    cr.recall = detail::safe_ratio(tp, tp + fn);
    cr.f1 = detail::f1_of(cr.precision, cr.recall);
    cr.support = tp + fn;
    f1_sum += cr.f1;
    r.per_class.push_back(std::move(cr));
    tp_all += tp;
    fp_all += fp;
    fn_all += fn;
  }
  r.macro_f1 = K == 0 ? 0.0 : f1_sum / static_cast<double>(K);
  r.micro_precision = detail::safe_ratio(tp_all, tp_all + fp_all);
  r.micro_recall = detail::safe_ratio(tp_all, tp_all + fn_all);
  r.micro_f1 = detail::safe_ratio(2 * tp_all, 2 * tp_all + fp_all + fn_all);
  r.accuracy = detail::safe_ratio(tp_all, static_cast<std::int64_t>(gold.size()));

  const double from_rates = detail::f1_of(r.micro_precision, r.micro_recall);
  if (std::abs(from_rates - r.micro_f1) > 1e-12)
    throw std::logic_error("micro-F1 disagrees with pooled precision/recall");
  return r;
}

/// String-label variant; every label must appear in categories.
inline EvalReport evaluate(std::span<const std::string> gold, std::span<const std::string> predicted,
                           std::span<const std::string> categories) {
  if (gold.size() != predicted.size()) throw ValidationError("gold and predicted lengths differ");
  auto index_of = [&categories](const std::string& label) {
    auto it = std::find(categories.begin(), categories.end(), label);
    if (it == categories.end()) throw ValidationError("unknown label: " + label);
    return static_cast<std::size_t>(it - categories.begin());
  };
  std::vector<std::size_t> g, p;
  g.reserve(gold.size());
  p.reserve(predicted.size());
  for (const auto& l : gold) g.push_back(index_of(l));
  for (const auto& l : predicted) p.push_back(index_of(l));
  return evaluate(std::span<const std::size_t>(g), std::span<const std::size_t>(p), categories);
}

inline nlohmann::json to_json(const EvalReport& r) {
  nlohmann::json per_class = nlohmann::json::array();
  for (const auto& c : r.per_class) {
    per_class.push_back({{"label", c.label},
                         {"precision", c.precision},
                         {"recall", c.recall},
                         {"f1", c.f1},
                         {"support", c.support}});
  }
  return {{"macro_f1", r.macro_f1}, {"micro_f1", r.micro_f1}, {"per_class", per_class}, {"confusion", r.confusion}};
}

}  // namespace tfsel

#endif  // TFSEL_EVAL_HPP
