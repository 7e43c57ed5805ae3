#ifndef TFSEL_SCORING_HPP
#define TFSEL_SCORING_HPP

/*
 Feature scoring and top-N selection.

 Per-class methods (t-test, chi2, MI) produce K scores per term, merged by a
 combiner: AVG is the plain sum over classes, MAX the maximum. Single-valued
 methods (IG, ECE, DF, TF) produce one score.

 IG, MI and ECE read a Laplace-smoothed joint distribution over
 (term present/absent) x class: each of the 2K document-count cells gets +1,
 total N + 2K. All logarithms are natural.
*/

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tfsel/errors.hpp"
#include "tfsel/term_stats.hpp"

namespace tfsel {

enum class Method { TTest, Chi2, InfoGain, MutualInfo, CrossEntropy, DocFreq, TermFreq };
enum class Combiner { Avg, Max };

inline constexpr Method kAllMethods[] = {Method::TTest,        Method::Chi2,    Method::InfoGain,
                                         Method::MutualInfo,   Method::CrossEntropy,
                                         Method::DocFreq,      Method::TermFreq};

inline std::string_view to_string(Method m) {
  switch (m) {
    case Method::TTest: return "ttest";
    case Method::Chi2: return "chi2";
    case Method::InfoGain: return "ig";
    case Method::MutualInfo: return "mi";
    case Method::CrossEntropy: return "ece";
    case Method::DocFreq: return "df";
    case Method::TermFreq: return "tf";
  }
  return "?";
}

inline std::string_view to_string(Combiner c) { return c == Combiner::Avg ? "avg" : "max"; }

inline Method parse_method(std::string_view name) {
  for (auto m : kAllMethods)
    if (to_string(m) == name) return m;
  throw ValidationError("unknown method: " + std::string(name));
}

inline Combiner parse_combiner(std::string_view name) {
  if (name == "avg") return Combiner::Avg;
  if (name == "max") return Combiner::Max;
  throw ValidationError("unknown combiner: " + std::string(name));
}

inline bool is_per_class(Method m) {
  return m == Method::TTest || m == Method::Chi2 || m == Method::MutualInfo;
}

/// Floor for s_i in the t-test denominator.
inline constexpr double kDeviationFloor = 1e-9;

// ---------------------------------------------------------------------------
// Per (term, class) scores

/// |mean_k - mean| / (m_k * s_i), m_k = sqrt(1/N_k - 1/N).
inline double ttest_score(const TermStats& stats, TermId term, std::size_t k) {
  const auto N = static_cast<double>(stats.num_docs);
  const auto Nk = static_cast<double>(stats.class_docs.at(k));
  if (stats.class_docs[k] == stats.num_docs)
    throw ValidationError("t-test undefined when one class holds every document");
  const double numerator = std::abs(stats.class_mean(term)[k] - stats.tf_mean[term]);
  if (numerator == 0.0) return 0.0;
  const double m_k = std::sqrt(1.0 / Nk - 1.0 / N);
  const double s = std::max(pooled_deviation(stats, term), kDeviationFloor);
  return numerator / (m_k * s);
}

/// Document-frequency 2x2 contingency of a term against one class.
struct Contingency {
  double a;  // in class, has term
  double b;  // outside class, has term
  double c;  // in class, lacks term
  double d;  // outside class, lacks term
};

inline Contingency contingency(const TermStats& stats, TermId term, std::size_t k) {
  const auto a = static_cast<double>(stats.class_df(term)[k]);
  const auto df = static_cast<double>(stats.df[term]);
  const auto nk = static_cast<double>(stats.class_docs[k]);
  const auto n = static_cast<double>(stats.num_docs);
  return {a, df - a, nk - a, n - nk - (df - a)};
}

inline double chi2_score(const TermStats& stats, TermId term, std::size_t k) {
  const auto [a, b, c, d] = contingency(stats, term, k);
  const double denom = (a + c) * (b + d) * (a + b) * (c + d);
  if (denom == 0.0) return 0.0;
  const double cross = a * d - c * b;
  return static_cast<double>(stats.num_docs) * cross * cross / denom;
}

namespace detail {

inline double smoothed_total(const TermStats& s) {
  return static_cast<double>(s.num_docs) + 2.0 * static_cast<double>(s.num_classes());
}

// P(c) under the smoothed joint: (N_c + 2) / (N + 2K).
inline double smoothed_class_prior(const TermStats& s, std::size_t k) {
  return (static_cast<double>(s.class_docs[k]) + 2.0) / smoothed_total(s);
}

// P(t) under the smoothed joint: (df + K) / (N + 2K).
inline double smoothed_term_prob(const TermStats& s, TermId term) {
  return (static_cast<double>(s.df[term]) + static_cast<double>(s.num_classes())) / smoothed_total(s);
}

inline double entropy_term(double p) { return p > 0.0 ? -p * std::log(p) : 0.0; }

}  // namespace detail

/// ln( P(t,c) / (P(t) P(c)) ).
inline double mi_score(const TermStats& stats, TermId term, std::size_t k) {
  const double joint = (static_cast<double>(stats.class_df(term)[k]) + 1.0) / detail::smoothed_total(stats);
  return std::log(joint / (detail::smoothed_term_prob(stats, term) * detail::smoothed_class_prior(stats, k)));
}

// ---------------------------------------------------------------------------
// Single-valued scores

/// H(C) - P(t) H(C|t) - P(!t) H(C|!t), clipped at 0.
inline double ig_score(const TermStats& stats, TermId term) {
  const std::size_t K = stats.num_classes();
  const auto df_k = stats.class_df(term);
  const double present = static_cast<double>(stats.df[term]) + static_cast<double>(K);
  const double absent = static_cast<double>(stats.num_docs - stats.df[term]) + static_cast<double>(K);
  const double total = detail::smoothed_total(stats);

  double h_c = 0.0, h_given_t = 0.0, h_given_not_t = 0.0;
  for (std::size_t k = 0; k < K; ++k) {
    const double with_t = static_cast<double>(df_k[k]) + 1.0;
    const double without_t = static_cast<double>(stats.class_docs[k] - df_k[k]) + 1.0;
    h_c += detail::entropy_term((with_t + without_t) / total);
    h_given_t += detail::entropy_term(with_t / present);
    h_given_not_t += detail::entropy_term(without_t / absent);
  }
  const double ig = h_c - (present / total) * h_given_t - (absent / total) * h_given_not_t;
  return std::max(ig, 0.0);
}

/// P(t) sum_c P(c|t) ln( P(c|t) / P(c) ).
inline double ece_score(const TermStats& stats, TermId term) {
  const std::size_t K = stats.num_classes();
  const auto df_k = stats.class_df(term);
  const double present = static_cast<double>(stats.df[term]) + static_cast<double>(K);
  double sum = 0.0;
  for (std::size_t k = 0; k < K; ++k) {
    const double p_c_given_t = (static_cast<double>(df_k[k]) + 1.0) / present;
    sum += p_c_given_t * std::log(p_c_given_t / detail::smoothed_class_prior(stats, k));
  }
  return std::max(detail::smoothed_term_prob(stats, term) * sum, 0.0);
}

inline std::int64_t df_score(const TermStats& stats, TermId term) { return stats.df[term]; }
inline std::int64_t tf_score(const TermStats& stats, TermId term) { return stats.tf_total[term]; }

// ---------------------------------------------------------------------------
// Combined scores

inline double combine(std::span<const double> per_class, Combiner mode) {
  if (per_class.empty()) throw ValidationError("cannot combine an empty score vector");
  if (mode == Combiner::Max) return *std::max_element(per_class.begin(), per_class.end());
  double sum = 0.0;
  for (double v : per_class) sum += v;
  return sum;
}

struct FeatureScore {
  TermId term_id = 0;
  std::vector<double> per_class;  // empty for single-valued methods
  double combined = 0.0;
  Method method = Method::TTest;
};

inline double class_score(const TermStats& stats, TermId term, std::size_t k, Method method) {
  switch (method) {
    case Method::TTest: return ttest_score(stats, term, k);
    case Method::Chi2: return chi2_score(stats, term, k);
    case Method::MutualInfo: return mi_score(stats, term, k);
    default: throw ValidationError("method has no per-class score: " + std::string(to_string(method)));
  }
}

inline FeatureScore score_term(const TermStats& stats, TermId term, Method method, Combiner combiner) {
  if (term >= stats.num_terms()) throw ValidationError("term id out of range");
  FeatureScore fs;
  fs.term_id = term;
  fs.method = method;
  switch (method) {
    case Method::InfoGain: fs.combined = ig_score(stats, term); break;
    case Method::CrossEntropy: fs.combined = ece_score(stats, term); break;
    case Method::DocFreq: fs.combined = static_cast<double>(df_score(stats, term)); break;
    case Method::TermFreq: fs.combined = static_cast<double>(tf_score(stats, term)); break;
    default:
      fs.per_class.resize(stats.num_classes());
      for (std::size_t k = 0; k < stats.num_classes(); ++k) fs.per_class[k] = class_score(stats, term, k, method);
      fs.combined = combine(fs.per_class, combiner);
  }
  return fs;
}

inline std::vector<FeatureScore> score_all(const TermStats& stats, Method method, Combiner combiner) {
  std::vector<FeatureScore> out;
  out.reserve(stats.num_terms());
  for (std::size_t t = 0; t < stats.num_terms(); ++t)
    out.push_back(score_term(stats, static_cast<TermId>(t), method, combiner));
  return out;
}

/// Descending combined score; equal scores fall back to ascending term id,
/// which is lexicographic term order because the vocabulary is sorted.
inline void rank_scores(std::vector<FeatureScore>& scores) {
  std::sort(scores.begin(), scores.end(), [](const FeatureScore& a, const FeatureScore& b) {
    if (a.combined != b.combined) return a.combined > b.combined;
    return a.term_id < b.term_id;
  });
}

// ---------------------------------------------------------------------------
// Selection

/// Requested feature-set size; kAllFeatures keeps the full vocabulary.
inline constexpr std::size_t kAllFeatures = std::numeric_limits<std::size_t>::max();

struct FeatureSet {
  Method method = Method::TTest;
  Combiner combiner = Combiner::Avg;
  std::vector<TermId> selected;  // descending score
  std::vector<double> scores;    // combined score of each selected term
  std::size_t size = kAllFeatures;
};

inline FeatureSet select_from_scores(std::vector<FeatureScore> scores, Method method, Combiner combiner,
                                     std::size_t n) {
  if (n == 0) throw ValidationError("feature count must be at least 1");
  rank_scores(scores);
  FeatureSet fs{method, combiner, {}, {}, n};
  const std::size_t keep = std::min(n, scores.size());
  fs.selected.reserve(keep);
  fs.scores.reserve(keep);
  for (std::size_t i = 0; i < keep; ++i) {
    fs.selected.push_back(scores[i].term_id);
    fs.scores.push_back(scores[i].combined);
  }
  return fs;
}

inline FeatureSet select_features(const TermStats& stats, Method method, Combiner combiner, std::size_t n) {
  if (n == 0) throw ValidationError("feature count must be at least 1");
  return select_from_scores(score_all(stats, method, combiner), method, combiner, n);
}

// ---------------------------------------------------------------------------
// CSV score dump: term,method,combiner,combined,<one column per category>

namespace detail {

inline std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

inline std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace detail

inline void write_score_header(std::ostream& out, const TermStats& stats) {
  out << "term,method,combiner,combined";
  for (const auto& c : stats.categories) out << ',' << detail::csv_field(c);
  out << '\n';
}

inline void write_score_row(std::ostream& out, const TermStats& stats, const FeatureScore& fs, Combiner combiner) {
  out << detail::csv_field(stats.vocab[fs.term_id]) << ',' << to_string(fs.method) << ','
      << (is_per_class(fs.method) ? to_string(combiner) : "") << ',' << detail::format_double(fs.combined);
  for (std::size_t k = 0; k < stats.num_classes(); ++k) {
    out << ',';
    if (!fs.per_class.empty()) out << detail::format_double(fs.per_class[k]);
  }
  out << '\n';
}

/// Row for a term missing from the vocabulary: every score cell empty.
inline void write_missing_row(std::ostream& out, const TermStats& stats, std::string_view term, Method method,
                              Combiner combiner) {
  out << detail::csv_field(term) << ',' << to_string(method) << ','
      << (is_per_class(method) ? to_string(combiner) : "") << ',';
  for (std::size_t k = 0; k < stats.num_classes(); ++k) out << ',';
  out << '\n';
}

}  // namespace tfsel

#endif  // TFSEL_SCORING_HPP
