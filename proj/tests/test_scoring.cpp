#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "oracle/dense_oracle.hpp"
#include "tfsel/scoring.hpp"

using tfsel::Combiner;
using tfsel::Method;
using tfsel::TermStats;
namespace oracle = tfsel::oracle;

namespace {

// Two classes of `per_class` documents each; term "t" appears once in the
// first `in0` documents of class 0 and the first `in1` of class 1. A filler
// term keeps the vocabulary non-trivial.
TermStats two_class(int per_class, int in0, int in1) {
  oracle::DenseCorpus dc;
  dc.num_classes = 2;
  for (int k = 0; k < 2; ++k) {
    for (int j = 0; j < per_class; ++j) {
      dc.labels.push_back(static_cast<std::size_t>(k));
      const bool has = j < (k == 0 ? in0 : in1);
      dc.tf.push_back({has ? 1 : 0, 1});
    }
  }
  return oracle::to_stats(dc);
}

double entropy2(double p, double q) { return -p * std::log(p) - q * std::log(q); }

// 2 classes x 2 docs; term 1 counts [2, 4] | [0, 0].
oracle::DenseCorpus hand_corpus() {
  oracle::DenseCorpus dc;
  dc.num_classes = 2;
  dc.labels = {0, 0, 1, 1};
  dc.tf = {{1, 2}, {1, 4}, {1, 0}, {1, 0}};
  return dc;
}

}  // namespace

TEST(TTest, HandComputedFixture) {
  const auto s = oracle::to_stats(hand_corpus());
  // |3 - 1.5| / (sqrt(1/2 - 1/4) * 1) = 3, and symmetric for the other class.
  EXPECT_DOUBLE_EQ(tfsel::ttest_score(s, 1, 0), 3.0);
  EXPECT_DOUBLE_EQ(tfsel::ttest_score(s, 1, 1), 3.0);
  EXPECT_DOUBLE_EQ(tfsel::score_term(s, 1, Method::TTest, Combiner::Avg).combined, 6.0);
  EXPECT_DOUBLE_EQ(tfsel::score_term(s, 1, Method::TTest, Combiner::Max).combined, 3.0);
}

TEST(TTest, ConstantTermScoresZero) {
  const auto s = oracle::to_stats(hand_corpus());
  EXPECT_EQ(tfsel::ttest_score(s, 0, 0), 0.0);
  EXPECT_EQ(tfsel::score_term(s, 0, Method::TTest, Combiner::Avg).combined, 0.0);
}

TEST(TTest, ZeroVarianceUsesFloor) {
  // Constant within each class, different across classes: s = 0, numerator > 0.
  oracle::DenseCorpus dc;
  dc.num_classes = 2;
  dc.labels = {0, 0, 1, 1};
  dc.tf = {{3}, {3}, {1}, {1}};
  const auto s = oracle::to_stats(dc);
  const double expected = 1.0 / (0.5 * tfsel::kDeviationFloor);
  EXPECT_DOUBLE_EQ(tfsel::ttest_score(s, 0, 0), expected);
  EXPECT_TRUE(std::isfinite(tfsel::ttest_score(s, 0, 0)));
}

TEST(Chi2, HandComputedTables) {
  // A=2, B=0, C=0, D=2
  EXPECT_DOUBLE_EQ(tfsel::chi2_score(two_class(2, 2, 0), 0, 0), 4.0);
  // A=B=C=D=1
  EXPECT_DOUBLE_EQ(tfsel::chi2_score(two_class(2, 1, 1), 0, 0), 0.0);
  // Term in every document: zero marginal.
  EXPECT_EQ(tfsel::chi2_score(two_class(3, 3, 3), 0, 0), 0.0);
}

TEST(MutualInfo, IndependentTermNearZero) {
  const auto s = two_class(50, 25, 25);
  EXPECT_LE(std::abs(tfsel::mi_score(s, 0, 0)), 1e-2);
  EXPECT_LE(std::abs(tfsel::mi_score(s, 0, 1)), 1e-2);
}

TEST(MutualInfo, PerfectIndicator) {
  const auto s = two_class(10, 10, 0);
  // P(t,c) = 11/24, P(t) = 12/24, P(c) = 12/24.
  EXPECT_NEAR(tfsel::mi_score(s, 0, 0), std::log(11.0 / 6.0), 1e-12);
}

TEST(MutualInfo, FavoursRareTerms) {
  oracle::DenseCorpus dc;
  dc.num_classes = 2;
  for (int j = 0; j < 20; ++j) {
    dc.labels.push_back(j < 10 ? 0 : 1);
    dc.tf.push_back({j == 0 ? 1 : 0, 1});  // rare: one class-0 doc; common: all docs
  }
  const auto s = oracle::to_stats(dc);
  EXPECT_GT(tfsel::mi_score(s, 0, 0), tfsel::mi_score(s, 1, 0));
}

TEST(InfoGain, PerfectIndicator) {
  const auto s = two_class(10, 10, 0);
  EXPECT_NEAR(tfsel::ig_score(s, 0), std::log(2.0) - entropy2(11.0 / 12.0, 1.0 / 12.0), 1e-12);
}

TEST(InfoGain, TermInEveryDocument) {
  EXPECT_NEAR(tfsel::ig_score(two_class(10, 10, 10), 0), 0.0, 1e-12);
}

TEST(CrossEntropy, PerfectIndicator) {
  const auto s = two_class(10, 10, 0);
  EXPECT_NEAR(tfsel::ece_score(s, 0), 0.5 * (std::log(2.0) - entropy2(11.0 / 12.0, 1.0 / 12.0)), 1e-12);
}

TEST(FrequencyBaselines, DocAndTermFrequency) {
  oracle::DenseCorpus dc;
  dc.num_classes = 2;
  dc.labels = {0, 1, 1};
  dc.tf = {{3}, {0}, {5}};
  const auto s = oracle::to_stats(dc);
  EXPECT_EQ(tfsel::df_score(s, 0), 2);
  EXPECT_EQ(tfsel::tf_score(s, 0), 8);
}

TEST(Combine, AverageIsSumAndMaxIsMax) {
  const std::vector<double> v = {1.0, 4.0, 2.5};
  EXPECT_DOUBLE_EQ(tfsel::combine(v, Combiner::Avg), 7.5);
  EXPECT_DOUBLE_EQ(tfsel::combine(v, Combiner::Max), 4.0);
  const std::vector<double> single = {2.0};
  EXPECT_DOUBLE_EQ(tfsel::combine(single, Combiner::Avg), 2.0);
  EXPECT_THROW(tfsel::combine(std::vector<double>{}, Combiner::Avg), tfsel::ValidationError);
}

TEST(Parse, MethodAndCombinerNames) {
  for (auto m : tfsel::kAllMethods) EXPECT_EQ(tfsel::parse_method(tfsel::to_string(m)), m);
  EXPECT_EQ(tfsel::parse_combiner("max"), Combiner::Max);
  EXPECT_THROW(tfsel::parse_method("bogus"), tfsel::ValidationError);
  EXPECT_THROW(tfsel::parse_combiner("median"), tfsel::ValidationError);
}

TEST(Select, TopNAndTieBreak) {
  std::vector<tfsel::FeatureScore> scores(4);
  const double combined[] = {1.0, 3.0, 3.0, 2.0};
  for (std::size_t i = 0; i < 4; ++i) {
    scores[i].term_id = static_cast<tfsel::TermId>(i);
    scores[i].combined = combined[i];
  }
  const auto fs = tfsel::select_from_scores(scores, Method::TTest, Combiner::Avg, 3);
  EXPECT_EQ(fs.selected, (std::vector<tfsel::TermId>{1, 2, 3}));
  EXPECT_EQ(fs.scores, (std::vector<double>{3.0, 3.0, 2.0}));

  const auto all = tfsel::select_from_scores(scores, Method::TTest, Combiner::Avg, tfsel::kAllFeatures);
  EXPECT_EQ(all.selected.size(), 4u);
  EXPECT_THROW(tfsel::select_from_scores(scores, Method::TTest, Combiner::Avg, 0), tfsel::ValidationError);
}

TEST(Select, PlantedDiscriminativeTermsRankFirst) {
  std::mt19937_64 rng(3);
  oracle::DenseCorpus dc;
  dc.num_classes = 3;
  const std::size_t planted = 3, noise = 40;
  std::poisson_distribution<int> bg(1.0), hi(6.0);
  for (std::size_t j = 0; j < 60; ++j) {
    const std::size_t k = j % 3;
    dc.labels.push_back(k);
    std::vector<std::int64_t> row;
    for (std::size_t t = 0; t < planted + noise; ++t) row.push_back(t == k ? hi(rng) : bg(rng));
    dc.tf.push_back(row);
  }
  const auto s = oracle::to_stats(dc);
  for (auto m : {Method::TTest, Method::Chi2}) {
    auto fs = tfsel::select_features(s, m, Combiner::Avg, planted);
    std::sort(fs.selected.begin(), fs.selected.end());
    EXPECT_EQ(fs.selected, (std::vector<tfsel::TermId>{0, 1, 2})) << tfsel::to_string(m);
  }
}

// Every scorer against loops over the dense count matrix.
TEST(Scorers, MatchDenseOracleOnRandomCorpora) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 100; ++trial) {
    const auto dc = oracle::random_corpus(rng);
    const auto s = oracle::to_stats(dc);
    for (std::size_t t = 0; t < dc.num_terms(); ++t) {
      const auto id = static_cast<tfsel::TermId>(t);
      for (std::size_t k = 0; k < dc.num_classes; ++k) {
        EXPECT_TRUE(oracle::close(tfsel::ttest_score(s, id, k), oracle::ttest(dc, t, k)));
        EXPECT_TRUE(oracle::close(tfsel::chi2_score(s, id, k), oracle::chi2(dc, t, k)));
        EXPECT_TRUE(oracle::close(tfsel::mi_score(s, id, k), oracle::mi(dc, t, k)));
      }
      EXPECT_TRUE(oracle::close(tfsel::ig_score(s, id), oracle::ig(dc, t)))
          << tfsel::ig_score(s, id) << " vs " << oracle::ig(dc, t);
      EXPECT_TRUE(oracle::close(tfsel::ece_score(s, id), oracle::ece(dc, t)));
      EXPECT_EQ(tfsel::df_score(s, id), oracle::df(dc, t));
      EXPECT_EQ(tfsel::tf_score(s, id), oracle::tf(dc, t));
    }
  }
}

TEST(Scorers, NonNegative) {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 50; ++trial) {
    const auto s = oracle::to_stats(oracle::random_corpus(rng));
    for (auto m : {Method::TTest, Method::Chi2, Method::InfoGain, Method::CrossEntropy, Method::DocFreq,
                   Method::TermFreq})
      for (const auto& fs : tfsel::score_all(s, m, Combiner::Avg)) EXPECT_GE(fs.combined, 0.0);
  }
}

// Multiplying every count by c scales means and deviation alike.
TEST(TTest, InvariantUnderCountScaling) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 30; ++trial) {
    auto dc = oracle::random_corpus(rng);
    const auto base = oracle::to_stats(dc);
    for (auto& row : dc.tf)
      for (auto& v : row) v *= 7;
    const auto scaled = oracle::to_stats(dc);
    for (std::size_t t = 0; t < dc.num_terms(); ++t) {
      if (tfsel::pooled_deviation(base, static_cast<tfsel::TermId>(t)) == 0.0) continue;  // floor is not scaled
      for (std::size_t k = 0; k < dc.num_classes; ++k)
        EXPECT_TRUE(oracle::close(tfsel::ttest_score(base, static_cast<tfsel::TermId>(t), k),
                                  tfsel::ttest_score(scaled, static_cast<tfsel::TermId>(t), k)));
    }
  }
}

// Summing and averaging per-class scores differ by the constant K, so the
// ranking is the same.
TEST(Combine, SumAndMeanRankIdentically) {
  std::mt19937_64 rng(24);
  for (int trial = 0; trial < 30; ++trial) {
    const auto s = oracle::to_stats(oracle::random_corpus(rng));
    auto summed = tfsel::score_all(s, Method::TTest, Combiner::Avg);
    auto averaged = summed;
    for (auto& fs : averaged) fs.combined /= static_cast<double>(s.num_classes());
    const auto a = tfsel::select_from_scores(summed, Method::TTest, Combiner::Avg, tfsel::kAllFeatures);
    const auto b = tfsel::select_from_scores(averaged, Method::TTest, Combiner::Avg, tfsel::kAllFeatures);
    EXPECT_EQ(a.selected, b.selected);
  }
}

// Reordering documents changes nothing; relabelling classes permutes the
// per-class columns and leaves combined scores unchanged.
TEST(Scorers, DocumentAndClassPermutationEquivariance) {
  std::mt19937_64 rng(25);
  for (int trial = 0; trial < 30; ++trial) {
    const auto dc = oracle::random_corpus(rng);
    auto shuffled = dc;
    std::vector<std::size_t> order(dc.num_docs());
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<std::size_t> relabel(dc.num_classes);
    std::iota(relabel.begin(), relabel.end(), 0);
    std::shuffle(relabel.begin(), relabel.end(), rng);
    for (std::size_t j = 0; j < order.size(); ++j) {
      shuffled.labels[j] = relabel[dc.labels[order[j]]];
      shuffled.tf[j] = dc.tf[order[j]];
    }
    const auto a = oracle::to_stats(dc);
    const auto b = oracle::to_stats(shuffled);
    for (auto m : {Method::TTest, Method::Chi2, Method::MutualInfo, Method::InfoGain, Method::CrossEntropy}) {
      const auto sa = tfsel::score_all(a, m, Combiner::Avg);
      const auto sb = tfsel::score_all(b, m, Combiner::Avg);
      for (std::size_t t = 0; t < sa.size(); ++t) {
        EXPECT_TRUE(oracle::close(sa[t].combined, sb[t].combined, 1e-9, 1e-9));
        for (std::size_t k = 0; k < sa[t].per_class.size(); ++k)
          EXPECT_TRUE(oracle::close(sa[t].per_class[k], sb[t].per_class[relabel[k]]));
      }
    }
  }
}

TEST(ScoreCsv, HeaderAndRows) {
  const auto s = oracle::to_stats(hand_corpus());
  std::ostringstream out;
  tfsel::write_score_header(out, s);
  tfsel::write_score_row(out, s, tfsel::score_term(s, 1, Method::TTest, Combiner::Avg), Combiner::Avg);
  tfsel::write_score_row(out, s, tfsel::score_term(s, 1, Method::DocFreq, Combiner::Avg), Combiner::Avg);
  tfsel::write_missing_row(out, s, "zzz", Method::Chi2, Combiner::Max);
  EXPECT_EQ(out.str(),
            "term,method,combiner,combined,c0,c1\n"
            "t000001,ttest,avg,6,3,3\n"
            "t000001,df,,2,,\n"
            "zzz,chi2,max,,,\n");
}
