// Copyright 2026 The surveylens Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include "metric_oracle.hpp"
#include "surveylens/evaluation.hpp"

namespace surveylens {
namespace {

using S = std::set<std::string>;

TEST(Jaccard, Examples) {
  EXPECT_DOUBLE_EQ(jaccard({"Curriculum", "Teaching"}, {"Curriculum", "Teaching"}), 1.0);
  EXPECT_DOUBLE_EQ(jaccard({"Curriculum"}, {"Teaching"}), 0.0);
  EXPECT_DOUBLE_EQ(jaccard({"Curriculum", "Teaching", "Assessment"}, {"Teaching", "Resources"}), 0.25);
  EXPECT_DOUBLE_EQ(jaccard({}, {}), 1.0);
}

TEST(Jaccard, SymmetryAndTriangleOnSamples) {
  std::mt19937 rng(3);
  std::uniform_int_distribution<int> coin(0, 1);
  auto draw = [&] {
    S s;
    for (const char* t : {"a", "b", "c", "d", "e"}) {
      if (coin(rng)) s.insert(t);
    }
    return s;
  };
  for (int i = 0; i < 500; ++i) {
    const S a = draw(), b = draw(), c = draw();
    EXPECT_DOUBLE_EQ(jaccard(a, b), jaccard(b, a));
    EXPECT_EQ(jaccard(a, b) == 1.0, a == b);
    EXPECT_LE(1 - jaccard(a, c), (1 - jaccard(a, b)) + (1 - jaccard(b, c)) + 1e-12);
  }
}

TEST(Prf, ZeroDenominatorsAreFlagged) {
  const Prf p = prf_from_counts(0, 0, 2);
  EXPECT_EQ(p.precision, 0.0);
  EXPECT_TRUE(p.precision_flagged);
  EXPECT_FALSE(p.recall_flagged);
  EXPECT_FALSE(p.f1_flagged);
  EXPECT_TRUE(prf_from_counts(0, 0, 0).f1_flagged);
}

TEST(LabelMatrix, FromSetsAndRestrict) {
  const LabelSets sets{{"r2", {"B"}}, {"r1", {"A", "B"}}};
  const LabelMatrix m = LabelMatrix::from_sets(sets, {"A", "B"});
  EXPECT_EQ(m.row_ids(), (std::vector<std::string>{"r1", "r2"}));
  EXPECT_TRUE(m.at(0, 0));
  EXPECT_FALSE(m.at(1, 0));
  EXPECT_EQ(m.to_sets(), sets);
  EXPECT_EQ(m.restrict_to({"r2"}).labels(0), (S{"B"}));
  EXPECT_THROW(LabelMatrix::from_sets({{"r1", {"Z"}}}, {"A"}), Error);
}

TEST(Multilabel, IdentityIsPerfect) {
  const LabelSets sets{{"r1", {"A"}}, {"r2", {"B", "C"}}, {"r3", {"A", "C"}}};
  const auto m = LabelMatrix::from_sets(sets, {"A", "B", "C"});
  const auto rep = multilabel_report(m, m);
  EXPECT_EQ(rep.mean_jaccard, 1.0);
  EXPECT_EQ(rep.hamming_loss, 0.0);
  EXPECT_EQ(rep.subset_accuracy, 1.0);
  EXPECT_EQ(rep.macro.f1, 1.0);
  EXPECT_EQ(rep.micro.precision, 1.0);
}

TEST(Multilabel, TwoRowHandExample) {
  const std::vector<std::string> tags{"A", "B", "C"};
  const auto pred = LabelMatrix::from_sets({{"r1", {"A"}}, {"r2", {"B", "C"}}}, tags);
  const auto truth = LabelMatrix::from_sets({{"r1", {"A", "B"}}, {"r2", {"B", "C"}}}, tags);
  const auto rep = multilabel_report(pred, truth);
  EXPECT_DOUBLE_EQ(rep.mean_jaccard, 0.75);
  EXPECT_DOUBLE_EQ(rep.hamming_loss, 1.0 / 6);
  EXPECT_DOUBLE_EQ(rep.subset_accuracy, 0.5);
  EXPECT_DOUBLE_EQ(rep.micro.precision, 1.0);
  EXPECT_DOUBLE_EQ(rep.micro.recall, 0.75);
  EXPECT_NEAR(rep.micro.f1, 6.0 / 7, 1e-12);
  EXPECT_DOUBLE_EQ(rep.macro.precision, 1.0);
  EXPECT_NEAR(rep.macro.recall, (1 + 0.5 + 1) / 3.0, 1e-12);
  EXPECT_NEAR(rep.macro.f1, (1 + 2.0 / 3 + 1) / 3.0, 1e-12);
}

TEST(Multilabel, EmptyPredictionRow) {
  const std::vector<std::string> tags{"A", "B", "C"};
  const auto rep = multilabel_report(LabelMatrix::from_sets({{"r1", {}}}, tags),
                                     LabelMatrix::from_sets({{"r1", {"A"}}}, tags));
  EXPECT_DOUBLE_EQ(rep.hamming_loss, 1.0 / 3);
  EXPECT_DOUBLE_EQ(rep.mean_jaccard, 0.0);
  EXPECT_DOUBLE_EQ(rep.avg_precision, 0.0);
}

TEST(Multilabel, IdMismatchListsBothSides) {
  const std::vector<std::string> tags{"A"};
  try {
    multilabel_report(LabelMatrix::from_sets({{"r1", {}}, {"r2", {}}}, tags),
                      LabelMatrix::from_sets({{"r1", {}}, {"r9", {}}}, tags));
    FAIL();
  } catch (const Error& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("r2"), std::string::npos);
    EXPECT_NE(msg.find("r9"), std::string::npos);
  }
}

TEST(Multilabel, CsvShapes) {
  const std::vector<std::string> tags{"A", "B"};
  const auto m = LabelMatrix::from_sets({{"r1", {"A"}}}, tags);
  const auto rep = multilabel_report(m, m);
  EXPECT_EQ(per_tag_csv(rep).substr(0, 20), "tag,precision,recall");
  EXPECT_EQ(summary_csv(rep).substr(0, summary_csv(rep).find('\n')),
            "jaccard,avg_precision,macro_p,macro_r,macro_f1,micro_p,micro_r,micro_f1,hamming_loss,subset_accuracy");
  EXPECT_NE(summary_csv(rep, true).find("avg_recall"), std::string::npos);
}

std::map<std::string, bool> bools(const std::string& pattern) {
  std::map<std::string, bool> out;
  for (std::size_t i = 0; i < pattern.size(); ++i) out["r" + std::to_string(10 + i)] = pattern[i] == 'y';
  return out;
}

TEST(Binary, ConfusionExample) {
  // TP=3 FP=1 FN=1 TN=5
  const auto rep = binary_report(bools("yyyyn" "nnnnn"), bools("yyyny" "nnnnn"));
  EXPECT_EQ(rep.tp, 3);
  EXPECT_EQ(rep.fp, 1);
  EXPECT_EQ(rep.fn, 1);
  EXPECT_EQ(rep.tn, 5);
  EXPECT_DOUBLE_EQ(rep.accuracy, 0.8);
  EXPECT_DOUBLE_EQ(rep.prf.precision, 0.75);
  EXPECT_DOUBLE_EQ(rep.prf.recall, 0.75);
  EXPECT_DOUBLE_EQ(rep.prf.f1, 0.75);
  EXPECT_EQ(binary_report_csv(rep),
            "accuracy,precision,recall,f1,tp,fp,fn,tn\n0.8000,0.7500,0.7500,0.7500,3,1,1,5\n");
}

TEST(Binary, Degenerate) {
  const auto rep = binary_report(bools("nnn"), bools("yyy"));
  EXPECT_TRUE(rep.prf.precision_flagged);
  EXPECT_EQ(rep.prf.precision, 0.0);
  EXPECT_EQ(rep.prf.recall, 0.0);
  const auto same = binary_report(bools("yny"), bools("yny"));
  EXPECT_EQ(same.accuracy, 1.0);
  EXPECT_EQ(same.prf.f1, 1.0);
}

TEST(Sentiment, OneMistakeOutOfSix) {
  using C = Sentiment3;
  const std::map<std::string, C> truth{{"1", C::kNegative}, {"2", C::kNegative}, {"3", C::kNeutral},
                                       {"4", C::kNeutral},  {"5", C::kPositive}, {"6", C::kPositive}};
  auto pred = truth;
  pred["3"] = C::kPositive;
  const auto rep = sentiment_report(pred, truth);
  EXPECT_DOUBLE_EQ(rep.accuracy, 5.0 / 6);
  EXPECT_DOUBLE_EQ(rep.per_class[1].prf.recall, 0.5);
  EXPECT_DOUBLE_EQ(rep.per_class[1].prf.precision, 1.0);
  EXPECT_NEAR(rep.per_class[2].prf.precision, 2.0 / 3, 1e-12);
  EXPECT_EQ(rep.confusion[1][2], 1);
  EXPECT_EQ(sentiment_report(truth, truth).macro.f1, 1.0);
}

TEST(Sentiment, MissingClassIsFlaggedZero) {
  using C = Sentiment3;
  const std::map<std::string, C> truth{{"1", C::kNegative}, {"2", C::kPositive}};
  const auto rep = sentiment_report(truth, truth);
  EXPECT_TRUE(rep.per_class[1].prf.recall_flagged);
  EXPECT_EQ(rep.per_class[1].prf.recall, 0.0);
  EXPECT_TRUE(rep.macro.recall_flagged);
  EXPECT_NEAR(rep.macro.recall, 2.0 / 3, 1e-12);
}

TEST(Metrics, PerfectAgreementEquivalences) {
  std::mt19937_64 rng(99);
  for (int i = 0; i < 200; ++i) {
    const auto in = oracle::random_instance(rng);
    const auto rep = multilabel_report(LabelMatrix::from_sets(in.pred, in.tags),
                                       LabelMatrix::from_sets(in.truth, in.tags));
    const bool h = rep.hamming_loss == 0.0;
    EXPECT_EQ(h, rep.subset_accuracy == 1.0);
    EXPECT_EQ(h, rep.mean_jaccard == 1.0);
  }
}

TEST(Metrics, MatchBruteForceOracle) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 1000; ++i) {
    const auto in = oracle::random_instance(rng);
    ASSERT_EQ(oracle::check_instance(in), "") << "trial " << i;
  }
}

TEST(Metrics, FormatMetric) {
  EXPECT_EQ(format_metric(0.75), "0.7500");
  EXPECT_EQ(format_metric(-0.0), "0.0000");
  EXPECT_EQ(format_metric(1.0 / 3, 2), "0.33");
}

}  // namespace
}  // namespace surveylens
