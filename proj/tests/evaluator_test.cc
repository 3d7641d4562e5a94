/* Copyright 2026 The Stackprop Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "stackprop/evaluator.h"

#include <cmath>
#include <random>

#include "gtest/gtest.h"
#include "model_util.h"
#include "stackprop/errors.h"
#include "stackprop/model.h"

namespace stackprop {
namespace {

Sentence Annotated(const std::vector<std::string> &forms,
                   const std::vector<std::string> &tags,
                   const std::vector<int> &heads,
                   const std::vector<std::string> &labels) {
  Sentence s;
  s.id = "s";
  for (size_t i = 0; i < forms.size(); ++i) {
    Token t;
    t.index = static_cast<int>(i + 1);
    t.form = forms[i];
    t.upos = tags[i];
    t.head = heads[i];
    t.deprel = labels[i];
    s.tokens.push_back(t);
  }
  return s;
}

Sentence Gold5() {
  return Annotated({"The", "cat", "sat", "down", "."},
                   {"DET", "NOUN", "VERB", "ADV", "PUNCT"}, {2, 3, 0, 3, 3},
                   {"det", "nsubj", "root", "advmod", "punct"});
}

TEST(AttachmentScoresTest, HandComputedFixture) {
  const Sentence gold = Gold5();
  // Heads right on tokens 1, 3, 5; labels right on 1 and 3 only.
  const Sentence pred =
      Annotated({"The", "cat", "sat", "down", "."},
                {"DET", "VERB", "VERB", "ADV", "PUNCT"}, {2, 1, 0, 2, 3},
                {"det", "nsubj", "root", "advmod", "dep"});
  const EvalReport r = AttachmentScores({gold}, {pred});
  EXPECT_EQ(r.n_tokens, 5);
  EXPECT_DOUBLE_EQ(r.uas, 0.6);
  EXPECT_DOUBLE_EQ(r.las, 0.4);
  ASSERT_TRUE(r.pos_acc.has_value());
  EXPECT_DOUBLE_EQ(*r.pos_acc, 0.8);

  const EvalReport no_punct = AttachmentScores({gold}, {pred}, false);
  EXPECT_EQ(no_punct.n_tokens, 4);
  EXPECT_DOUBLE_EQ(no_punct.uas, 0.5);
  EXPECT_DOUBLE_EQ(no_punct.las, 0.5);
  // Tagging accuracy still covers the punctuation token.
  EXPECT_EQ(no_punct.pos_total, 5);
}

TEST(AttachmentScoresTest, AllLabelsWrong) {
  const Sentence gold = Gold5();
  Sentence pred = gold;
  for (Token &t : pred.tokens) t.deprel = "x";
  const EvalReport r = AttachmentScores({gold}, {pred});
  EXPECT_DOUBLE_EQ(r.uas, 1.0);
  EXPECT_DOUBLE_EQ(r.las, 0.0);
  EXPECT_LE(r.las, r.uas);
}

TEST(AttachmentScoresTest, PredictedFieldsTakePrecedence) {
  const Sentence gold = Gold5();
  Sentence pred = gold;
  for (Token &t : pred.tokens) {
    t.pred_head = 0;
    t.pred_deprel = "root";
    t.pred_upos = "X";
  }
  const EvalReport r = AttachmentScores({gold}, {pred});
  EXPECT_DOUBLE_EQ(r.uas, 0.2);
  EXPECT_DOUBLE_EQ(r.las, 0.2);
  EXPECT_DOUBLE_EQ(*r.pos_acc, 0.0);
}

TEST(AttachmentScoresTest, MissingTagsMeanNoPosScore) {
  Sentence gold = Gold5();
  for (Token &t : gold.tokens) t.upos = "_";
  const EvalReport r = AttachmentScores({gold}, {gold});
  EXPECT_FALSE(r.pos_acc.has_value());
  // Without tags the form decides what counts as punctuation.
  EXPECT_EQ(AttachmentScores({gold}, {gold}, false).n_tokens, 4);
  EXPECT_TRUE(IsPunctuation(gold.tokens[4]));
  EXPECT_FALSE(IsPunctuation(gold.tokens[0]));
}

TEST(AttachmentScoresTest, MismatchesAreDataErrors) {
  const Sentence gold = Gold5();
  Sentence other = gold;
  other.tokens[1].form = "dog";
  EXPECT_THROW(AttachmentScores({gold}, {other}), DataError);
  other = gold;
  other.tokens.pop_back();
  EXPECT_THROW(AttachmentScores({gold}, {other}), DataError);
  EXPECT_THROW(AttachmentScores({gold}, {}), DataError);
}

TEST(AttachmentScoresTest, CorpusScoreIsTokenWeightedMean) {
  const std::vector<Sentence> gold = testing::SyntheticCorpus(40, 3);
  std::mt19937_64 rng(4);
  std::vector<Sentence> pred = gold;
  for (Sentence &s : pred) {
    for (Token &t : s.tokens) {
      if (rng() % 3 == 0) t.head = static_cast<int>(rng() % (s.size() + 1));
      if (rng() % 4 == 0) t.deprel = "dep";
    }
  }
  const EvalReport r = AttachmentScores(gold, pred);
  double uas = 0.0;
  double las = 0.0;
  int64_t tokens = 0;
  for (const SentenceScore &s : r.sentences) {
    uas += s.tokens * s.uas();
    las += s.tokens * s.las();
    tokens += s.tokens;
    EXPECT_LE(s.las(), s.uas());
  }
  EXPECT_EQ(tokens, r.n_tokens);
  EXPECT_NEAR(uas / tokens, r.uas, 1e-12);
  EXPECT_NEAR(las / tokens, r.las, 1e-12);
  EXPECT_GT(r.uas, 0.0);
  EXPECT_LT(r.uas, 1.0);
}

TEST(CascadeTest, SplitsOnReferenceTaggerErrors) {
  const Sentence gold = Gold5();
  Sentence reference = gold;
  reference.tokens[1].pred_upos = "VERB";  // wrong
  reference.tokens[3].pred_upos = "ADJ";   // wrong
  Sentence parsed = gold;
  parsed.tokens[1].head = 1;  // wrong on an error token
  parsed.tokens[2].deprel = "dep";  // wrong on a clean token
  const CascadeBreakdown c =
      ComputeCascadeBreakdown({gold}, {parsed}, {reference});
  EXPECT_EQ(c.error_tokens, 2);
  EXPECT_EQ(c.rest_tokens, 3);
  EXPECT_DOUBLE_EQ(*c.las_on_tagger_errors, 0.5);
  EXPECT_DOUBLE_EQ(*c.las_on_rest, 2.0 / 3.0);

  const CascadeBreakdown clean =
      ComputeCascadeBreakdown({gold}, {parsed}, {gold});
  EXPECT_FALSE(clean.las_on_tagger_errors.has_value());
  EXPECT_EQ(clean.rest_tokens, 5);
}

// Two-sided p value by Simpson integration of the Student t density.
double ReferenceP(double t, int dof) {
  const double nu = dof;
  const double c = std::exp(std::lgamma((nu + 1) / 2) - std::lgamma(nu / 2)) /
                   std::sqrt(nu * M_PI);
  auto f = [&](double x) { return c * std::pow(1 + x * x / nu, -(nu + 1) / 2); };
  const double b = std::abs(t);
  const int n = 200000;
  const double h = b / n;
  double sum = f(0) + f(b);
  for (int i = 1; i < n; ++i) sum += (i % 2 ? 4 : 2) * f(i * h);
  return 1.0 - 2.0 * sum * h / 3.0;
}

TEST(TTestTest, MatchesDirectFormula) {
  std::mt19937_64 rng(6);
  std::normal_distribution<double> noise(0.02, 0.05);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 5 + trial * 3;
    std::vector<double> d(n);
    for (double &x : d) x = noise(rng);
    double mean = 0.0;
    for (double x : d) mean += x;
    mean /= n;
    double ss = 0.0;
    for (double x : d) ss += (x - mean) * (x - mean);
    const double t = mean / std::sqrt(ss / (n - 1) / n);
    const TTestResult r = PairedTTest(d);
    EXPECT_EQ(r.degrees_of_freedom, n - 1);
    EXPECT_NEAR(r.t, t, 1e-12 * std::max(1.0, std::abs(t)));
    EXPECT_NEAR(r.p, ReferenceP(t, n - 1), 1e-7);
  }
  // Textbook critical value: t = 2.228 at 10 degrees of freedom is p = 0.05.
  // Offsets +-1 (five each) and one 0 have unit standard deviation.
  std::vector<double> d(11, 2.228 / std::sqrt(11.0));
  for (int i = 0; i < 5; ++i) {
    d[i] += 1.0;
    d[5 + i] -= 1.0;
  }
  const TTestResult r = PairedTTest(d);
  EXPECT_NEAR(r.t, 2.228, 1e-12);
  EXPECT_NEAR(r.p, 0.05, 2e-4);
}

TEST(TTestTest, DegenerateInputs) {
  const std::vector<double> zeros(10, 0.0);
  EXPECT_EQ(PairedTTest(zeros).p, 1.0);
  const std::vector<double> shift(30, 0.01);
  EXPECT_LT(PairedTTest(shift).p, 0.001);
  EXPECT_THROW(PairedTTest(std::vector<double>{0.5}), DataError);
  EXPECT_THROW(PairedTTest(std::vector<double>{}), DataError);
}

TEST(TTestTest, ReportsAreComparedPerSentence) {
  const std::vector<Sentence> gold = testing::SyntheticCorpus(30, 5);
  const EvalReport same = AttachmentScores(gold, gold);
  EXPECT_EQ(PairedSignificance(same, same).p, 1.0);
  // Break one head per sentence on a copy: a consistent loss.
  std::vector<Sentence> worse = gold;
  for (Sentence &s : worse) {
    Token &t = s.tokens[0];
    t.head = t.head == 0 ? 1 + (t.index % s.size()) : 0;
    if (t.head == t.index) t.head = 0;
  }
  const TTestResult r =
      PairedSignificance(same, AttachmentScores(gold, worse));
  EXPECT_GT(r.t, 0.0);
  EXPECT_LT(r.p, 0.001);
  EvalReport short_report = same;
  short_report.sentences.pop_back();
  EXPECT_THROW(PairedSignificance(same, short_report), DataError);
}

TEST(CosineTest, Basics) {
  Eigen::RowVectorXd a(3), b(3);
  a << 1, 0, 0;
  b << 0, 2, 0;
  EXPECT_DOUBLE_EQ(CosineSimilarity(a, a), 1.0);
  EXPECT_DOUBLE_EQ(CosineSimilarity(a, b), 0.0);
  EXPECT_DOUBLE_EQ(CosineSimilarity(a, -3 * a), -1.0);
  EXPECT_DOUBLE_EQ(CosineSimilarity(a, Eigen::RowVectorXd::Zero(3)), 0.0);
  b << 1, 1, 0;
  EXPECT_NEAR(CosineSimilarity(a, b), 1 / std::sqrt(2.0), 1e-15);
}

TEST(NeighborsTest, OrderAndLimits) {
  Matrix s0(3, 2), s1(2, 2);
  s0 << 1, 0,   // query
      0, 1,     //
      2, 0;     // exact direction
  s1 << 1, 1,   //
      3, 0;     // exact direction, later in corpus order
  const std::vector<Matrix> acts = {s0, s1};
  const std::vector<Neighbor> n = NearestNeighbors(acts, 0, 1, 10);
  ASSERT_EQ(n.size(), 4u);  // everything but the query
  EXPECT_EQ(n[0].sentence, 0);
  EXPECT_EQ(n[0].token, 3);
  EXPECT_EQ(n[1].sentence, 1);
  EXPECT_EQ(n[1].token, 2);
  EXPECT_DOUBLE_EQ(n[1].similarity, 1.0);
  EXPECT_EQ(n[2].token, 1);
  EXPECT_EQ(n[3].sentence, 0);
  EXPECT_EQ(n[3].token, 2);
  for (size_t i = 1; i < n.size(); ++i) {
    EXPECT_GE(n[i - 1].similarity, n[i].similarity);
  }
  EXPECT_EQ(NearestNeighbors(acts, 0, 1, 2).size(), 2u);
  EXPECT_TRUE(NearestNeighbors(acts, 0, 1, 0).empty());
  EXPECT_THROW(NearestNeighbors(acts, 2, 1, 1), DataError);
  EXPECT_THROW(NearestNeighbors(acts, 0, 4, 1), DataError);
}

TEST(NeighborsTest, RepeatedWordIsItsOwnNearestNeighbor) {
  // The same word in identical +-3 contexts has identical activations.
  std::vector<Sentence> corpus = testing::SyntheticCorpus(5, 2);
  Sentence copy = corpus[0];
  copy.id = "copy";
  corpus.push_back(copy);
  StackedModel model = StackedModel::Build(
      testing::SmallModelConfig(TrainingMode::kStackprop), corpus);
  model.Initialize(3);
  const std::vector<Neighbor> n = NearestNeighbors(model, corpus, 0, 2, 3);
  ASSERT_FALSE(n.empty());
  EXPECT_EQ(n[0].sentence, 5);
  EXPECT_EQ(n[0].token, 2);
  EXPECT_NEAR(n[0].similarity, 1.0, 1e-12);
}

}  // namespace
}  // namespace stackprop
