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

#include "stackprop/tagger.h"

#include <cstring>
#include <random>

#include "gtest/gtest.h"
#include "stackprop/corpus.h"
#include "stackprop/tagger_features.h"

namespace stackprop {
namespace {

Sentence Words(const std::vector<std::string> &forms) {
  Sentence s;
  for (size_t i = 0; i < forms.size(); ++i) {
    Token t;
    t.index = static_cast<int>(i + 1);
    t.form = forms[i];
    s.tokens.push_back(t);
  }
  return s;
}

struct Lexicon {
  Vocabulary words{true};
  Vocabulary affixes{true};
};

Lexicon LexiconOf(const Sentence &s) {
  Lexicon lex;
  AddToLexicon(s, &lex.words, &lex.affixes);
  return lex;
}

TEST(CaseClassTest, Classes) {
  EXPECT_EQ(ClassifyCase("dog"), CaseClass::kAllLower);
  EXPECT_EQ(ClassifyCase("Re-enter"), CaseClass::kInitialUpper);
  EXPECT_EQ(ClassifyCase("NASA"), CaseClass::kAllCaps);
  EXPECT_EQ(ClassifyCase("iPhone"), CaseClass::kMixed);
  EXPECT_EQ(ClassifyCase("1984"), CaseClass::kNoLetters);
  EXPECT_EQ(ClassifyCase("Élan"), CaseClass::kInitialUpper);
  EXPECT_EQ(ClassifyCase("МОСКВА"), CaseClass::kAllCaps);
}

TEST(AffixTest, LowercasedAndShortForms) {
  EXPECT_EQ(Prefix("re-enter", 2), "re");
  EXPECT_EQ(Suffix("re-enter", 3), "ter");
  EXPECT_EQ(Prefix("a", 3), "a");
  EXPECT_EQ(Suffix("éte", 2), "te");
  EXPECT_EQ(Prefix("ñandú", 2), "ña");
  const std::array<std::string, 4> keys = AffixKeys("Re-enter");
  EXPECT_EQ(keys[0], "p2:re");
  EXPECT_EQ(keys[3], "s3:ter");
}

TEST(TaggerFeaturesTest, TemplateCount) {
  const TaggerFeatureExtractor extractor{TaggerFeatureConfig()};
  int templates = 0;
  for (const FeatureGroupSpec &g : extractor.GroupSpecs(10, 10)) {
    templates += g.num_features;
  }
  EXPECT_EQ(templates, 25);
  EXPECT_EQ(kNumTaggerTemplates, 25);
}

TEST(TaggerFeaturesTest, ReEnterFeatures) {
  const Sentence s = Words({"Re-enter"});
  const Lexicon lex = LexiconOf(s);
  const std::vector<TokenFeatureIds> ids =
      ComputeTokenFeatureIds(s, lex.words, lex.affixes);
  const TaggerFeatureExtractor extractor{TaggerFeatureConfig()};
  const FeatureInputs in = extractor.Extract(ids, 1);
  // Hyphen fires, digit does not; a hyphen also counts as punctuation.
  EXPECT_EQ(in[0].ids, (std::vector<int>{3, 4, 7}));
  EXPECT_EQ(in[1].ids, (std::vector<int>{0, static_cast<int>(CaseClass::kInitialUpper), 0}));
  EXPECT_EQ(in[2].ids[4], lex.affixes.Lookup("p2:re"));
  EXPECT_EQ(in[3].ids[3], lex.words.Lookup("re-enter"));
}

TEST(TaggerFeaturesTest, SingleTokenWindowsAreNull) {
  const Sentence s = Words({"dog"});
  const Lexicon lex = LexiconOf(s);
  const TaggerFeatureExtractor extractor{TaggerFeatureConfig()};
  const FeatureInputs in =
      extractor.Extract(ComputeTokenFeatureIds(s, lex.words, lex.affixes), 1);
  EXPECT_EQ(in[1].ids[0], Vocabulary::kNullId);
  EXPECT_EQ(in[1].ids[2], Vocabulary::kNullId);
  for (int a = 0; a < 4; ++a) {
    EXPECT_EQ(in[2].ids[a], Vocabulary::kNullId);
    EXPECT_EQ(in[2].ids[8 + a], Vocabulary::kNullId);
    EXPECT_NE(in[2].ids[4 + a], Vocabulary::kNullId);
  }
  for (int w = 0; w < 7; ++w) {
    EXPECT_EQ(in[3].ids[w] == Vocabulary::kNullId, w != 3);
  }
}

TEST(TaggerFeaturesTest, BoundariesOnlyIntroduceNull) {
  const Sentence s = Words({"a", "b", "c", "d", "e", "f"});
  const Lexicon lex = LexiconOf(s);
  const std::vector<TokenFeatureIds> ids =
      ComputeTokenFeatureIds(s, lex.words, lex.affixes);
  const TaggerFeatureExtractor extractor{TaggerFeatureConfig()};
  for (int j = 1; j <= s.size(); ++j) {
    const FeatureInputs in = extractor.Extract(ids, j);
    for (const FeatureMatrix &g : in) {
      for (int id : g.ids) EXPECT_NE(id, Vocabulary::kUnknownId);
    }
  }
  EXPECT_THROW(extractor.Extract(ids, 0), std::out_of_range);
  EXPECT_THROW(extractor.Extract(ids, 7), std::out_of_range);
}

TEST(TaggerFeaturesTest, UnseenFormsAreUnknown) {
  const Lexicon lex = LexiconOf(Words({"dog"}));
  const std::vector<TokenFeatureIds> ids =
      ComputeTokenFeatureIds(Words({"zebra"}), lex.words, lex.affixes);
  EXPECT_EQ(ids[0].word, Vocabulary::kUnknownId);
  EXPECT_EQ(ids[0].affixes[0], Vocabulary::kUnknownId);
}

class TaggerNetworkTest : public ::testing::Test {
 protected:
  void SetUp() override {
    sentence_ = Words({"The", "old", "man", "the", "boats", "in", "2016", "."});
    lex_ = LexiconOf(sentence_);
    ids_ = ComputeTokenFeatureIds(sentence_, lex_.words, lex_.affixes);
    TaggerFeatureConfig features;
    features.word_dim = 6;
    features.affix_dim = 5;
    tagger_ = Tagger(features, lex_.words.size(), lex_.affixes.size(), 16, 5);
    std::mt19937_64 rng(3);
    tagger_.network().Initialize(&rng, 0.3, 0.1);
  }

  Sentence sentence_;
  Lexicon lex_;
  std::vector<TokenFeatureIds> ids_;
  Tagger tagger_;
};

TEST_F(TaggerNetworkTest, ZeroWeightsGiveUniformTags) {
  Tagger zero(TaggerFeatureConfig(), lex_.words.size(), lex_.affixes.size(),
              128, 4);
  Eigen::RowVectorXd hidden, probs;
  zero.Forward(ids_, 2, Weights::kRaw, &hidden, &probs);
  EXPECT_EQ(hidden.size(), 128);
  for (int k = 0; k < 4; ++k) EXPECT_DOUBLE_EQ(probs(k), 0.25);
}

TEST_F(TaggerNetworkTest, ShapesAndNonNegativity) {
  std::vector<int> tags;
  TaggerActivations acts;
  tags = tagger_.TagSentence(ids_, Weights::kRaw, &acts);
  EXPECT_EQ(tags.size(), 8u);
  EXPECT_EQ(acts.hidden.rows(), 8);
  EXPECT_EQ(acts.hidden.cols(), 16);
  EXPECT_GE(acts.hidden.minCoeff(), 0.0);
  for (int r = 0; r < 8; ++r) {
    EXPECT_NEAR(acts.probabilities.row(r).sum(), 1.0, 1e-12);
    EXPECT_EQ(tags[r], ArgMax(acts.probabilities.row(r)));
  }
}

TEST_F(TaggerNetworkTest, ActivationsMatchPerTokenForward) {
  const TaggerActivations acts =
      tagger_.Activations(ids_, Weights::kRaw, false);
  EXPECT_EQ(acts.probabilities.size(), 0);
  for (int j = 1; j <= 8; ++j) {
    Eigen::RowVectorXd hidden;
    tagger_.Forward(ids_, j, Weights::kRaw, &hidden, nullptr);
    // Batched products may round differently in the last bits.
    EXPECT_LT((hidden - acts.hidden.row(j - 1)).cwiseAbs().maxCoeff(), 1e-12);
  }
  const TaggerActivations with =
      tagger_.Activations(ids_, Weights::kRaw, true);
  EXPECT_EQ(with.hidden, acts.hidden);
}

TEST_F(TaggerNetworkTest, HiddenIgnoresSoftmaxWeights) {
  const Matrix before = tagger_.Activations(ids_, Weights::kRaw, false).hidden;
  FeedForwardNetwork &net = tagger_.network();
  net.blocks()[net.softmax_weights_block()].value.setRandom();
  net.blocks()[net.softmax_bias_block()].value.setRandom();
  const Matrix after = tagger_.Activations(ids_, Weights::kRaw, false).hidden;
  EXPECT_EQ(std::memcmp(before.data(), after.data(),
                        sizeof(double) * before.size()),
            0);
}

TEST_F(TaggerNetworkTest, WindowRadiusThree) {
  const Matrix before = tagger_.Activations(ids_, Weights::kRaw, false).hidden;
  // Change token 6 ("in"); tokens 1 and 2 lie more than three away.
  std::vector<TokenFeatureIds> edited = ids_;
  edited[5] = ids_[0];
  const Matrix after = tagger_.Activations(edited, Weights::kRaw, false).hidden;
  EXPECT_EQ(after.row(0), before.row(0));
  EXPECT_EQ(after.row(1), before.row(1));
  EXPECT_NE(after.row(2), before.row(2));
}

TEST_F(TaggerNetworkTest, Deterministic) {
  const Matrix a = tagger_.Activations(ids_, Weights::kAveraged, true).hidden;
  const Matrix b = tagger_.Activations(ids_, Weights::kAveraged, true).hidden;
  EXPECT_EQ(std::memcmp(a.data(), b.data(), sizeof(double) * a.size()), 0);
}

TEST(ArgMaxTest, LowestIndexOnTies) {
  Eigen::RowVectorXd row(4);
  row << 0.1, 0.7, 0.7, 0.2;
  EXPECT_EQ(ArgMax(row), 1);
  row.setZero();
  EXPECT_EQ(ArgMax(row), 0);
}

}  // namespace
}  // namespace stackprop
