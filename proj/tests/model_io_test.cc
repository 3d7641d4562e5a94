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

#include "stackprop/model_io.h"

#include <cstdio>
#include <filesystem>
#include <random>

#include "gtest/gtest.h"
#include "model_util.h"
#include "stackprop/errors.h"
#include "stackprop/trainer.h"

namespace stackprop {
namespace {

using testing::SameParameters;
using testing::SmallModelConfig;
using testing::SmallTrainingConfig;
using testing::SyntheticCorpus;

class ModelIoTest : public ::testing::TestWithParam<TrainingMode> {
 protected:
  void SetUp() override {
    corpus_ = SyntheticCorpus(12, 5);
    model_ = StackedModel::Build(SmallModelConfig(GetParam()), corpus_);
    model_.Initialize(11);
  }

  // Runs a few hundred random updates so the optimizer state is non-trivial.
  void Train(int steps) {
    TrainingConfig config = SmallTrainingConfig(GetParam());
    TrainingData data = PrepareTrainingData(model_, corpus_);
    if (GetParam() == TrainingMode::kPipeline) {
      for (const Sentence &s : corpus_) {
        data.tag_distributions.push_back(
            Matrix::Constant(s.size(), model_.vocab().tags.size(),
                             1.0 / model_.vocab().tags.size()));
      }
    }
    std::mt19937_64 rng(3);
    for (int i = 0; i < steps; ++i) {
      const size_t p = rng() % (data.parser_examples.size() - 4);
      ParserGradients grads = ZeroParserGradients(model_);
      ParserBatchGradients(
          model_, data,
          std::span<const ParserExample>(data.parser_examples).subspan(p, 4),
          0.25, &grads);
      ApplyParserUpdate(&model_, grads, config.tagger_optimizer,
                        config.parser_optimizer);
      const size_t t = rng() % (data.tagger_examples.size() - 4);
      Gradients tg = model_.tagger().network().ZeroGradients();
      TaggerBatchGradients(
          model_, data,
          std::span<const TaggerExample>(data.tagger_examples).subspan(t, 4),
          0.25, &tg);
      ApplyTaggerUpdate(&model_, tg, config.tagger_optimizer);
    }
  }

  std::vector<Sentence> corpus_;
  StackedModel model_;
};

TEST_P(ModelIoTest, FreshRoundTripIsExact) {
  const std::string bytes = SerializeModel(model_);
  const StackedModel loaded = DeserializeModel(bytes);
  EXPECT_TRUE(SameParameters(model_, loaded));
  EXPECT_EQ(loaded.config(), model_.config());
  EXPECT_EQ(SerializeModel(loaded), bytes);
}

TEST_P(ModelIoTest, TrainedRoundTripIsExact) {
  Train(100);
  const std::string bytes = SerializeModel(model_);
  const StackedModel loaded = DeserializeModel(bytes);
  EXPECT_TRUE(SameParameters(model_, loaded));
  EXPECT_EQ(SerializeModel(loaded), bytes);
  for (const Sentence &s : corpus_) {
    const ParseResult a = model_.Parse(s);
    const ParseResult b = loaded.Parse(s);
    EXPECT_EQ(a.heads, b.heads);
    EXPECT_EQ(a.labels, b.labels);
    EXPECT_EQ(a.tags, b.tags);
  }
}

TEST_P(ModelIoTest, VocabulariesSurvive) {
  const StackedModel loaded = DeserializeModel(SerializeModel(model_));
  EXPECT_EQ(loaded.vocab().forms, model_.vocab().forms);
  EXPECT_EQ(loaded.vocab().tags, model_.vocab().tags);
  EXPECT_EQ(loaded.vocab().labels, model_.vocab().labels);
  EXPECT_EQ(loaded.affixes(), model_.affixes());
  EXPECT_EQ(loaded.vocab().forms.Lookup("<NULL>"), Vocabulary::kNullId);
  EXPECT_EQ(loaded.vocab().forms.Lookup("<UNK>"), Vocabulary::kUnknownId);
  EXPECT_EQ(loaded.vocab().forms.Lookup("never-seen"), Vocabulary::kUnknownId);
}

TEST_P(ModelIoTest, EveryTruncationIsRejected) {
  const std::string bytes = SerializeModel(model_);
  // Every prefix length near the ends, plus a sweep through the middle.
  std::vector<size_t> cuts;
  for (size_t n = 0; n < 64; ++n) cuts.push_back(n);
  for (size_t n = 64; n < bytes.size(); n += 97) cuts.push_back(n);
  for (size_t n = bytes.size() - 8; n < bytes.size(); ++n) cuts.push_back(n);
  for (size_t n : cuts) {
    EXPECT_THROW(DeserializeModel(std::string_view(bytes).substr(0, n)),
                 ModelError)
        << n;
  }
}

TEST_P(ModelIoTest, CorruptionIsRejected) {
  const std::string bytes = SerializeModel(model_);
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 50; ++trial) {
    std::string bad = bytes;
    const size_t pos = rng() % bad.size();
    bad[pos] = static_cast<char>(bad[pos] ^ (1 + rng() % 255));
    EXPECT_THROW(DeserializeModel(bad), ModelError) << pos;
  }
  EXPECT_THROW(DeserializeModel(bytes + "x"), ModelError);
}

INSTANTIATE_TEST_SUITE_P(Modes, ModelIoTest,
                         ::testing::Values(TrainingMode::kStackprop,
                                           TrainingMode::kPipeline,
                                           TrainingMode::kJointStackprop),
                         [](const auto &info) {
                           return std::string(TrainingModeName(info.param));
                         });

TEST(ModelIo, BadMagicAndVersion) {
  const std::vector<Sentence> corpus = SyntheticCorpus(3);
  StackedModel model =
      StackedModel::Build(SmallModelConfig(TrainingMode::kStackprop), corpus);
  std::string bytes = SerializeModel(model);
  std::string magic = bytes;
  magic[0] = 'X';
  try {
    DeserializeModel(magic);
    FAIL();
  } catch (const ModelError &e) {
    EXPECT_NE(std::string(e.what()).find("magic"), std::string::npos);
  }
  std::string version = bytes;
  version[8] = 9;
  try {
    DeserializeModel(version);
    FAIL();
  } catch (const ModelError &e) {
    EXPECT_NE(std::string(e.what()).find("version"), std::string::npos);
  }
  EXPECT_THROW(DeserializeModel("not a model"), ModelError);
}

TEST(ModelIo, FilesAndDigests) {
  const std::vector<Sentence> corpus = SyntheticCorpus(4);
  StackedModel model =
      StackedModel::Build(SmallModelConfig(TrainingMode::kJoint), corpus);
  model.Initialize(2);
  const std::string path =
      (std::filesystem::temp_directory_path() / "stackprop_io_test.model")
          .string();
  SaveModel(model, path);
  const StackedModel loaded = LoadModel(path);
  EXPECT_TRUE(testing::SameParameters(model, loaded));
  std::remove(path.c_str());
  EXPECT_THROW(LoadModel(path), ModelError);

  const std::string a = SerializeModel(model);
  EXPECT_EQ(ContentDigest(a), ContentDigest(SerializeModel(loaded)));
  std::string b = a;
  b[b.size() / 2] ^= 1;
  EXPECT_NE(ContentDigest(a), ContentDigest(b));
}

TEST(ModelIo, SameSeedSameBytes) {
  const std::vector<Sentence> corpus = SyntheticCorpus(6);
  StackedModel a =
      StackedModel::Build(SmallModelConfig(TrainingMode::kStackprop), corpus);
  StackedModel b =
      StackedModel::Build(SmallModelConfig(TrainingMode::kStackprop), corpus);
  a.Initialize(4);
  b.Initialize(4);
  EXPECT_EQ(SerializeModel(a), SerializeModel(b));
  b.Initialize(5);
  EXPECT_NE(SerializeModel(a), SerializeModel(b));
}

}  // namespace
}  // namespace stackprop
