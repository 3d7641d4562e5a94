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

#ifndef STACKPROP_TRAINER_H_
#define STACKPROP_TRAINER_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "stackprop/corpus.h"
#include "stackprop/model.h"
#include "stackprop/parser_features.h"
#include "stackprop/training_config.h"

namespace stackprop {

// Receives progress as "key=value ..." lines.
using TrainingLogger = std::function<void(const std::string &)>;

struct TaggerExample {
  int sentence = 0;
  int token = 0;  // 1-based
  int tag = 0;
};

struct ParserExample {
  int sentence = 0;
  ParserFeatureTokens features;
  int action = 0;
};

// Training examples extracted off-line from the gold trees.
struct TrainingData {
  std::vector<std::vector<TokenFeatureIds>> token_ids;
  std::vector<TaggerExample> tagger_examples;
  std::vector<ParserExample> parser_examples;
  // Pipeline parser inputs: per-sentence n x |tags| tag distributions.
  std::vector<Matrix> tag_distributions;
  int skipped = 0;        // sentences whose derivation could not be built
  int projectivized = 0;  // non-projective trees lifted (SWAP disabled)
};

// Unrolls every sentence with the static oracle. Without SWAP,
// non-projective trees are projectivized first. Sentences that still fail
// are skipped, counted and logged.
TrainingData PrepareTrainingData(const StackedModel &model,
                                 const std::vector<Sentence> &corpus,
                                 const TrainingLogger &log = {});

// Tag cross-entropy of a batch; gradients over all tagger blocks are
// accumulated with the given scale.
double TaggerBatchGradients(const StackedModel &model,
                            const TrainingData &data,
                            std::span<const TaggerExample> batch, double scale,
                            Gradients *grads);

struct ParserGradients {
  Gradients parser;
  Matrix null_row;
  Gradients tagger;  // zero unless the parser backpropagates into the tagger
};

ParserGradients ZeroParserGradients(const StackedModel &model);

// Transition cross-entropy of a batch. For implicit-input parsers the tagger
// runs once over the distinct tokens the batch selects and the loss is
// backpropagated through its hidden layer into the tagger embeddings.
double ParserBatchGradients(const StackedModel &model,
                            const TrainingData &data,
                            std::span<const ParserExample> batch,
                            double scale, ParserGradients *grads);

// TAGGER update: every tagger block.
void ApplyTaggerUpdate(StackedModel *model, const Gradients &grads,
                       const OptimizerConfig &config);

// PARSER update: parser blocks, plus the tagger below its softmax when the
// model stacks the parser on the tagger. The tagger softmax is never
// touched.
void ApplyParserUpdate(StackedModel *model, const ParserGradients &grads,
                       const OptimizerConfig &tagger_config,
                       const OptimizerConfig &parser_config);

enum class UpdateKind { kTagger, kParser };

// Picks TAGGER with probability tagger_remaining / (total remaining), using
// `u` in [0, 1).
UpdateKind ChooseUpdate(int64_t tagger_remaining, int64_t parser_remaining,
                        double u);

struct EpochRecord {
  int epoch = 0;  // parser epochs completed
  double dev_uas = 0.0;
  double dev_las = 0.0;
  std::optional<double> dev_pos;
  int64_t tagger_examples = 0;
  int64_t parser_examples = 0;
};

struct TrainingReport {
  std::vector<EpochRecord> epochs;
  int best_epoch = -1;
  double best_dev_uas = 0.0;
  double best_dev_las = 0.0;
  bool stopped_early = false;
  int64_t tagger_examples = 0;  // examples consumed by TAGGER updates
  int64_t parser_examples = 0;
  int64_t tagger_updates = 0;
  int64_t parser_updates = 0;
  int skipped = 0;
  int projectivized = 0;
};

// Runs the update schedule on an initialized model: tagger pretraining,
// then randomly interleaved TAGGER/PARSER updates in proportion to the
// remaining budgets. With a dev set, dev UAS is measured after every parser
// epoch and training stops after `patience` epochs without improvement;
// the best snapshot is kept.
void RunSchedule(const TrainingConfig &config, const TrainingData &data,
                 const std::vector<Sentence> &dev, StackedModel *model,
                 TrainingReport *report, const TrainingLogger &log = {});

// Builds, initializes and trains a model for config.model.mode. Pipeline
// training jackknifes the training tags first.
StackedModel Train(const TrainingConfig &config,
                   const std::vector<Sentence> &train,
                   const std::vector<Sentence> &dev,
                   TrainingReport *report = nullptr,
                   const TrainingLogger &log = {});

struct Fold {
  int begin = 0;  // sentence range [begin, end)
  int end = 0;
};

// k contiguous folds covering n sentences. Throws DataError when n < k and
// UsageError when k < 2.
std::vector<Fold> ContiguousFolds(int n, int k);

struct JackknifeResult {
  // Per-sentence n x |tags| distributions in the id space of `tags`.
  std::vector<Matrix> distributions;
  std::vector<Fold> folds;
  std::vector<StackedModel> fold_models;  // kept when requested
};

// Trains one tagger per fold on the other folds and predicts the held-out
// fold. Fold lexicons are built from the training folds only.
JackknifeResult JackknifeTags(const TrainingConfig &config,
                              const std::vector<Sentence> &train,
                              const Vocabulary &tags, bool keep_models,
                              const TrainingLogger &log = {});

// Parses `sentences` with averaged weights and returns annotated copies.
// Models without tag output mark every predicted tag as unannotated.
std::vector<Sentence> ParseCorpus(const StackedModel &model,
                                  const std::vector<Sentence> &sentences);

}  // namespace stackprop

#endif  // STACKPROP_TRAINER_H_
