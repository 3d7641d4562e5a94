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

#ifndef STACKPROP_MODEL_H_
#define STACKPROP_MODEL_H_

#include <cstdint>
#include <istream>
#include <string>
#include <vector>

#include "stackprop/corpus.h"
#include "stackprop/parser.h"
#include "stackprop/tagger.h"
#include "stackprop/transition_system.h"

namespace stackprop {

enum class TrainingMode {
  kStackprop,
  kPipeline,
  kJoint,
  kJointStackprop,
  kWindow,  // no tag supervision
};

// "stackprop", "pipeline", "joint", "joint_stackprop", "window".
const char *TrainingModeName(TrainingMode mode);
// Throws UsageError for unknown names.
TrainingMode ParseTrainingMode(const std::string &name);

struct ModelDims {
  TaggerFeatureConfig tagger_features;
  int tagger_hidden = 128;
  ParserNetworkConfig parser;

  bool operator==(const ModelDims &other) const = default;
};

struct ModelConfig {
  TrainingMode mode = TrainingMode::kStackprop;
  bool swap = false;
  ModelDims dims;

  ParserInput parser_input() const {
    return mode == TrainingMode::kPipeline ? ParserInput::kPipeline
                                           : ParserInput::kImplicit;
  }
  bool joint() const {
    return mode == TrainingMode::kJoint ||
           mode == TrainingMode::kJointStackprop;
  }
  // Whether TAGGER updates train the tagger softmax.
  bool tagger_supervised() const {
    return mode == TrainingMode::kStackprop ||
           mode == TrainingMode::kPipeline ||
           mode == TrainingMode::kJointStackprop;
  }
  // Whether parser loss reaches the tagger's hidden layer and embeddings.
  bool backprop_into_tagger() const {
    return mode != TrainingMode::kPipeline;
  }
  TransitionOptions transitions() const { return {swap, joint()}; }

  bool operator==(const ModelConfig &other) const = default;
};

struct ParseResult {
  std::vector<int> heads;   // indexed by token, element 0 unused
  std::vector<int> labels;  // label ids, element 0 unused
  std::vector<int> tags;    // tag ids per token (0-based)
  int tagger_evaluations = 0;
  int parser_evaluations = 0;
};

struct EmbeddingCoverage {
  int file_words = 0;
  int file_dim = 0;
  int vocab_words = 0;  // excluding NULL/UNKNOWN
  int matched = 0;
  bool applied = false;  // false when the dimension did not match
};

struct NamedBlock {
  std::string name;
  ParameterBlock *block;
};

// Tagger and parser networks with the vocabularies they were built on.
class StackedModel {
 public:
  StackedModel() = default;
  StackedModel(const ModelConfig &config, CorpusVocab vocab,
               Vocabulary affixes);

  // Collects the lexicon of `train` and allocates (zeroed) parameters.
  static StackedModel Build(const ModelConfig &config,
                            const std::vector<Sentence> &train);

  void Initialize(uint64_t seed);

  const ModelConfig &config() const { return config_; }
  const CorpusVocab &vocab() const { return vocab_; }
  const Vocabulary &affixes() const { return affixes_; }
  Tagger &tagger() { return tagger_; }
  const Tagger &tagger() const { return tagger_; }
  Parser &parser() { return parser_; }
  const Parser &parser() const { return parser_; }

  int64_t NumParameters() const;

  // Every parameter block with a model-unique name ("tagger/...",
  // "parser/..."), in serialization order.
  std::vector<NamedBlock> Blocks();
  std::vector<std::pair<std::string, const ParameterBlock *>> Blocks() const;

  std::vector<TokenFeatureIds> TokenIds(const Sentence &sentence) const;

  // Gold derivation targets in id space. Throws DataError for unannotated
  // trees or tags/labels outside the model's inventories.
  GoldTree Gold(const Sentence &sentence) const;

  TaggerActivations Activations(const Sentence &sentence, Weights weights,
                                bool with_probabilities) const;

  ParseResult Parse(const Sentence &sentence,
                    Weights weights = Weights::kAveraged) const;

  // Tags from the tagger softmax, or from SHIFT_TAG in joint modes.
  std::vector<int> Tag(const Sentence &sentence,
                       Weights weights = Weights::kAveraged) const;

  // Writes predicted heads/labels (and tags when present) into `sentence`.
  void Annotate(const ParseResult &result, Sentence *sentence) const;
  void AnnotateTags(const std::vector<int> &tags, Sentence *sentence) const;

  // Reads "form v1 ... vD" lines and copies matching rows into every word
  // embedding of the model. Rows are skipped when D differs from the word
  // embedding size. Throws DataError on malformed lines.
  EmbeddingCoverage LoadPretrainedWords(std::istream *in);

 private:
  ModelConfig config_;
  CorpusVocab vocab_;
  Vocabulary affixes_{true};
  Tagger tagger_;
  Parser parser_;
};

}  // namespace stackprop

#endif  // STACKPROP_MODEL_H_
