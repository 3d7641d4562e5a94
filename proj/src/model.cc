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

#include "stackprop/model.h"

#include <random>
#include <sstream>
#include <unordered_set>

#include "stackprop/errors.h"
#include "stackprop/unicode_text.h"

namespace stackprop {

namespace {

constexpr std::pair<TrainingMode, const char *> kModeNames[] = {
    {TrainingMode::kStackprop, "stackprop"},
    {TrainingMode::kPipeline, "pipeline"},
    {TrainingMode::kJoint, "joint"},
    {TrainingMode::kJointStackprop, "joint_stackprop"},
    {TrainingMode::kWindow, "window"},
};

void CopyRow(const std::vector<double> &values, int row, ParameterBlock *block) {
  for (size_t k = 0; k < values.size(); ++k) {
    block->value(row, k) = values[k];
    block->average(row, k) = values[k];
  }
}

}  // namespace

const char *TrainingModeName(TrainingMode mode) {
  for (const auto &[m, name] : kModeNames) {
    if (m == mode) return name;
  }
  return "?";
}

TrainingMode ParseTrainingMode(const std::string &name) {
  for (const auto &[m, n] : kModeNames) {
    if (name == n) return m;
  }
  throw UsageError("unknown mode '" + name +
                   "' (expected stackprop, pipeline, joint, joint_stackprop "
                   "or window)");
}

StackedModel::StackedModel(const ModelConfig &config, CorpusVocab vocab,
                           Vocabulary affixes)
    : config_(config), vocab_(std::move(vocab)), affixes_(std::move(affixes)) {
  if (vocab_.labels.size() == 0) {
    throw DataError("training data carries no dependency labels");
  }
  if (vocab_.tags.size() == 0) {
    throw DataError("training data carries no tags");
  }
  tagger_ = Tagger(config_.dims.tagger_features, vocab_.forms.size(),
                   affixes_.size(), config_.dims.tagger_hidden,
                   vocab_.tags.size());
  const ActionSpace actions(vocab_.labels.size(), vocab_.tags.size(),
                            config_.transitions());
  const ParserInput input = config_.parser_input();
  const int token_width = input == ParserInput::kImplicit
                              ? config_.dims.tagger_hidden
                              : vocab_.tags.size();
  parser_ = Parser(input, config_.dims.parser, token_width,
                   vocab_.forms.size(), actions);
}

StackedModel StackedModel::Build(const ModelConfig &config,
                                 const std::vector<Sentence> &train) {
  CorpusVocab vocab = BuildCorpusVocab(train);
  Vocabulary affixes(true);
  for (const Sentence &sentence : train) {
    AddToLexicon(sentence, &vocab.forms, &affixes);
  }
  return StackedModel(config, std::move(vocab), std::move(affixes));
}

void StackedModel::Initialize(uint64_t seed) {
  std::mt19937_64 rng(seed);
  tagger_.network().Initialize(&rng);
  parser_.Initialize(&rng);
}

int64_t StackedModel::NumParameters() const {
  return tagger_.network().NumParameters() + parser_.NumParameters();
}

std::vector<NamedBlock> StackedModel::Blocks() {
  std::vector<NamedBlock> blocks;
  for (ParameterBlock &block : tagger_.network().blocks()) {
    blocks.push_back({"tagger/" + block.name, &block});
  }
  for (ParameterBlock &block : parser_.network().blocks()) {
    blocks.push_back({"parser/" + block.name, &block});
  }
  if (parser_.input() == ParserInput::kImplicit) {
    blocks.push_back({"parser/" + parser_.null_row().name, &parser_.null_row()});
  }
  return blocks;
}

std::vector<std::pair<std::string, const ParameterBlock *>>
StackedModel::Blocks() const {
  std::vector<std::pair<std::string, const ParameterBlock *>> out;
  for (const NamedBlock &named : const_cast<StackedModel *>(this)->Blocks()) {
    out.emplace_back(named.name, named.block);
  }
  return out;
}

std::vector<TokenFeatureIds> StackedModel::TokenIds(
    const Sentence &sentence) const {
  return ComputeTokenFeatureIds(sentence, vocab_.forms, affixes_);
}

GoldTree StackedModel::Gold(const Sentence &sentence) const {
  if (!sentence.HasGoldTree()) {
    throw DataError("sentence " + sentence.id + " has no gold tree");
  }
  GoldTree gold;
  gold.heads = sentence.Heads();
  gold.labels.assign(sentence.size() + 1, -1);
  gold.tags.assign(sentence.size() + 1, -1);
  for (const Token &token : sentence.tokens) {
    const int label = vocab_.labels.Lookup(token.deprel);
    if (label < 0) {
      throw DataError("sentence " + sentence.id + ": unknown label '" +
                      token.deprel + "'");
    }
    gold.labels[token.index] = label;
    const int tag = vocab_.tags.Lookup(token.upos);
    if (tag < 0 && config_.joint()) {
      throw DataError("sentence " + sentence.id + ": unknown tag '" +
                      token.upos + "'");
    }
    gold.tags[token.index] = tag;
  }
  return gold;
}

TaggerActivations StackedModel::Activations(const Sentence &sentence,
                                            Weights weights,
                                            bool with_probabilities) const {
  const std::vector<TokenFeatureIds> ids = TokenIds(sentence);
  return tagger_.Activations(ids, weights, with_probabilities);
}

ParseResult StackedModel::Parse(const Sentence &sentence,
                                Weights weights) const {
  ParseResult result;
  const int n = sentence.size();
  if (n == 0) return result;
  const std::vector<TokenFeatureIds> ids = TokenIds(sentence);
  const bool pipeline = parser_.input() == ParserInput::kPipeline;
  const bool want_tags = config_.tagger_supervised() && !config_.joint();
  const TaggerActivations activations =
      tagger_.Activations(ids, weights, pipeline || want_tags);
  result.tagger_evaluations = n;

  ParserTokenContext context;
  context.token_rows = pipeline ? &activations.probabilities
                                : &activations.hidden;
  context.token_ids = ids;
  const ParserConfiguration final_config =
      parser_.Decode(n, context, weights, &result.parser_evaluations);

  const int root_label = vocab_.labels.Lookup("root");
  result.heads.assign(n + 1, -1);
  result.labels.assign(n + 1, -1);
  for (int t = 1; t <= n; ++t) {
    result.heads[t] = final_config.Head(t);
    result.labels[t] = final_config.Label(t);
    if (result.heads[t] == kRootIndex && root_label >= 0) {
      result.labels[t] = root_label;
    }
  }
  if (config_.joint()) {
    for (int t = 1; t <= n; ++t) {
      result.tags.push_back(final_config.AssignedTag(t));
    }
  } else if (want_tags) {
    for (int t = 0; t < n; ++t) {
      result.tags.push_back(ArgMax(activations.probabilities.row(t)));
    }
  }
  return result;
}

std::vector<int> StackedModel::Tag(const Sentence &sentence,
                                   Weights weights) const {
  if (sentence.empty()) return {};
  if (config_.joint()) return Parse(sentence, weights).tags;
  return tagger_.TagSentence(TokenIds(sentence), weights);
}

void StackedModel::Annotate(const ParseResult &result,
                            Sentence *sentence) const {
  for (Token &token : sentence->tokens) {
    token.pred_head = result.heads[token.index];
    token.pred_deprel = vocab_.labels.Name(result.labels[token.index]);
  }
  if (!result.tags.empty()) AnnotateTags(result.tags, sentence);
}

void StackedModel::AnnotateTags(const std::vector<int> &tags,
                                Sentence *sentence) const {
  for (Token &token : sentence->tokens) {
    token.pred_upos = vocab_.tags.Name(tags[token.index - 1]);
  }
}

EmbeddingCoverage StackedModel::LoadPretrainedWords(std::istream *in) {
  EmbeddingCoverage coverage;
  coverage.vocab_words = vocab_.forms.size() - 2;
  std::vector<ParameterBlock *> targets;
  auto consider = [&](FeedForwardNetwork &network, int group) {
    ParameterBlock &block = network.blocks()[network.embedding_block(group)];
    targets.push_back(&block);
  };
  consider(tagger_.network(), static_cast<int>(TaggerGroup::kWords));
  if (parser_.input() == ParserInput::kPipeline) {
    consider(parser_.network(), kWordGroup);
  }

  std::unordered_set<int> seen;
  std::string line;
  int line_number = 0;
  while (std::getline(*in, line)) {
    ++line_number;
    std::istringstream fields(line);
    std::string form;
    if (!(fields >> form)) continue;
    std::vector<double> values;
    double v;
    while (fields >> v) values.push_back(v);
    if (!fields.eof()) {
      throw DataError("embedding line " + std::to_string(line_number) +
                      ": non-numeric value");
    }
    // word2vec text header: "<count> <dim>".
    if (line_number == 1 && values.size() == 1 &&
        form.find_first_not_of("0123456789") == std::string::npos) {
      continue;
    }
    if (values.empty()) {
      throw DataError("embedding line " + std::to_string(line_number) +
                      ": no vector");
    }
    if (coverage.file_dim == 0) coverage.file_dim = static_cast<int>(values.size());
    if (static_cast<int>(values.size()) != coverage.file_dim) {
      throw DataError("embedding line " + std::to_string(line_number) +
                      ": expected " + std::to_string(coverage.file_dim) +
                      " values, got " + std::to_string(values.size()));
    }
    ++coverage.file_words;
    const std::string key = Lowercase(form);
    if (!vocab_.forms.Contains(key)) continue;
    const int id = vocab_.forms.Lookup(key);
    if (!seen.insert(id).second) continue;
    ++coverage.matched;
    for (ParameterBlock *block : targets) {
      if (block->value.cols() == coverage.file_dim) {
        CopyRow(values, id, block);
        coverage.applied = true;
      }
    }
  }
  return coverage;
}

}  // namespace stackprop
