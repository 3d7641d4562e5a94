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

#include "stackprop/parser.h"

#include <stdexcept>

namespace stackprop {

namespace {

std::vector<FeatureGroupSpec> ParserGroups(ParserInput input,
                                           const ParserNetworkConfig &config,
                                           int token_width,
                                           int word_vocab_size,
                                           int num_labels) {
  std::vector<FeatureGroupSpec> groups;
  if (input == ParserInput::kImplicit) {
    groups.push_back({"implicit", kNumTokenTemplates, token_width,
                      config.implicit_dim, true, false});
  } else {
    groups.push_back({"tag_probs", kNumTokenTemplates, token_width,
                      token_width, true, true});
    groups.push_back({"words", kNumTokenTemplates, word_vocab_size,
                      config.word_dim, false, false});
  }
  groups.push_back({"labels", kNumLabelTemplates, num_labels + 1,
                    config.label_dim, false, false});
  return groups;
}

}  // namespace

Parser::Parser(ParserInput input, const ParserNetworkConfig &config,
               int token_width, int word_vocab_size,
               const ActionSpace &actions)
    : input_(input),
      config_(config),
      token_width_(token_width),
      actions_(actions),
      network_(ParserGroups(input, config, token_width, word_vocab_size,
                            actions.num_labels()),
               config.hidden_dim, actions.size()) {
  if (input_ == ParserInput::kImplicit) {
    null_row_.name = "null_row";
    null_row_.Resize(1, token_width);
  }
}

void Parser::Initialize(std::mt19937_64 *rng, double range,
                        double hidden_bias) {
  network_.Initialize(rng, range, hidden_bias);
  if (input_ == ParserInput::kImplicit) {
    std::uniform_real_distribution<double> uniform(-range, range);
    for (Eigen::Index k = 0; k < null_row_.value.size(); ++k) {
      null_row_.value.data()[k] = uniform(*rng);
    }
    null_row_.velocity.setZero();
    null_row_.average = null_row_.value;
    null_row_.steps = 0;
    null_row_.averaged_steps = 0;
  }
}

int64_t Parser::NumParameters() const {
  return network_.NumParameters() + null_row_.size();
}

FeatureInputs Parser::EmptyInputs() const {
  FeatureInputs inputs(network_.groups().size());
  for (size_t g = 0; g < inputs.size(); ++g) {
    const FeatureGroupSpec &spec = network_.groups()[g];
    if (spec.dense) inputs[g].rows.resize(0, spec.vocab_size);
  }
  return inputs;
}

void Parser::Append(const ParserFeatureTokens &features,
                    const ParserTokenContext &context, Weights weights,
                    FeatureInputs *inputs) const {
  const Matrix &rows = *context.token_rows;
  if (rows.cols() != token_width_) {
    throw std::invalid_argument("token rows have width " +
                                std::to_string(rows.cols()) + ", expected " +
                                std::to_string(token_width_));
  }
  if (inputs->size() != network_.groups().size()) *inputs = EmptyInputs();
  Matrix &dense = (*inputs)[0].rows;
  const Eigen::Index base = dense.rows();
  dense.conservativeResize(base + kNumTokenTemplates, token_width_);
  for (int i = 0; i < kNumTokenTemplates; ++i) {
    const int token = features.tokens[i];
    if (token != kNullToken) {
      dense.row(base + i) = rows.row(token - 1);
    } else if (input_ == ParserInput::kImplicit) {
      dense.row(base + i) = Select(null_row_, weights).row(0);
    } else {
      dense.row(base + i).setZero();
    }
  }
  if (input_ == ParserInput::kPipeline) {
    std::vector<int> &words = (*inputs)[kWordGroup].ids;
    for (int token : features.tokens) {
      words.push_back(token == kNullToken ? Vocabulary::kNullId
                                          : context.token_ids[token - 1].word);
    }
  }
  std::vector<int> &labels = inputs->back().ids;
  labels.insert(labels.end(), features.labels.begin(), features.labels.end());
}

FeatureInputs Parser::Assemble(const ParserConfiguration &config,
                               const ParserTokenContext &context,
                               Weights weights) const {
  FeatureInputs inputs = EmptyInputs();
  Append(ExtractParserFeatures(config), context, weights, &inputs);
  return inputs;
}

std::vector<double> Parser::ScoreActions(const ParserConfiguration &config,
                                         const ParserTokenContext &context,
                                         Weights weights) const {
  const FeatureInputs inputs = Assemble(config, context, weights);
  const Matrix logits = network_.Logits(
      network_.Hidden(network_.Embed(inputs, weights), weights), weights);
  return std::vector<double>(logits.data(), logits.data() + logits.size());
}

ParserConfiguration Parser::Decode(int num_tokens,
                                   const ParserTokenContext &context,
                                   Weights weights, int *num_steps) const {
  return GreedyDecode(
      num_tokens, actions_,
      [&](const ParserConfiguration &config, std::vector<double> *scores) {
        *scores = ScoreActions(config, context, weights);
      },
      num_steps);
}

}  // namespace stackprop
