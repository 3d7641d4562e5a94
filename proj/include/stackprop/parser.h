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

#ifndef STACKPROP_PARSER_H_
#define STACKPROP_PARSER_H_

#include <span>
#include <vector>

#include "stackprop/nn_kernel.h"
#include "stackprop/parser_features.h"
#include "stackprop/tagger_features.h"
#include "stackprop/transition_system.h"

namespace stackprop {

// How the parser sees tokens.
//   kImplicit  tagger hidden activations through a shared D_implicit
//              projection (stackprop, joint and window models)
//   kPipeline  predicted tag distribution concatenated with a word
//              embedding
enum class ParserInput { kImplicit, kPipeline };

struct ParserNetworkConfig {
  int hidden_dim = 1024;
  int implicit_dim = 64;
  int label_dim = 32;
  int word_dim = 64;  // pipeline only

  bool operator==(const ParserNetworkConfig &other) const = default;
};

// Per-sentence token representation the parser indexes into.
struct ParserTokenContext {
  // kImplicit: n x H_tagger hidden activations.
  // kPipeline: n x |tags| tag distributions.
  const Matrix *token_rows = nullptr;
  // kPipeline: per-token word ids.
  std::span<const TokenFeatureIds> token_ids;
};

class Parser {
 public:
  Parser() = default;
  // `token_width` is H_tagger for kImplicit and |tags| for kPipeline.
  Parser(ParserInput input, const ParserNetworkConfig &config,
         int token_width, int word_vocab_size, const ActionSpace &actions);

  ParserInput input() const { return input_; }
  const ParserNetworkConfig &config() const { return config_; }
  const ActionSpace &actions() const { return actions_; }
  int token_width() const { return token_width_; }
  FeedForwardNetwork &network() { return network_; }
  const FeedForwardNetwork &network() const { return network_; }

  // Learned input row standing in for NULL implicit templates (1 x
  // H_tagger). Unused by the pipeline parser.
  ParameterBlock &null_row() { return null_row_; }
  const ParameterBlock &null_row() const { return null_row_; }

  void Initialize(std::mt19937_64 *rng, double range = 0.01,
                  double hidden_bias = 0.2);
  int64_t NumParameters() const;

  FeatureInputs EmptyInputs() const;

  // Appends the input of one configuration as a batch row. Throws
  // std::invalid_argument when the token rows have the wrong width.
  void Append(const ParserFeatureTokens &features,
              const ParserTokenContext &context, Weights weights,
              FeatureInputs *inputs) const;

  FeatureInputs Assemble(const ParserConfiguration &config,
                         const ParserTokenContext &context,
                         Weights weights) const;

  // Unmasked action logits.
  std::vector<double> ScoreActions(const ParserConfiguration &config,
                                   const ParserTokenContext &context,
                                   Weights weights) const;

  // Greedy decode. `num_steps` receives the number of parser evaluations.
  ParserConfiguration Decode(int num_tokens, const ParserTokenContext &context,
                             Weights weights, int *num_steps = nullptr) const;

 private:
  ParserInput input_ = ParserInput::kImplicit;
  ParserNetworkConfig config_;
  int token_width_ = 0;
  ActionSpace actions_;
  FeedForwardNetwork network_;
  ParameterBlock null_row_;
};

// Group indices of the parser network.
inline constexpr int kImplicitGroup = 0;  // kImplicit
inline constexpr int kTagProbGroup = 0;   // kPipeline
inline constexpr int kWordGroup = 1;      // kPipeline

}  // namespace stackprop

#endif  // STACKPROP_PARSER_H_
