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

#ifndef STACKPROP_TAGGER_H_
#define STACKPROP_TAGGER_H_

#include <span>
#include <vector>

#include "stackprop/nn_kernel.h"
#include "stackprop/tagger_features.h"

namespace stackprop {

// Per-token tagger outputs for one sentence.
struct TaggerActivations {
  Matrix hidden;         // n x H_tagger, one row per token
  Matrix probabilities;  // n x |tags|; empty unless requested
};

// Window-based POS tagger network. Its hidden layer doubles as the token
// representation of the stacked parser.
class Tagger {
 public:
  Tagger() = default;
  Tagger(const TaggerFeatureConfig &features, int word_vocab_size,
         int affix_vocab_size, int hidden_dim, int num_tags);

  FeedForwardNetwork &network() { return network_; }
  const FeedForwardNetwork &network() const { return network_; }
  const TaggerFeatureExtractor &extractor() const { return extractor_; }
  int hidden_dim() const { return network_.hidden_dim(); }
  int num_tags() const { return network_.num_classes(); }

  // Inputs for a batch of tokens of one sentence.
  FeatureInputs BatchInputs(std::span<const TokenFeatureIds> sentence,
                            std::span<const int> positions) const;

  // Hidden activation and tag distribution of token j.
  void Forward(std::span<const TokenFeatureIds> sentence, int j,
               Weights weights, Eigen::RowVectorXd *hidden,
               Eigen::RowVectorXd *probabilities) const;

  // Runs the network up to the hidden layer over every token, plus the
  // softmax when `with_probabilities`.
  TaggerActivations Activations(std::span<const TokenFeatureIds> sentence,
                                Weights weights,
                                bool with_probabilities) const;

  // Argmax tag per token (lowest id on ties). Fills `activations` when
  // non-null.
  std::vector<int> TagSentence(std::span<const TokenFeatureIds> sentence,
                               Weights weights,
                               TaggerActivations *activations = nullptr) const;

 private:
  TaggerFeatureExtractor extractor_;
  FeedForwardNetwork network_;
};

// Index of the largest element, lowest index on ties.
int ArgMax(const Eigen::Ref<const Eigen::RowVectorXd> &row);

}  // namespace stackprop

#endif  // STACKPROP_TAGGER_H_
