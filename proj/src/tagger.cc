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

#include <numeric>

namespace stackprop {

Tagger::Tagger(const TaggerFeatureConfig &features, int word_vocab_size,
               int affix_vocab_size, int hidden_dim, int num_tags)
    : extractor_(features),
      network_(extractor_.GroupSpecs(word_vocab_size, affix_vocab_size),
               hidden_dim, num_tags) {}

FeatureInputs Tagger::BatchInputs(std::span<const TokenFeatureIds> sentence,
                                  std::span<const int> positions) const {
  FeatureInputs inputs = extractor_.EmptyInputs();
  for (int j : positions) extractor_.Append(sentence, j, &inputs);
  return inputs;
}

void Tagger::Forward(std::span<const TokenFeatureIds> sentence, int j,
                     Weights weights, Eigen::RowVectorXd *hidden,
                     Eigen::RowVectorXd *probabilities) const {
  const FeatureInputs inputs = extractor_.Extract(sentence, j);
  const Matrix h1 = network_.Hidden(network_.Embed(inputs, weights), weights);
  if (hidden != nullptr) *hidden = h1.row(0);
  if (probabilities != nullptr) {
    *probabilities = Softmax(network_.Logits(h1, weights)).row(0);
  }
}

TaggerActivations Tagger::Activations(std::span<const TokenFeatureIds> sentence,
                                      Weights weights,
                                      bool with_probabilities) const {
  std::vector<int> positions(sentence.size());
  std::iota(positions.begin(), positions.end(), 1);
  const FeatureInputs inputs = BatchInputs(sentence, positions);
  TaggerActivations out;
  out.hidden = network_.Hidden(network_.Embed(inputs, weights), weights);
  if (with_probabilities) {
    out.probabilities = Softmax(network_.Logits(out.hidden, weights));
  }
  return out;
}

std::vector<int> Tagger::TagSentence(std::span<const TokenFeatureIds> sentence,
                                     Weights weights,
                                     TaggerActivations *activations) const {
  TaggerActivations computed = Activations(sentence, weights, true);
  std::vector<int> tags(sentence.size());
  for (size_t i = 0; i < sentence.size(); ++i) {
    tags[i] = ArgMax(computed.probabilities.row(i));
  }
  if (activations != nullptr) *activations = std::move(computed);
  return tags;
}

int ArgMax(const Eigen::Ref<const Eigen::RowVectorXd> &row) {
  int best = 0;
  for (Eigen::Index i = 1; i < row.size(); ++i) {
    if (row[i] > row[best]) best = static_cast<int>(i);
  }
  return best;
}

}  // namespace stackprop
