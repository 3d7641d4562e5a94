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

#ifndef STACKPROP_NN_KERNEL_H_
#define STACKPROP_NN_KERNEL_H_

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace stackprop {

using Matrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// A group of F feature templates sharing one V x D embedding matrix.
//
// Sparse groups take one id per template and look up embedding rows. Dense
// groups take one V-wide input row per template and multiply it by the
// embedding matrix; passthrough groups feed their dense rows to the hidden
// layer unembedded (D == V, no parameters).
struct FeatureGroupSpec {
  std::string name;
  int num_features = 1;
  int vocab_size = 2;
  int embedding_dim = 1;
  bool dense = false;
  bool passthrough = false;

  int output_width() const { return num_features * embedding_dim; }

  // Throws std::invalid_argument on inconsistent shapes.
  void Validate() const;

  bool operator==(const FeatureGroupSpec &other) const = default;
};

// Inputs of one group for a batch of B examples, stored example-major:
// sparse groups fill `ids` (B*F entries), dense groups fill `rows`
// ((B*F) x V).
struct FeatureMatrix {
  std::vector<int> ids;
  Matrix rows;
};
using FeatureInputs = std::vector<FeatureMatrix>;

// A parameter matrix together with its optimizer state.
struct ParameterBlock {
  std::string name;
  Matrix value;
  Matrix velocity;
  Matrix average;
  int64_t steps = 0;
  int64_t averaged_steps = 0;

  void Resize(int rows, int cols);
  int64_t size() const { return value.size(); }
};

// Selects raw iterates or their running average at inference.
enum class Weights { kRaw, kAveraged };

inline const Matrix &Select(const ParameterBlock &block, Weights weights) {
  return weights == Weights::kAveraged ? block.average : block.value;
}

struct ForwardCache {
  Matrix h0;          // B x input_dim
  Matrix hidden_pre;  // B x H
  Matrix hidden;      // B x H, after ReLU
  Matrix logits;      // B x K
};

// Gradients aligned with FeedForwardNetwork::blocks().
struct Gradients {
  std::vector<Matrix> blocks;

  void SetZero();
};

// Embedding layer -> ReLU hidden layer -> softmax, with manual backprop.
class FeedForwardNetwork {
 public:
  FeedForwardNetwork() = default;
  FeedForwardNetwork(std::vector<FeatureGroupSpec> groups, int hidden_dim,
                     int num_classes);

  const std::vector<FeatureGroupSpec> &groups() const { return groups_; }
  int hidden_dim() const { return hidden_dim_; }
  int num_classes() const { return num_classes_; }
  int input_dim() const { return input_dim_; }
  int group_offset(int group) const { return offsets_[group]; }

  std::vector<ParameterBlock> &blocks() { return blocks_; }
  const std::vector<ParameterBlock> &blocks() const { return blocks_; }

  // Block index of the group's embedding matrix, or -1 for passthrough.
  int embedding_block(int group) const { return embedding_blocks_[group]; }
  int hidden_weights_block() const { return first_dense_block_; }
  int hidden_bias_block() const { return first_dense_block_ + 1; }
  int softmax_weights_block() const { return first_dense_block_ + 2; }
  int softmax_bias_block() const { return first_dense_block_ + 3; }

  // Block indices of everything below the softmax layer.
  std::vector<int> RepresentationBlocks() const;
  std::vector<int> SoftmaxBlocks() const;

  // Weights ~ U(-range, range); hidden bias = `hidden_bias`; softmax bias 0.
  // Averages start equal to the initial values.
  void Initialize(std::mt19937_64 *rng, double range = 0.01,
                  double hidden_bias = 0.2);

  int64_t NumParameters() const;
  Gradients ZeroGradients() const;

  // h0 = [X^g E^g | all g], one row per example.
  Matrix Embed(const FeatureInputs &inputs, Weights weights) const;
  // h1 = max(0, h0 W1 + b1).
  Matrix Hidden(const Matrix &h0, Weights weights,
                Matrix *pre_activation = nullptr) const;
  Matrix Logits(const Matrix &hidden, Weights weights) const;
  void Forward(const FeatureInputs &inputs, Weights weights,
               ForwardCache *cache) const;

  // Backward passes accumulate parameter gradients into `grads`. When
  // `input_grads` is non-null, gradients with respect to the dense input
  // rows of every dense group are written to (*input_grads)[g].
  void BackwardFromLogits(const FeatureInputs &inputs,
                          const ForwardCache &cache, const Matrix &d_logits,
                          Weights weights, Gradients *grads,
                          std::vector<Matrix> *input_grads) const;
  void BackwardFromHidden(const FeatureInputs &inputs,
                          const ForwardCache &cache, const Matrix &d_hidden,
                          Weights weights, Gradients *grads,
                          std::vector<Matrix> *input_grads) const;

 private:
  void CheckInputs(const FeatureInputs &inputs, int *batch) const;

  std::vector<FeatureGroupSpec> groups_;
  int hidden_dim_ = 0;
  int num_classes_ = 0;
  int input_dim_ = 0;
  std::vector<int> offsets_;
  std::vector<int> embedding_blocks_;
  int first_dense_block_ = 0;
  std::vector<ParameterBlock> blocks_;
};

// Row-wise softmax (max-shifted) and cross-entropy against `gold`. Returns
// the summed loss; when non-null, `probs` receives the probabilities and
// `d_logits` receives scale * (probs - onehot(gold)).
double SoftmaxCrossEntropy(const Matrix &logits, std::span<const int> gold,
                           double scale, Matrix *probs, Matrix *d_logits);

// Row-wise max-shifted softmax.
Matrix Softmax(const Matrix &logits);

}  // namespace stackprop

#endif  // STACKPROP_NN_KERNEL_H_
