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

#include "stackprop/nn_kernel.h"

#include <stdexcept>

namespace stackprop {

void FeatureGroupSpec::Validate() const {
  // Dense rows carry no NULL id, so a single column is enough for them.
  const int min_vocab = dense ? 1 : 2;
  if (num_features < 1 || vocab_size < min_vocab || embedding_dim < 1) {
    throw std::invalid_argument("feature group '" + name +
                                "' needs F >= 1, V >= 2 (1 if dense), D >= 1");
  }
  if (passthrough && (!dense || embedding_dim != vocab_size)) {
    throw std::invalid_argument("passthrough group '" + name +
                                "' must be dense with D == V");
  }
}

void ParameterBlock::Resize(int rows, int cols) {
  value = Matrix::Zero(rows, cols);
  velocity = Matrix::Zero(rows, cols);
  average = Matrix::Zero(rows, cols);
  steps = 0;
  averaged_steps = 0;
}

void Gradients::SetZero() {
  for (Matrix &block : blocks) block.setZero();
}

FeedForwardNetwork::FeedForwardNetwork(std::vector<FeatureGroupSpec> groups,
                                       int hidden_dim, int num_classes)
    : groups_(std::move(groups)),
      hidden_dim_(hidden_dim),
      num_classes_(num_classes) {
  if (groups_.empty() || hidden_dim < 1 || num_classes < 1) {
    throw std::invalid_argument("network needs groups, H >= 1 and K >= 1");
  }
  for (const FeatureGroupSpec &spec : groups_) {
    spec.Validate();
    offsets_.push_back(input_dim_);
    input_dim_ += spec.output_width();
    if (spec.passthrough) {
      embedding_blocks_.push_back(-1);
    } else {
      embedding_blocks_.push_back(static_cast<int>(blocks_.size()));
      ParameterBlock block;
      block.name = "embedding/" + spec.name;
      block.Resize(spec.vocab_size, spec.embedding_dim);
      blocks_.push_back(std::move(block));
    }
  }
  first_dense_block_ = static_cast<int>(blocks_.size());
  const std::pair<const char *, std::pair<int, int>> shapes[] = {
      {"hidden/weights", {input_dim_, hidden_dim_}},
      {"hidden/bias", {1, hidden_dim_}},
      {"softmax/weights", {hidden_dim_, num_classes_}},
      {"softmax/bias", {1, num_classes_}},
  };
  for (const auto &[name, shape] : shapes) {
    ParameterBlock block;
    block.name = name;
    block.Resize(shape.first, shape.second);
    blocks_.push_back(std::move(block));
  }
}

std::vector<int> FeedForwardNetwork::RepresentationBlocks() const {
  std::vector<int> indices;
  for (int i = 0; i <= hidden_bias_block(); ++i) indices.push_back(i);
  return indices;
}

std::vector<int> FeedForwardNetwork::SoftmaxBlocks() const {
  return {softmax_weights_block(), softmax_bias_block()};
}

void FeedForwardNetwork::Initialize(std::mt19937_64 *rng, double range,
                                    double hidden_bias) {
  std::uniform_real_distribution<double> uniform(-range, range);
  for (int i = 0; i < static_cast<int>(blocks_.size()); ++i) {
    ParameterBlock &block = blocks_[i];
    if (i == hidden_bias_block()) {
      block.value.setConstant(hidden_bias);
    } else if (i == softmax_bias_block()) {
      block.value.setZero();
    } else {
      for (Eigen::Index k = 0; k < block.value.size(); ++k) {
        block.value.data()[k] = uniform(*rng);
      }
    }
    block.velocity.setZero();
    block.average = block.value;
    block.steps = 0;
    block.averaged_steps = 0;
  }
}

int64_t FeedForwardNetwork::NumParameters() const {
  int64_t total = 0;
  for (const ParameterBlock &block : blocks_) total += block.size();
  return total;
}

Gradients FeedForwardNetwork::ZeroGradients() const {
  Gradients grads;
  for (const ParameterBlock &block : blocks_) {
    grads.blocks.push_back(Matrix::Zero(block.value.rows(), block.value.cols()));
  }
  return grads;
}

void FeedForwardNetwork::CheckInputs(const FeatureInputs &inputs,
                                     int *batch) const {
  if (inputs.size() != groups_.size()) {
    throw std::invalid_argument("expected " + std::to_string(groups_.size()) +
                                " feature groups, got " +
                                std::to_string(inputs.size()));
  }
  int b = -1;
  for (size_t g = 0; g < groups_.size(); ++g) {
    const FeatureGroupSpec &spec = groups_[g];
    const FeatureMatrix &input = inputs[g];
    int rows = 0;
    if (spec.dense) {
      if (input.rows.cols() != spec.vocab_size) {
        throw std::invalid_argument("dense group '" + spec.name +
                                    "' expects rows of width " +
                                    std::to_string(spec.vocab_size));
      }
      rows = static_cast<int>(input.rows.rows());
    } else {
      rows = static_cast<int>(input.ids.size());
      for (int id : input.ids) {
        if (id < 0 || id >= spec.vocab_size) {
          throw std::invalid_argument("id " + std::to_string(id) +
                                      " out of range for group '" +
                                      spec.name + "'");
        }
      }
    }
    if (rows % spec.num_features != 0) {
      throw std::invalid_argument("group '" + spec.name +
                                  "' row count is not a multiple of F");
    }
    const int group_batch = rows / spec.num_features;
    if (b >= 0 && group_batch != b) {
      throw std::invalid_argument("feature groups disagree on batch size");
    }
    b = group_batch;
  }
  *batch = b;
}

Matrix FeedForwardNetwork::Embed(const FeatureInputs &inputs,
                                 Weights weights) const {
  int batch = 0;
  CheckInputs(inputs, &batch);
  Matrix h0(batch, input_dim_);
  for (size_t g = 0; g < groups_.size(); ++g) {
    const FeatureGroupSpec &spec = groups_[g];
    const int width = spec.output_width();
    const int offset = offsets_[g];
    if (spec.passthrough) {
      h0.middleCols(offset, width) = Eigen::Map<const Matrix>(
          inputs[g].rows.data(), batch, width);
      continue;
    }
    const Matrix &embedding = Select(blocks_[embedding_blocks_[g]], weights);
    const int dim = spec.embedding_dim;
    if (spec.dense) {
      const Matrix projected = inputs[g].rows * embedding;
      h0.middleCols(offset, width) =
          Eigen::Map<const Matrix>(projected.data(), batch, width);
    } else {
      const std::vector<int> &ids = inputs[g].ids;
      for (int b = 0; b < batch; ++b) {
        for (int f = 0; f < spec.num_features; ++f) {
          h0.block(b, offset + f * dim, 1, dim) =
              embedding.row(ids[b * spec.num_features + f]);
        }
      }
    }
  }
  return h0;
}

Matrix FeedForwardNetwork::Hidden(const Matrix &h0, Weights weights,
                                  Matrix *pre_activation) const {
  if (h0.cols() != input_dim_) {
    throw std::invalid_argument("embedding layer width " +
                                std::to_string(h0.cols()) + " != " +
                                std::to_string(input_dim_));
  }
  Matrix pre = h0 * Select(blocks_[hidden_weights_block()], weights);
  pre.rowwise() += Select(blocks_[hidden_bias_block()], weights).row(0);
  Matrix hidden = pre.cwiseMax(0.0);
  if (pre_activation != nullptr) *pre_activation = std::move(pre);
  return hidden;
}

Matrix FeedForwardNetwork::Logits(const Matrix &hidden, Weights weights) const {
  Matrix logits = hidden * Select(blocks_[softmax_weights_block()], weights);
  logits.rowwise() += Select(blocks_[softmax_bias_block()], weights).row(0);
  return logits;
}

void FeedForwardNetwork::Forward(const FeatureInputs &inputs, Weights weights,
                                 ForwardCache *cache) const {
  cache->h0 = Embed(inputs, weights);
  cache->hidden = Hidden(cache->h0, weights, &cache->hidden_pre);
  cache->logits = Logits(cache->hidden, weights);
}

void FeedForwardNetwork::BackwardFromLogits(
    const FeatureInputs &inputs, const ForwardCache &cache,
    const Matrix &d_logits, Weights weights, Gradients *grads,
    std::vector<Matrix> *input_grads) const {
  grads->blocks[softmax_weights_block()].noalias() +=
      cache.hidden.transpose() * d_logits;
  grads->blocks[softmax_bias_block()] += d_logits.colwise().sum();
  const Matrix d_hidden =
      d_logits * Select(blocks_[softmax_weights_block()], weights).transpose();
  BackwardFromHidden(inputs, cache, d_hidden, weights, grads, input_grads);
}

void FeedForwardNetwork::BackwardFromHidden(
    const FeatureInputs &inputs, const ForwardCache &cache,
    const Matrix &d_hidden, Weights weights, Gradients *grads,
    std::vector<Matrix> *input_grads) const {
  const int batch = static_cast<int>(cache.h0.rows());
  const Matrix d_pre = d_hidden.cwiseProduct(
      (cache.hidden_pre.array() > 0.0).cast<double>().matrix());
  grads->blocks[hidden_weights_block()].noalias() +=
      cache.h0.transpose() * d_pre;
  grads->blocks[hidden_bias_block()] += d_pre.colwise().sum();
  const Matrix d_h0 =
      d_pre * Select(blocks_[hidden_weights_block()], weights).transpose();

  if (input_grads != nullptr) input_grads->assign(groups_.size(), Matrix());
  for (size_t g = 0; g < groups_.size(); ++g) {
    const FeatureGroupSpec &spec = groups_[g];
    const int width = spec.output_width();
    const int offset = offsets_[g];
    const int rows = batch * spec.num_features;
    if (spec.dense) {
      const Matrix segment = d_h0.middleCols(offset, width);
      const Eigen::Map<const Matrix> d_rows(segment.data(), rows,
                                            spec.embedding_dim);
      if (spec.passthrough) {
        if (input_grads != nullptr) (*input_grads)[g] = d_rows;
        continue;
      }
      const Matrix &embedding = Select(blocks_[embedding_blocks_[g]], weights);
      grads->blocks[embedding_blocks_[g]].noalias() +=
          inputs[g].rows.transpose() * d_rows;
      if (input_grads != nullptr) {
        (*input_grads)[g] = d_rows * embedding.transpose();
      }
    } else {
      Matrix &d_embedding = grads->blocks[embedding_blocks_[g]];
      const int dim = spec.embedding_dim;
      const std::vector<int> &ids = inputs[g].ids;
      for (int b = 0; b < batch; ++b) {
        for (int f = 0; f < spec.num_features; ++f) {
          d_embedding.row(ids[b * spec.num_features + f]) +=
              d_h0.block(b, offset + f * dim, 1, dim);
        }
      }
    }
  }
}

Matrix Softmax(const Matrix &logits) {
  Matrix probs(logits.rows(), logits.cols());
  for (Eigen::Index r = 0; r < logits.rows(); ++r) {
    const double max = logits.row(r).maxCoeff();
    probs.row(r) = (logits.row(r).array() - max).exp().matrix();
    probs.row(r) /= probs.row(r).sum();
  }
  return probs;
}

double SoftmaxCrossEntropy(const Matrix &logits, std::span<const int> gold,
                           double scale, Matrix *probs, Matrix *d_logits) {
  if (static_cast<Eigen::Index>(gold.size()) != logits.rows()) {
    throw std::invalid_argument("one gold class per logit row required");
  }
  double loss = 0.0;
  Matrix p(logits.rows(), logits.cols());
  for (Eigen::Index r = 0; r < logits.rows(); ++r) {
    const int y = gold[r];
    if (y < 0 || y >= logits.cols()) {
      throw std::invalid_argument("gold class out of range");
    }
    const double max = logits.row(r).maxCoeff();
    p.row(r) = (logits.row(r).array() - max).exp().matrix();
    const double z = p.row(r).sum();
    p.row(r) /= z;
    loss += -(logits(r, y) - max - std::log(z));
  }
  if (d_logits != nullptr) {
    *d_logits = p;
    for (Eigen::Index r = 0; r < logits.rows(); ++r) (*d_logits)(r, gold[r]) -= 1.0;
    *d_logits *= scale;
  }
  if (probs != nullptr) *probs = std::move(p);
  return loss;
}

}  // namespace stackprop
