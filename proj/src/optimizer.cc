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

#include "stackprop/optimizer.h"

#include <stdexcept>

#include "stackprop/errors.h"

namespace stackprop {

void OptimizerConfig::Validate() const {
  if (!(learning_rate > 0.0)) throw UsageError("eta0 must be positive");
  if (!(decay_steps > 0.0)) throw UsageError("gamma must be positive");
  if (!(momentum >= 0.0 && momentum < 1.0)) {
    throw UsageError("momentum must lie in [0, 1)");
  }
  if (batch_size < 1) throw UsageError("batch size must be at least 1");
  if (averaging_start < 0) throw UsageError("averaging start must be >= 0");
}

double LearningRate(const OptimizerConfig &config, int64_t step) {
  return config.learning_rate /
         (1.0 + static_cast<double>(step - 1) / config.decay_steps);
}

void AsgdStep(std::span<ParameterBlock *const> scope,
              std::span<const Matrix *const> grads,
              const OptimizerConfig &config) {
  if (scope.size() != grads.size()) {
    throw std::invalid_argument("one gradient per parameter block required");
  }
  for (size_t i = 0; i < scope.size(); ++i) {
    ParameterBlock &block = *scope[i];
    const Matrix &grad = *grads[i];
    if (grad.rows() != block.value.rows() || grad.cols() != block.value.cols()) {
      throw std::invalid_argument("gradient shape mismatch for " + block.name);
    }
    ++block.steps;
    const double lr = LearningRate(config, block.steps);
    block.velocity = config.momentum * block.velocity - lr * grad;
    block.value += block.velocity;
    if (block.steps > config.averaging_start) {
      ++block.averaged_steps;
      block.average +=
          (block.value - block.average) / static_cast<double>(block.averaged_steps);
    } else {
      block.average = block.value;
    }
  }
}

}  // namespace stackprop
