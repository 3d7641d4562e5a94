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

#ifndef STACKPROP_OPTIMIZER_H_
#define STACKPROP_OPTIMIZER_H_

#include <cstdint>
#include <span>

#include "stackprop/nn_kernel.h"

namespace stackprop {

// Mini-batched averaged SGD with momentum.
struct OptimizerConfig {
  double learning_rate = 0.05;  // eta0
  double decay_steps = 4000.0;  // gamma, in updates of a block
  double momentum = 0.9;        // mu
  int batch_size = 32;
  int64_t averaging_start = 0;

  // Throws UsageError when a value is out of range.
  void Validate() const;

  bool operator==(const OptimizerConfig &other) const = default;
};

// eta0 / (1 + (step - 1) / gamma) for the 1-based update `step`.
double LearningRate(const OptimizerConfig &config, int64_t step);

// Applies one update to every block in `scope`; grads[i] belongs to
// scope[i]. For each block:
//   velocity <- mu * velocity - lr * grad
//   value    <- value + velocity
//   average  <- running mean of the values since `averaging_start`
// Blocks outside `scope` and their optimizer state are not touched.
void AsgdStep(std::span<ParameterBlock *const> scope,
              std::span<const Matrix *const> grads,
              const OptimizerConfig &config);

}  // namespace stackprop

#endif  // STACKPROP_OPTIMIZER_H_
