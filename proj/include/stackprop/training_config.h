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

#ifndef STACKPROP_TRAINING_CONFIG_H_
#define STACKPROP_TRAINING_CONFIG_H_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "stackprop/model.h"
#include "stackprop/optimizer.h"

namespace stackprop {

struct TrainingSchedule {
  int parser_epochs = 10;
  int tagger_epochs = 5;
  int tagger_pretrain_epochs = 1;  // part of tagger_epochs
  double lambda = 1.0;             // weight of the tagging loss
  int patience = 3;                // dev evaluations without UAS gain

  bool operator==(const TrainingSchedule &other) const = default;
};

// Everything a training run depends on besides the data.
struct TrainingConfig {
  ModelConfig model;
  TrainingSchedule schedule;
  OptimizerConfig tagger_optimizer;
  OptimizerConfig parser_optimizer;
  uint64_t seed = 1;
  int jackknife_folds = 5;
  std::string embeddings;  // optional pretrained word vectors

  // Sets one key. Keys without a "tagger." / "parser." prefix that name an
  // optimizer setting apply to both optimizers. Throws UsageError for
  // unknown keys or unparsable values.
  void Set(const std::string &key, const std::string &value);

  // Parses "key = value" lines; '#' starts a comment. Throws UsageError
  // naming the line on errors.
  void MergeText(const std::string &text);
  void MergeFile(const std::string &path);

  // Every setting, defaults included, in a fixed order.
  std::vector<std::pair<std::string, std::string>> KeyValues() const;
  std::string ToText() const;

  // Throws UsageError for out-of-range values.
  void Validate() const;

  bool operator==(const TrainingConfig &other) const = default;
};

// Keys accepted by TrainingConfig::Set, including unprefixed optimizer keys.
std::vector<std::string> TrainingConfigKeys();

}  // namespace stackprop

#endif  // STACKPROP_TRAINING_CONFIG_H_
