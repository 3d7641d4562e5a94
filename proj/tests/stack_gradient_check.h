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

#ifndef STACKPROP_TESTS_STACK_GRADIENT_CHECK_H_
#define STACKPROP_TESTS_STACK_GRADIENT_CHECK_H_

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "model_util.h"
#include "stackprop/trainer.h"

namespace stackprop {
namespace testing {

inline Sentence MakeSentence(const std::string &id,
                             const std::vector<std::string> &forms,
                             const std::vector<std::string> &tags,
                             const std::vector<int> &heads,
                             const std::vector<std::string> &labels) {
  Sentence s;
  s.id = id;
  for (size_t i = 0; i < forms.size(); ++i) {
    Token t;
    t.index = static_cast<int>(i + 1);
    t.form = forms[i];
    t.upos = tags[i];
    t.head = heads[i];
    t.deprel = labels[i];
    s.tokens.push_back(t);
  }
  return s;
}

// Three words, two tags, two labels.
inline std::vector<Sentence> MiniCorpus() {
  return {
      MakeSentence("m1", {"a", "b", "c"}, {"N", "V", "N"}, {2, 0, 2},
                   {"dep", "root", "dep"}),
      MakeSentence("m2", {"c", "a", "b", "a"}, {"N", "N", "V", "N"},
                   {2, 3, 0, 3}, {"dep", "dep", "root", "dep"}),
      MakeSentence("m3", {"b", "c"}, {"V", "N"}, {0, 1}, {"root", "dep"}),
  };
}

// Tagger H = 8, parser H = 16.
inline ModelConfig MiniConfig(TrainingMode mode) {
  ModelConfig config = SmallModelConfig(mode);
  config.dims.tagger_hidden = 8;
  config.dims.parser.hidden_dim = 16;
  return config;
}

// Uniform weights in a range wide enough that ReLUs are mixed and
// gradients are far from zero.
inline void RandomizeModel(StackedModel *model, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (NamedBlock &b : model->Blocks()) {
    for (Eigen::Index k = 0; k < b.block->value.size(); ++k) {
      b.block->value.data()[k] = u(rng);
    }
    b.block->average = b.block->value;
  }
}

inline double RelativeError(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  if (scale < 1e-7) return std::abs(a - b) < 1e-9 ? 0.0 : 1.0;
  return std::abs(a - b) / scale;
}

struct GradientCheck {
  int checked = 0;
  int failed = 0;
  double worst = 0.0;
  std::string worst_entry;
  // Analytic gradients that must vanish but did not.
  int nonzero_softmax = 0;
  bool tagger_words_reached = false;
};

// Central differences (step 1e-5) of the summed parser loss on every
// transition of the mini corpus, against the analytic gradients of every
// parser block, the learned NULL row and every tagger block.
inline GradientCheck CheckStackGradients(TrainingMode mode, uint64_t seed,
                                         double tolerance = 1e-4) {
  const std::vector<Sentence> corpus = MiniCorpus();
  StackedModel model = StackedModel::Build(MiniConfig(mode), corpus);
  RandomizeModel(&model, seed);
  TrainingData data = PrepareTrainingData(model, corpus);
  if (mode == TrainingMode::kPipeline) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (const Sentence &s : corpus) {
      Matrix d(s.size(), model.vocab().tags.size());
      for (Eigen::Index k = 0; k < d.size(); ++k) d.data()[k] = u(rng);
      data.tag_distributions.push_back(d);
    }
  }
  const std::span<const ParserExample> batch(data.parser_examples);
  ParserGradients grads = ZeroParserGradients(model);
  ParserBatchGradients(model, data, batch, 1.0, &grads);
  auto loss = [&] {
    ParserGradients scratch = ZeroParserGradients(model);
    return ParserBatchGradients(model, data, batch, 1.0, &scratch);
  };

  GradientCheck out;
  const double h = 1e-5;
  auto check = [&](Matrix *value, const Matrix &analytic,
                   const std::string &name) {
    for (Eigen::Index k = 0; k < value->size(); ++k) {
      const double saved = value->data()[k];
      value->data()[k] = saved + h;
      const double plus = loss();
      value->data()[k] = saved - h;
      const double minus = loss();
      value->data()[k] = saved;
      const double err =
          RelativeError(analytic.data()[k], (plus - minus) / (2 * h));
      ++out.checked;
      if (err >= tolerance) ++out.failed;
      if (err > out.worst || out.worst_entry.empty()) {
        out.worst = std::max(out.worst, err);
        out.worst_entry = name + "[" + std::to_string(k) + "]";
      }
    }
  };

  FeedForwardNetwork &parser = model.parser().network();
  for (size_t i = 0; i < parser.blocks().size(); ++i) {
    check(&parser.blocks()[i].value, grads.parser.blocks[i],
          "parser/" + parser.blocks()[i].name);
  }
  FeedForwardNetwork &tagger = model.tagger().network();
  if (mode != TrainingMode::kPipeline) {
    check(&model.parser().null_row().value, grads.null_row, "null_row");
  }
  // The tagger softmax is included: its numeric gradient is zero too.
  for (size_t i = 0; i < tagger.blocks().size(); ++i) {
    check(&tagger.blocks()[i].value, grads.tagger.blocks[i],
          "tagger/" + tagger.blocks()[i].name);
  }
  for (int i : tagger.SoftmaxBlocks()) {
    if (!grads.tagger.blocks[i].isZero(0.0)) ++out.nonzero_softmax;
  }
  out.tagger_words_reached =
      !grads.tagger.blocks[tagger.embedding_block(3)].isZero(0.0);
  return out;
}

}  // namespace testing
}  // namespace stackprop

#endif  // STACKPROP_TESTS_STACK_GRADIENT_CHECK_H_
