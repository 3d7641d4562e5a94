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

#ifndef STACKPROP_EVALUATOR_H_
#define STACKPROP_EVALUATOR_H_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "stackprop/corpus.h"
#include "stackprop/nn_kernel.h"

namespace stackprop {

class StackedModel;

struct SentenceScore {
  int tokens = 0;  // scored tokens
  int correct_heads = 0;
  int correct_labeled = 0;
  double uas() const;
  double las() const;
};

struct EvalReport {
  double uas = 0.0;
  double las = 0.0;
  std::optional<double> pos_acc;
  int64_t n_tokens = 0;
  int64_t correct_heads = 0;
  int64_t correct_labeled = 0;
  int64_t pos_correct = 0;
  int64_t pos_total = 0;
  std::vector<SentenceScore> sentences;
};

// System annotation is read from the pred_* fields when present, otherwise
// from the HEAD/DEPREL/UPOS columns of `predicted`. Punctuation (UPOS PUNCT,
// or a form made only of punctuation characters when the gold tag is
// missing) is skipped for attachment scores unless `include_punct`. POS
// accuracy covers every token and is reported when both sides carry tags.
// Throws DataError on tokenization mismatches.
EvalReport AttachmentScores(const std::vector<Sentence> &gold,
                            const std::vector<Sentence> &predicted,
                            bool include_punct = true);

bool IsPunctuation(const Token &gold_token);

struct CascadeBreakdown {
  std::optional<double> las_on_tagger_errors;  // empty when no errors
  std::optional<double> las_on_rest;
  int64_t error_tokens = 0;
  int64_t rest_tokens = 0;
};

// LAS split by whether the reference tagger (pred_upos, else UPOS of
// `reference`) got the gold tag wrong.
CascadeBreakdown ComputeCascadeBreakdown(
    const std::vector<Sentence> &gold, const std::vector<Sentence> &parsed,
    const std::vector<Sentence> &reference, bool include_punct = true);

struct TTestResult {
  double t = 0.0;
  double p = 1.0;
  int degrees_of_freedom = 0;
};

// Two-sided paired t-test over per-sentence LAS. Zero-variance differences
// give p = 1 when the mean difference is zero and p = 0 otherwise. Throws
// DataError for mismatched or too short reports.
TTestResult PairedSignificance(const EvalReport &a, const EvalReport &b);
TTestResult PairedTTest(std::span<const double> differences);

double CosineSimilarity(const Eigen::Ref<const Eigen::RowVectorXd> &a,
                        const Eigen::Ref<const Eigen::RowVectorXd> &b);

struct Neighbor {
  int sentence = 0;  // index into the corpus
  int token = 0;     // 1-based
  double similarity = 0.0;
};

// k most similar tokens by cosine over per-sentence activation rows, the
// query excluded; ties keep corpus order.
std::vector<Neighbor> NearestNeighbors(const std::vector<Matrix> &activations,
                                       int query_sentence, int query_token,
                                       int k);
std::vector<Neighbor> NearestNeighbors(const StackedModel &model,
                                       const std::vector<Sentence> &corpus,
                                       int query_sentence, int query_token,
                                       int k);

}  // namespace stackprop

#endif  // STACKPROP_EVALUATOR_H_
