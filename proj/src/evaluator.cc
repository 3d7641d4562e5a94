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

#include "stackprop/evaluator.h"

#include <algorithm>
#include <cmath>

#include <boost/math/distributions/students_t.hpp>

#include "stackprop/errors.h"
#include "stackprop/model.h"
#include "stackprop/unicode_text.h"

namespace stackprop {

namespace {

struct SystemToken {
  int head;
  const std::string *label;
  const std::string *tag;
};

SystemToken System(const Token &token) {
  return {token.pred_head ? *token.pred_head : token.head,
          token.pred_deprel ? &*token.pred_deprel : &token.deprel,
          token.pred_upos ? &*token.pred_upos : &token.upos};
}

void CheckAligned(const std::vector<Sentence> &gold,
                  const std::vector<Sentence> &other, const char *what) {
  if (gold.size() != other.size()) {
    throw DataError(std::string(what) + " has " + std::to_string(other.size()) +
                    " sentences, gold has " + std::to_string(gold.size()));
  }
  for (size_t s = 0; s < gold.size(); ++s) {
    const Sentence &g = gold[s];
    const Sentence &o = other[s];
    bool same = g.size() == o.size();
    for (int i = 0; same && i < g.size(); ++i) {
      same = g.tokens[i].form == o.tokens[i].form;
    }
    if (!same) {
      throw DataError("tokenization mismatch in sentence " + g.id + " (" +
                      what + ")");
    }
  }
}

bool HasTag(const std::string &tag) { return !tag.empty() && tag != "_"; }

}  // namespace

double SentenceScore::uas() const {
  return tokens == 0 ? 1.0 : static_cast<double>(correct_heads) / tokens;
}

double SentenceScore::las() const {
  return tokens == 0 ? 1.0 : static_cast<double>(correct_labeled) / tokens;
}

bool IsPunctuation(const Token &gold_token) {
  if (HasTag(gold_token.upos)) return gold_token.upos == "PUNCT";
  return IsPunctuationToken(gold_token.form);
}

EvalReport AttachmentScores(const std::vector<Sentence> &gold,
                            const std::vector<Sentence> &predicted,
                            bool include_punct) {
  CheckAligned(gold, predicted, "prediction");
  EvalReport report;
  bool tags_seen = false;
  for (size_t s = 0; s < gold.size(); ++s) {
    SentenceScore score;
    for (int i = 0; i < gold[s].size(); ++i) {
      const Token &g = gold[s].tokens[i];
      const SystemToken p = System(predicted[s].tokens[i]);
      if (HasTag(g.upos) && HasTag(*p.tag)) {
        tags_seen = true;
        ++report.pos_total;
        if (g.upos == *p.tag) ++report.pos_correct;
      }
      if (!include_punct && IsPunctuation(g)) continue;
      ++score.tokens;
      if (p.head == g.head) {
        ++score.correct_heads;
        if (*p.label == g.deprel) ++score.correct_labeled;
      }
    }
    report.n_tokens += score.tokens;
    report.correct_heads += score.correct_heads;
    report.correct_labeled += score.correct_labeled;
    report.sentences.push_back(score);
  }
  if (report.n_tokens > 0) {
    report.uas = static_cast<double>(report.correct_heads) / report.n_tokens;
    report.las = static_cast<double>(report.correct_labeled) / report.n_tokens;
  }
  if (tags_seen) {
    report.pos_acc =
        static_cast<double>(report.pos_correct) / report.pos_total;
  }
  return report;
}

CascadeBreakdown ComputeCascadeBreakdown(
    const std::vector<Sentence> &gold, const std::vector<Sentence> &parsed,
    const std::vector<Sentence> &reference, bool include_punct) {
  CheckAligned(gold, parsed, "parse");
  CheckAligned(gold, reference, "reference tagging");
  CascadeBreakdown out;
  int64_t error_correct = 0;
  int64_t rest_correct = 0;
  for (size_t s = 0; s < gold.size(); ++s) {
    for (int i = 0; i < gold[s].size(); ++i) {
      const Token &g = gold[s].tokens[i];
      if (!include_punct && IsPunctuation(g)) continue;
      const SystemToken p = System(parsed[s].tokens[i]);
      const Token &r = reference[s].tokens[i];
      const std::string &ref_tag = r.pred_upos ? *r.pred_upos : r.upos;
      const bool correct = p.head == g.head && *p.label == g.deprel;
      if (ref_tag != g.upos) {
        ++out.error_tokens;
        error_correct += correct;
      } else {
        ++out.rest_tokens;
        rest_correct += correct;
      }
    }
  }
  if (out.error_tokens > 0) {
    out.las_on_tagger_errors =
        static_cast<double>(error_correct) / out.error_tokens;
  }
  if (out.rest_tokens > 0) {
    out.las_on_rest = static_cast<double>(rest_correct) / out.rest_tokens;
  }
  return out;
}

TTestResult PairedTTest(std::span<const double> differences) {
  const size_t n = differences.size();
  if (n < 2) throw DataError("paired t-test needs at least 2 sentences");
  double mean = 0.0;
  for (double d : differences) mean += d;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double d : differences) ss += (d - mean) * (d - mean);
  const double variance = ss / static_cast<double>(n - 1);
  TTestResult result;
  result.degrees_of_freedom = static_cast<int>(n - 1);
  if (variance <= 0.0) {
    if (mean == 0.0) {
      result.t = 0.0;
      result.p = 1.0;
    } else {
      result.t = mean > 0 ? std::numeric_limits<double>::infinity()
                          : -std::numeric_limits<double>::infinity();
      result.p = 0.0;
    }
    return result;
  }
  result.t = mean / std::sqrt(variance / static_cast<double>(n));
  const boost::math::students_t dist(static_cast<double>(n - 1));
  result.p = 2.0 * boost::math::cdf(boost::math::complement(
                       dist, std::fabs(result.t)));
  return result;
}

TTestResult PairedSignificance(const EvalReport &a, const EvalReport &b) {
  if (a.sentences.size() != b.sentences.size()) {
    throw DataError("reports cover different numbers of sentences");
  }
  std::vector<double> differences;
  for (size_t i = 0; i < a.sentences.size(); ++i) {
    differences.push_back(a.sentences[i].las() - b.sentences[i].las());
  }
  return PairedTTest(differences);
}

double CosineSimilarity(const Eigen::Ref<const Eigen::RowVectorXd> &a,
                        const Eigen::Ref<const Eigen::RowVectorXd> &b) {
  const double na = a.norm();
  const double nb = b.norm();
  if (na == 0.0 || nb == 0.0) return 0.0;
  return std::clamp(a.dot(b) / (na * nb), -1.0, 1.0);
}

std::vector<Neighbor> NearestNeighbors(const std::vector<Matrix> &activations,
                                       int query_sentence, int query_token,
                                       int k) {
  if (activations.empty()) throw DataError("empty corpus");
  if (query_sentence < 0 ||
      query_sentence >= static_cast<int>(activations.size()) ||
      query_token < 1 || query_token > activations[query_sentence].rows()) {
    throw DataError("query token out of range");
  }
  const Eigen::RowVectorXd query =
      activations[query_sentence].row(query_token - 1);
  std::vector<Neighbor> all;
  for (size_t s = 0; s < activations.size(); ++s) {
    for (Eigen::Index t = 0; t < activations[s].rows(); ++t) {
      if (static_cast<int>(s) == query_sentence && t + 1 == query_token) {
        continue;
      }
      all.push_back({static_cast<int>(s), static_cast<int>(t + 1),
                     CosineSimilarity(query, activations[s].row(t))});
    }
  }
  std::stable_sort(all.begin(), all.end(),
                   [](const Neighbor &a, const Neighbor &b) {
                     return a.similarity > b.similarity;
                   });
  if (k >= 0 && static_cast<size_t>(k) < all.size()) all.resize(k);
  return all;
}

std::vector<Neighbor> NearestNeighbors(const StackedModel &model,
                                       const std::vector<Sentence> &corpus,
                                       int query_sentence, int query_token,
                                       int k) {
  if (corpus.empty()) throw DataError("empty corpus");
  std::vector<Matrix> activations;
  activations.reserve(corpus.size());
  for (const Sentence &sentence : corpus) {
    if (sentence.empty()) {
      activations.emplace_back(0, model.tagger().hidden_dim());
    } else {
      activations.push_back(
          model.Activations(sentence, Weights::kAveraged, false).hidden);
    }
  }
  return NearestNeighbors(activations, query_sentence, query_token, k);
}

}  // namespace stackprop
