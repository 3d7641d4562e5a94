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

#include "stackprop/trainer.h"

#include <algorithm>
#include <array>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <utility>

#include "stackprop/errors.h"
#include "stackprop/evaluator.h"
#include "stackprop/optimizer.h"
#include "stackprop/projectivize.h"

namespace stackprop {

namespace {

void Log(const TrainingLogger &log, const std::string &line) {
  if (log) log(line);
}

std::string FormatScore(double v) {
  std::ostringstream out;
  out.setf(std::ios::fixed);
  out.precision(4);
  out << v;
  return out.str();
}

// Shuffled pass over a fixed example set; reshuffles at every epoch start.
class ExampleStream {
 public:
  explicit ExampleStream(size_t size) : order_(size), pos_(size) {
    std::iota(order_.begin(), order_.end(), 0);
  }

  size_t size() const { return order_.size(); }

  // Next batch of at most `max_size` indices, never crossing an epoch
  // boundary.
  std::span<const int> Next(size_t max_size, std::mt19937_64 *rng) {
    if (pos_ == order_.size()) {
      std::shuffle(order_.begin(), order_.end(), *rng);
      pos_ = 0;
    }
    const size_t n = std::min(max_size, order_.size() - pos_);
    std::span<const int> batch(order_.data() + pos_, n);
    pos_ += n;
    return batch;
  }

  bool AtEpochEnd() const { return pos_ == order_.size(); }

 private:
  std::vector<int> order_;
  size_t pos_;
};

template <typename T>
std::vector<T> Gather(const std::vector<T> &items, std::span<const int> idx) {
  std::vector<T> out;
  out.reserve(idx.size());
  for (int i : idx) out.push_back(items[i]);
  return out;
}

std::vector<Sentence> Slice(const std::vector<Sentence> &corpus, int begin,
                            int end) {
  return std::vector<Sentence>(corpus.begin() + begin, corpus.begin() + end);
}

}  // namespace

TrainingData PrepareTrainingData(const StackedModel &model,
                                 const std::vector<Sentence> &corpus,
                                 const TrainingLogger &log) {
  TrainingData data;
  const TransitionOptions options = model.config().transitions();
  const ActionSpace &space = model.parser().actions();
  for (size_t s = 0; s < corpus.size(); ++s) {
    const Sentence &sentence = corpus[s];
    data.token_ids.push_back(model.TokenIds(sentence));
    for (const Token &token : sentence.tokens) {
      const int tag = model.vocab().tags.Lookup(token.upos);
      if (tag >= 0) {
        data.tagger_examples.push_back({static_cast<int>(s), token.index, tag});
      }
    }
    if (sentence.empty()) continue;
    try {
      GoldTree gold = model.Gold(sentence);
      if (!options.swap && !IsProjective(gold.heads)) {
        gold.heads = ProjectivizeHeads(gold.heads);
        ++data.projectivized;
      }
      const Derivation derivation = Unroll(gold, options);
      for (const DerivationStep &step : derivation.steps) {
        data.parser_examples.push_back({static_cast<int>(s),
                                        ExtractParserFeatures(step.config),
                                        space.Encode(step.action)});
      }
    } catch (const Error &e) {
      ++data.skipped;
      Log(log, "warning=skipped_sentence id=" + sentence.id + " reason=\"" +
                   e.what() + "\"");
    }
  }
  return data;
}

double TaggerBatchGradients(const StackedModel &model,
                            const TrainingData &data,
                            std::span<const TaggerExample> batch, double scale,
                            Gradients *grads) {
  const Tagger &tagger = model.tagger();
  FeatureInputs inputs = tagger.extractor().EmptyInputs();
  std::vector<int> gold;
  gold.reserve(batch.size());
  for (const TaggerExample &example : batch) {
    tagger.extractor().Append(data.token_ids[example.sentence], example.token,
                              &inputs);
    gold.push_back(example.tag);
  }
  ForwardCache cache;
  tagger.network().Forward(inputs, Weights::kRaw, &cache);
  Matrix d_logits;
  const double loss =
      SoftmaxCrossEntropy(cache.logits, gold, scale, nullptr, &d_logits);
  tagger.network().BackwardFromLogits(inputs, cache, d_logits, Weights::kRaw,
                                      grads, nullptr);
  return scale * loss;
}

ParserGradients ZeroParserGradients(const StackedModel &model) {
  ParserGradients grads;
  grads.parser = model.parser().network().ZeroGradients();
  grads.null_row = Matrix::Zero(model.parser().null_row().value.rows(),
                                model.parser().null_row().value.cols());
  grads.tagger = model.tagger().network().ZeroGradients();
  return grads;
}

double ParserBatchGradients(const StackedModel &model,
                            const TrainingData &data,
                            std::span<const ParserExample> batch,
                            double scale, ParserGradients *grads) {
  const Parser &parser = model.parser();
  const FeedForwardNetwork &network = parser.network();
  std::vector<int> gold;
  gold.reserve(batch.size());
  for (const ParserExample &example : batch) gold.push_back(example.action);

  if (parser.input() == ParserInput::kPipeline) {
    if (data.tag_distributions.size() != data.token_ids.size()) {
      throw DataError("pipeline training needs jackknifed tag distributions");
    }
    FeatureInputs inputs = parser.EmptyInputs();
    for (const ParserExample &example : batch) {
      ParserTokenContext context;
      context.token_rows = &data.tag_distributions[example.sentence];
      context.token_ids = data.token_ids[example.sentence];
      parser.Append(example.features, context, Weights::kRaw, &inputs);
    }
    ForwardCache cache;
    network.Forward(inputs, Weights::kRaw, &cache);
    Matrix d_logits;
    const double loss =
        SoftmaxCrossEntropy(cache.logits, gold, scale, nullptr, &d_logits);
    network.BackwardFromLogits(inputs, cache, d_logits, Weights::kRaw,
                               &grads->parser, nullptr);
    return scale * loss;
  }

  // Run the tagger once over the distinct (sentence, token) pairs selected
  // by the batch.
  const Tagger &tagger = model.tagger();
  std::map<std::pair<int, int>, int> rows;
  FeatureInputs tagger_inputs = tagger.extractor().EmptyInputs();
  std::vector<std::array<int, kNumTokenTemplates>> template_rows;
  template_rows.reserve(batch.size());
  for (const ParserExample &example : batch) {
    std::array<int, kNumTokenTemplates> r;
    for (int i = 0; i < kNumTokenTemplates; ++i) {
      const int token = example.features.tokens[i];
      if (token == kNullToken) {
        r[i] = -1;
        continue;
      }
      auto [it, inserted] = rows.try_emplace({example.sentence, token},
                                             static_cast<int>(rows.size()));
      if (inserted) {
        tagger.extractor().Append(data.token_ids[example.sentence], token,
                                  &tagger_inputs);
      }
      r[i] = it->second;
    }
    template_rows.push_back(r);
  }
  const FeedForwardNetwork &tagger_network = tagger.network();
  ForwardCache tagger_cache;
  if (!rows.empty()) {
    tagger_cache.h0 = tagger_network.Embed(tagger_inputs, Weights::kRaw);
    tagger_cache.hidden = tagger_network.Hidden(
        tagger_cache.h0, Weights::kRaw, &tagger_cache.hidden_pre);
  }

  const Matrix &null_row = parser.null_row().value;
  const int width = parser.token_width();
  FeatureInputs inputs = parser.EmptyInputs();
  Matrix &dense = inputs[kImplicitGroup].rows;
  dense.resize(static_cast<Eigen::Index>(batch.size()) * kNumTokenTemplates,
               width);
  std::vector<int> &labels = inputs.back().ids;
  for (size_t b = 0; b < batch.size(); ++b) {
    for (int i = 0; i < kNumTokenTemplates; ++i) {
      const int r = template_rows[b][i];
      if (r < 0) {
        dense.row(b * kNumTokenTemplates + i) = null_row.row(0);
      } else {
        dense.row(b * kNumTokenTemplates + i) = tagger_cache.hidden.row(r);
      }
    }
    labels.insert(labels.end(), batch[b].features.labels.begin(),
                  batch[b].features.labels.end());
  }

  ForwardCache cache;
  network.Forward(inputs, Weights::kRaw, &cache);
  Matrix d_logits;
  const double loss =
      SoftmaxCrossEntropy(cache.logits, gold, scale, nullptr, &d_logits);
  std::vector<Matrix> input_grads;
  network.BackwardFromLogits(inputs, cache, d_logits, Weights::kRaw,
                             &grads->parser, &input_grads);

  const Matrix &d_dense = input_grads[kImplicitGroup];
  Matrix d_tagger_hidden = Matrix::Zero(static_cast<Eigen::Index>(rows.size()),
                                        width);
  for (size_t b = 0; b < batch.size(); ++b) {
    for (int i = 0; i < kNumTokenTemplates; ++i) {
      const int r = template_rows[b][i];
      const auto g = d_dense.row(b * kNumTokenTemplates + i);
      if (r < 0) {
        grads->null_row.row(0) += g;
      } else {
        d_tagger_hidden.row(r) += g;
      }
    }
  }
  if (!rows.empty() && model.config().backprop_into_tagger()) {
    tagger_network.BackwardFromHidden(tagger_inputs, tagger_cache,
                                      d_tagger_hidden, Weights::kRaw,
                                      &grads->tagger, nullptr);
  }
  return scale * loss;
}

void ApplyTaggerUpdate(StackedModel *model, const Gradients &grads,
                       const OptimizerConfig &config) {
  std::vector<ParameterBlock *> scope;
  std::vector<const Matrix *> g;
  std::vector<ParameterBlock> &blocks = model->tagger().network().blocks();
  for (size_t i = 0; i < blocks.size(); ++i) {
    scope.push_back(&blocks[i]);
    g.push_back(&grads.blocks[i]);
  }
  AsgdStep(scope, g, config);
}

void ApplyParserUpdate(StackedModel *model, const ParserGradients &grads,
                       const OptimizerConfig &tagger_config,
                       const OptimizerConfig &parser_config) {
  std::vector<ParameterBlock *> scope;
  std::vector<const Matrix *> g;
  std::vector<ParameterBlock> &blocks = model->parser().network().blocks();
  for (size_t i = 0; i < blocks.size(); ++i) {
    scope.push_back(&blocks[i]);
    g.push_back(&grads.parser.blocks[i]);
  }
  if (model->parser().input() == ParserInput::kImplicit) {
    scope.push_back(&model->parser().null_row());
    g.push_back(&grads.null_row);
  }
  AsgdStep(scope, g, parser_config);

  if (!model->config().backprop_into_tagger()) return;
  scope.clear();
  g.clear();
  FeedForwardNetwork &tagger = model->tagger().network();
  for (int i : tagger.RepresentationBlocks()) {
    scope.push_back(&tagger.blocks()[i]);
    g.push_back(&grads.tagger.blocks[i]);
  }
  AsgdStep(scope, g, tagger_config);
}

UpdateKind ChooseUpdate(int64_t tagger_remaining, int64_t parser_remaining,
                        double u) {
  if (tagger_remaining <= 0) return UpdateKind::kParser;
  if (parser_remaining <= 0) return UpdateKind::kTagger;
  const double p = static_cast<double>(tagger_remaining) /
                   static_cast<double>(tagger_remaining + parser_remaining);
  return u < p ? UpdateKind::kTagger : UpdateKind::kParser;
}

std::vector<Sentence> ParseCorpus(const StackedModel &model,
                                  const std::vector<Sentence> &sentences) {
  std::vector<Sentence> out = sentences;
  for (Sentence &sentence : out) {
    if (sentence.empty()) continue;
    const ParseResult result = model.Parse(sentence, Weights::kAveraged);
    model.Annotate(result, &sentence);
    // Otherwise the copied gold UPOS would be scored as a prediction.
    if (result.tags.empty()) {
      for (Token &token : sentence.tokens) token.pred_upos = "_";
    }
  }
  return out;
}

void RunSchedule(const TrainingConfig &config, const TrainingData &data,
                 const std::vector<Sentence> &dev, StackedModel *model,
                 TrainingReport *report, const TrainingLogger &log) {
  const TrainingSchedule &schedule = config.schedule;
  std::seed_seq seeds{static_cast<uint32_t>(config.seed),
                      static_cast<uint32_t>(config.seed >> 32), 0x5eedu};
  std::mt19937_64 rng(seeds);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);

  const bool tag_loss = model->config().tagger_supervised();
  const int64_t num_tag = static_cast<int64_t>(data.tagger_examples.size());
  const int64_t num_parse = static_cast<int64_t>(data.parser_examples.size());
  const int pretrain_epochs =
      tag_loss ? std::min(schedule.tagger_pretrain_epochs,
                          schedule.tagger_epochs)
               : 0;
  int64_t tagger_remaining =
      tag_loss ? (schedule.tagger_epochs - pretrain_epochs) * num_tag : 0;
  int64_t parser_remaining = schedule.parser_epochs * num_parse;

  ExampleStream tagger_stream(data.tagger_examples.size());
  ExampleStream parser_stream(data.parser_examples.size());
  Gradients tagger_grads = model->tagger().network().ZeroGradients();
  ParserGradients parser_grads = ZeroParserGradients(*model);

  auto tagger_update = [&](size_t max_size) {
    const std::vector<TaggerExample> batch = Gather(
        data.tagger_examples,
        tagger_stream.Next(max_size, &rng));
    tagger_grads.SetZero();
    TaggerBatchGradients(*model, data, batch,
                         schedule.lambda / static_cast<double>(batch.size()),
                         &tagger_grads);
    ApplyTaggerUpdate(model, tagger_grads, config.tagger_optimizer);
    ++report->tagger_updates;
    report->tagger_examples += static_cast<int64_t>(batch.size());
    return static_cast<int64_t>(batch.size());
  };

  for (int e = 0; e < pretrain_epochs && num_tag > 0; ++e) {
    int64_t left = num_tag;
    while (left > 0) {
      left -= tagger_update(std::min<int64_t>(
          config.tagger_optimizer.batch_size, left));
    }
    Log(log, "pretrain_epoch=" + std::to_string(e + 1));
  }

  StackedModel best;
  bool have_best = false;
  int since_best = 0;
  int parser_epoch = 0;
  while (tagger_remaining + parser_remaining > 0) {
    const UpdateKind kind =
        ChooseUpdate(tagger_remaining, parser_remaining, uniform(rng));
    if (kind == UpdateKind::kTagger) {
      tagger_remaining -= tagger_update(std::min<int64_t>(
          config.tagger_optimizer.batch_size, tagger_remaining));
      continue;
    }
    const std::vector<ParserExample> batch = Gather(
        data.parser_examples,
        parser_stream.Next(std::min<int64_t>(config.parser_optimizer.batch_size,
                                             parser_remaining),
                           &rng));
    parser_grads.parser.SetZero();
    parser_grads.null_row.setZero();
    parser_grads.tagger.SetZero();
    ParserBatchGradients(*model, data, batch,
                         1.0 / static_cast<double>(batch.size()),
                         &parser_grads);
    ApplyParserUpdate(model, parser_grads, config.tagger_optimizer,
                      config.parser_optimizer);
    ++report->parser_updates;
    report->parser_examples += static_cast<int64_t>(batch.size());
    parser_remaining -= static_cast<int64_t>(batch.size());
    if (!parser_stream.AtEpochEnd()) continue;

    ++parser_epoch;
    EpochRecord record;
    record.epoch = parser_epoch;
    record.tagger_examples = report->tagger_examples;
    record.parser_examples = report->parser_examples;
    std::string line = "epoch=" + std::to_string(parser_epoch) +
                       " tagger_examples=" +
                       std::to_string(report->tagger_examples) +
                       " parser_examples=" +
                       std::to_string(report->parser_examples);
    if (!dev.empty()) {
      const EvalReport scores = AttachmentScores(dev, ParseCorpus(*model, dev));
      record.dev_uas = scores.uas;
      record.dev_las = scores.las;
      record.dev_pos = scores.pos_acc;
      line += " dev_uas=" + FormatScore(scores.uas) +
              " dev_las=" + FormatScore(scores.las);
      if (scores.pos_acc) line += " dev_pos=" + FormatScore(*scores.pos_acc);
    }
    report->epochs.push_back(record);
    Log(log, line);
    if (dev.empty()) continue;
    // Ties on UAS fall back to LAS.
    if (!have_best || record.dev_uas > report->best_dev_uas ||
        (record.dev_uas == report->best_dev_uas &&
         record.dev_las > report->best_dev_las)) {
      best = *model;
      have_best = true;
      report->best_dev_uas = record.dev_uas;
      report->best_dev_las = record.dev_las;
      report->best_epoch = parser_epoch;
      since_best = 0;
    } else if (++since_best >= schedule.patience) {
      report->stopped_early = true;
      Log(log, "early_stop=1 best_epoch=" + std::to_string(report->best_epoch));
      break;
    }
  }
  if (have_best) *model = std::move(best);
}

StackedModel Train(const TrainingConfig &config,
                   const std::vector<Sentence> &train,
                   const std::vector<Sentence> &dev, TrainingReport *report,
                   const TrainingLogger &log) {
  config.Validate();
  TrainingReport local;
  if (report == nullptr) report = &local;
  *report = TrainingReport();

  StackedModel model = StackedModel::Build(config.model, train);
  model.Initialize(config.seed);
  if (!config.embeddings.empty()) {
    std::ifstream in(config.embeddings);
    if (!in) throw UsageError("cannot read embeddings " + config.embeddings);
    const EmbeddingCoverage coverage = model.LoadPretrainedWords(&in);
    Log(log, "embeddings=" + config.embeddings +
                 " file_words=" + std::to_string(coverage.file_words) +
                 " dim=" + std::to_string(coverage.file_dim) +
                 " matched=" + std::to_string(coverage.matched) + "/" +
                 std::to_string(coverage.vocab_words) +
                 " applied=" + (coverage.applied ? "1" : "0"));
  }

  TrainingData data = PrepareTrainingData(model, train, log);
  report->skipped = data.skipped;
  report->projectivized = data.projectivized;
  Log(log, "mode=" + std::string(TrainingModeName(config.model.mode)) +
               " sentences=" + std::to_string(train.size()) +
               " tagger_examples=" +
               std::to_string(data.tagger_examples.size()) +
               " parser_examples=" +
               std::to_string(data.parser_examples.size()) +
               " skipped=" + std::to_string(data.skipped) +
               " projectivized=" + std::to_string(data.projectivized) +
               " parameters=" + std::to_string(model.NumParameters()));

  if (config.model.mode == TrainingMode::kPipeline) {
    JackknifeResult jackknife =
        JackknifeTags(config, train, model.vocab().tags, false, log);
    data.tag_distributions = std::move(jackknife.distributions);
  }
  RunSchedule(config, data, dev, &model, report, log);
  return model;
}

std::vector<Fold> ContiguousFolds(int n, int k) {
  if (k < 2) throw UsageError("jackknifing needs at least 2 folds");
  if (n < k) {
    throw DataError("corpus has " + std::to_string(n) +
                    " sentences, fewer than " + std::to_string(k) + " folds");
  }
  std::vector<Fold> folds;
  const int base = n / k;
  const int extra = n % k;
  int begin = 0;
  for (int f = 0; f < k; ++f) {
    const int size = base + (f < extra ? 1 : 0);
    folds.push_back({begin, begin + size});
    begin += size;
  }
  return folds;
}

JackknifeResult JackknifeTags(const TrainingConfig &config,
                              const std::vector<Sentence> &train,
                              const Vocabulary &tags, bool keep_models,
                              const TrainingLogger &log) {
  JackknifeResult result;
  result.folds =
      ContiguousFolds(static_cast<int>(train.size()), config.jackknife_folds);
  result.distributions.resize(train.size());

  TrainingConfig fold_config = config;
  fold_config.model.mode = TrainingMode::kStackprop;
  fold_config.schedule.parser_epochs = 0;
  for (size_t f = 0; f < result.folds.size(); ++f) {
    const Fold &fold = result.folds[f];
    std::vector<Sentence> rest = Slice(train, 0, fold.begin);
    const std::vector<Sentence> after =
        Slice(train, fold.end, static_cast<int>(train.size()));
    rest.insert(rest.end(), after.begin(), after.end());

    fold_config.seed = config.seed + 1000003ull * (f + 1);
    StackedModel fold_model = StackedModel::Build(fold_config.model, rest);
    fold_model.Initialize(fold_config.seed);
    TrainingData data;
    for (size_t s = 0; s < rest.size(); ++s) {
      data.token_ids.push_back(fold_model.TokenIds(rest[s]));
      for (const Token &token : rest[s].tokens) {
        const int tag = fold_model.vocab().tags.Lookup(token.upos);
        if (tag >= 0) {
          data.tagger_examples.push_back(
              {static_cast<int>(s), token.index, tag});
        }
      }
    }
    TrainingReport fold_report;
    RunSchedule(fold_config, data, {}, &fold_model, &fold_report, {});

    // Map the fold's tag ids onto `tags`; tags unseen in the training folds
    // get probability 0.
    const Vocabulary &fold_tags = fold_model.vocab().tags;
    int correct = 0;
    int total = 0;
    for (int s = fold.begin; s < fold.end; ++s) {
      const Sentence &sentence = train[s];
      Matrix dist = Matrix::Zero(sentence.size(), tags.size());
      if (!sentence.empty()) {
        const TaggerActivations act =
            fold_model.Activations(sentence, Weights::kAveraged, true);
        for (int t = 0; t < fold_tags.size(); ++t) {
          const int id = tags.Lookup(fold_tags.Name(t));
          if (id >= 0) dist.col(id) += act.probabilities.col(t);
        }
        for (int i = 0; i < sentence.size(); ++i) {
          ++total;
          if (tags.Name(ArgMax(dist.row(i))) == sentence.tokens[i].upos) {
            ++correct;
          }
        }
      }
      result.distributions[s] = std::move(dist);
    }
    Log(log, "jackknife_fold=" + std::to_string(f + 1) +
                 " sentences=" + std::to_string(fold.end - fold.begin) +
                 " tag_accuracy=" +
                 FormatScore(total ? static_cast<double>(correct) / total
                                   : 0.0));
    if (keep_models) result.fold_models.push_back(std::move(fold_model));
  }
  return result;
}

}  // namespace stackprop
