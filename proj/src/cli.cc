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

#include "stackprop/cli.h"

#include <chrono>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "stackprop/corpus.h"
#include "stackprop/errors.h"
#include "stackprop/evaluator.h"
#include "stackprop/model.h"
#include "stackprop/model_io.h"
#include "stackprop/synthetic_treebank.h"
#include "stackprop/trainer.h"
#include "stackprop/training_config.h"
#include "stackprop/unicode_text.h"

namespace stackprop {

namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

struct GlobalFlags {
  std::string config;
  std::string seed;
  int threads = 1;
};

// Training config keys exposed as flags. `values` is keyed by config key.
struct ConfigFlags {
  std::map<std::string, std::string> values;
  std::map<std::string, CLI::Option *> options;

  void Register(CLI::App *app) {
    for (const std::string &key : TrainingConfigKeys()) {
      if (key == "seed") continue;  // global flag
      std::string &slot = values[key];
      if (key == "swap") {
        options[key] = app->add_flag("--swap{true}", slot,
                                     "Enable the SWAP transition");
      } else {
        options[key] =
            app->add_option("--" + key, slot, "Training config: " + key);
      }
    }
  }

  void Apply(TrainingConfig *config) const {
    for (const auto &[key, option] : options) {
      if (option->count() > 0) config->Set(key, values.at(key));
    }
  }
};

// Input/output streams that may be files or the standard streams.
class InputFile {
 public:
  InputFile(const std::string &path, std::istream &fallback) {
    if (path.empty() || path == "-") {
      stream_ = &fallback;
      return;
    }
    if (!std::filesystem::exists(path)) {
      throw UsageError("no such file: " + path);
    }
    file_ = std::make_unique<std::ifstream>(path, std::ios::binary);
    if (!*file_) throw UsageError("cannot read " + path);
    stream_ = file_.get();
  }
  std::istream &get() { return *stream_; }

 private:
  std::unique_ptr<std::ifstream> file_;
  std::istream *stream_ = nullptr;
};

class OutputFile {
 public:
  OutputFile(const std::string &path, std::ostream &fallback) {
    if (path.empty() || path == "-") {
      stream_ = &fallback;
      return;
    }
    file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
    if (!*file_) throw UsageError("cannot write " + path);
    stream_ = file_.get();
  }
  std::ostream &get() { return *stream_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream *stream_ = nullptr;
};

std::string ReadFileBytes(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::vector<Sentence> ReadCorpus(const std::string &path, bool validate) {
  if (!std::filesystem::exists(path)) {
    throw UsageError("no such file: " + path);
  }
  return ParseConllu(ReadFileBytes(path), validate);
}

std::string Fixed(double v, int digits = 4) {
  std::ostringstream out;
  out.setf(std::ios::fixed);
  out.precision(digits);
  out << v;
  return out.str();
}

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

// Runs `work(i)` for i in [0, n) on `threads` workers; the first exception
// is rethrown.
void ParallelFor(int n, int threads, const std::function<void(int)> &work) {
  if (threads <= 1 || n <= 1) {
    for (int i = 0; i < n; ++i) work(i);
    return;
  }
  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (int i = t; i < n; i += threads) work(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (std::thread &thread : pool) thread.join();
  for (const std::exception_ptr &error : errors) {
    if (error) std::rethrow_exception(error);
  }
}

void WarnOnLexiconMismatch(const StackedModel &model,
                           const std::vector<Sentence> &chunk,
                           std::ostream &err) {
  int tokens = 0;
  int unknown = 0;
  for (const Sentence &sentence : chunk) {
    for (const Token &token : sentence.tokens) {
      ++tokens;
      if (model.vocab().forms.Lookup(Lowercase(token.form)) ==
          Vocabulary::kUnknownId) {
        ++unknown;
      }
    }
  }
  if (tokens > 0 && unknown * 2 > tokens) {
    err << "warning=lexicon_mismatch unknown_forms=" << unknown << "/"
        << tokens << " (input looks unlike the training data; unseen words "
        << "map to UNKNOWN)\n";
  }
}

TrainingConfig ResolveConfig(const GlobalFlags &global,
                             const ConfigFlags &flags,
                             const json *manifest) {
  TrainingConfig config;
  if (manifest != nullptr) {
    for (const auto &[key, value] : manifest->at("config").items()) {
      config.Set(key, value.get<std::string>());
    }
  }
  if (!global.config.empty()) config.MergeFile(global.config);
  flags.Apply(&config);
  if (!global.seed.empty()) config.Set("seed", global.seed);
  config.Validate();
  return config;
}

json CorpusJson(const std::string &path) {
  if (path.empty()) return nullptr;
  return {{"path", path}, {"digest", ContentDigest(ReadFileBytes(path))}};
}

int CmdTrain(const GlobalFlags &global, const ConfigFlags &flags,
             std::string train_path, std::string dev_path,
             std::string model_path, const std::string &manifest_path,
             std::ostream &err) {
  json manifest;
  bool replay = false;
  if (!manifest_path.empty()) {
    try {
      manifest = json::parse(ReadFileBytes(manifest_path));
      manifest.at("config");
    } catch (const json::exception &e) {
      throw UsageError("bad manifest " + manifest_path + ": " + e.what());
    }
    replay = true;
    if (train_path.empty()) train_path = manifest.at("train").at("path");
    if (dev_path.empty() && manifest.at("dev").is_object()) {
      dev_path = manifest.at("dev").at("path");
    }
    if (model_path.empty()) model_path = manifest.at("model").at("path");
  }
  if (train_path.empty()) throw UsageError("train needs --train");
  if (model_path.empty()) throw UsageError("train needs --model");
  const TrainingConfig config =
      ResolveConfig(global, flags, replay ? &manifest : nullptr);

  const std::vector<Sentence> train = ReadCorpus(train_path, true);
  std::vector<Sentence> dev;
  if (!dev_path.empty()) dev = ReadCorpus(dev_path, true);
  json record;
  record["train"] = CorpusJson(train_path);
  record["dev"] = CorpusJson(dev_path);
  if (replay && manifest.at("train").at("digest") != record["train"]["digest"]) {
    err << "warning=manifest_corpus_changed path=" << train_path << "\n";
  }

  const auto start = Clock::now();
  TrainingReport report;
  const StackedModel model =
      Train(config, train, dev, &report,
            [&err](const std::string &line) { err << line << "\n"; });
  const double seconds = Seconds(start);
  const std::string bytes = SerializeModel(model);
  {
    std::ofstream out(model_path, std::ios::binary | std::ios::trunc);
    if (!out) throw UsageError("cannot write " + model_path);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  }
  const std::string digest = ContentDigest(bytes);

  json config_json = json::object();
  for (const auto &[key, value] : config.KeyValues()) config_json[key] = value;
  record["config"] = config_json;
  record["seed"] = config.seed;
  record["model"] = {{"path", model_path},
                     {"digest", digest},
                     {"parameters", model.NumParameters()}};
  record["timing"] = {{"train_seconds", seconds}};
  json epochs = json::array();
  for (const EpochRecord &epoch : report.epochs) {
    epochs.push_back({{"epoch", epoch.epoch},
                      {"dev_uas", epoch.dev_uas},
                      {"dev_las", epoch.dev_las}});
  }
  record["report"] = {{"epochs", epochs},
                      {"best_epoch", report.best_epoch},
                      {"stopped_early", report.stopped_early},
                      {"skipped", report.skipped},
                      {"projectivized", report.projectivized}};
  const std::string written_manifest = model_path + ".manifest.json";
  {
    std::ofstream out(written_manifest, std::ios::trunc);
    if (!out) throw UsageError("cannot write " + written_manifest);
    out << record.dump(2) << "\n";
  }
  err << "model=" << model_path << " digest=" << digest
      << " parameters=" << model.NumParameters() << " seconds=" << Fixed(seconds, 2)
      << "\n";
  if (replay) {
    const bool match = manifest.at("model").at("digest") == digest;
    err << "replay_digest_match=" << (match ? 1 : 0) << "\n";
  }
  return kExitOk;
}

// Streams sentence blocks through `process` in chunks and writes them in
// input order.
template <typename Process>
void StreamCorpus(std::istream &input, int threads, std::ostream &err,
                  const StackedModel &model, Process process) {
  ConlluReader reader(&input, false);
  const int chunk_size = 64 * std::max(1, threads);
  bool checked = false;
  while (true) {
    std::vector<Sentence> chunk;
    Sentence sentence;
    while (static_cast<int>(chunk.size()) < chunk_size &&
           reader.Next(&sentence)) {
      chunk.push_back(std::move(sentence));
      sentence = Sentence();
    }
    if (chunk.empty()) break;
    if (!checked) {
      WarnOnLexiconMismatch(model, chunk, err);
      checked = true;
    }
    process(&chunk);
    if (static_cast<int>(chunk.size()) < chunk_size) break;
  }
}

int CmdParse(const GlobalFlags &global, const std::string &model_path,
             const std::string &input_path, const std::string &output_path,
             const std::string &activations_path, std::istream &in,
             std::ostream &out, std::ostream &err) {
  const StackedModel model = LoadModel(model_path);
  InputFile input(input_path, in);
  OutputFile output(output_path, out);
  std::unique_ptr<OutputFile> activations;
  if (!activations_path.empty()) {
    activations = std::make_unique<OutputFile>(activations_path, out);
  }
  const auto start = Clock::now();
  int64_t sentences = 0;
  int64_t evaluations = 0;
  StreamCorpus(input.get(), global.threads, err, model,
               [&](std::vector<Sentence> *chunk) {
    const int n = static_cast<int>(chunk->size());
    std::vector<int64_t> counts(n, 0);
    std::vector<std::string> dumps(n);
    ParallelFor(n, global.threads, [&](int i) {
      Sentence &sentence = (*chunk)[i];
      if (sentence.empty()) return;
      ParseResult result = model.Parse(sentence, Weights::kAveraged);
      counts[i] = result.tagger_evaluations + result.parser_evaluations;
      if (!model.config().joint()) result.tags.clear();
      model.Annotate(result, &sentence);
      if (activations) {
        const Matrix hidden =
            model.Activations(sentence, Weights::kAveraged, false).hidden;
        std::ostringstream dump;
        dump.precision(9);
        for (int t = 0; t < sentence.size(); ++t) {
          dump << sentence.id << '\t' << t + 1 << '\t'
               << sentence.tokens[t].form;
          for (Eigen::Index k = 0; k < hidden.cols(); ++k) {
            dump << '\t' << hidden(t, k);
          }
          dump << '\n';
        }
        dumps[i] = dump.str();
      }
    });
    for (int i = 0; i < n; ++i) {
      WriteConllu((*chunk)[i], !(*chunk)[i].empty(), &output.get());
      if (activations) activations->get() << dumps[i];
      evaluations += counts[i];
    }
    sentences += n;
  });
  output.get().flush();
  const double seconds = std::max(Seconds(start), 1e-9);
  err << "sentences=" << sentences << " evaluations=" << evaluations
      << " seconds=" << Fixed(seconds, 3)
      << " sentences_per_sec=" << Fixed(sentences / seconds, 1)
      << " evaluations_per_sec=" << Fixed(evaluations / seconds, 1) << "\n";
  return kExitOk;
}

int CmdTag(const GlobalFlags &global, const std::string &model_path,
           const std::string &input_path, const std::string &output_path,
           std::istream &in, std::ostream &out, std::ostream &err) {
  const StackedModel model = LoadModel(model_path);
  InputFile input(input_path, in);
  OutputFile output(output_path, out);
  StreamCorpus(input.get(), global.threads, err, model,
               [&](std::vector<Sentence> *chunk) {
    ParallelFor(static_cast<int>(chunk->size()), global.threads, [&](int i) {
      Sentence &sentence = (*chunk)[i];
      const std::vector<int> tags = model.Tag(sentence, Weights::kAveraged);
      for (Token &token : sentence.tokens) {
        token.upos = model.vocab().tags.Name(tags[token.index - 1]);
      }
    });
    for (const Sentence &sentence : *chunk) {
      WriteConllu(sentence, false, &output.get());
    }
  });
  output.get().flush();
  return kExitOk;
}

int CmdEval(const std::string &gold_path, const std::string &system_path,
            const std::string &reference_path, const std::string &compare_path,
            bool exclude_punct, bool key_values, std::ostream &out) {
  const std::vector<Sentence> gold = ReadCorpus(gold_path, false);
  const std::vector<Sentence> system = ReadCorpus(system_path, false);
  const EvalReport report = AttachmentScores(gold, system, !exclude_punct);
  auto row = [&out](const std::string &name, const std::string &value) {
    out << std::left << std::setw(24) << name << value << "\n";
  };
  row("metric", "value");
  row("UAS", Fixed(report.uas));
  row("LAS", Fixed(report.las));
  row("POS", report.pos_acc ? Fixed(*report.pos_acc) : "n/a");
  row("tokens", std::to_string(report.n_tokens));
  row("sentences", std::to_string(report.sentences.size()));
  std::vector<std::pair<std::string, std::string>> kv = {
      {"uas", Fixed(report.uas, 6)},
      {"las", Fixed(report.las, 6)},
      {"pos", report.pos_acc ? Fixed(*report.pos_acc, 6) : "n/a"},
      {"tokens", std::to_string(report.n_tokens)},
  };
  if (!reference_path.empty()) {
    const std::vector<Sentence> reference = ReadCorpus(reference_path, false);
    const CascadeBreakdown breakdown =
        ComputeCascadeBreakdown(gold, system, reference, !exclude_punct);
    const std::string on_errors = breakdown.las_on_tagger_errors
                                      ? Fixed(*breakdown.las_on_tagger_errors)
                                      : "n/a";
    const std::string on_rest =
        breakdown.las_on_rest ? Fixed(*breakdown.las_on_rest) : "n/a";
    row("LAS on tag errors", on_errors);
    row("LAS on rest", on_rest);
    row("tag error tokens", std::to_string(breakdown.error_tokens));
    kv.push_back({"las_tag_errors", on_errors});
    kv.push_back({"las_rest", on_rest});
    kv.push_back({"tag_error_tokens", std::to_string(breakdown.error_tokens)});
  }
  if (!compare_path.empty()) {
    const std::vector<Sentence> other = ReadCorpus(compare_path, false);
    const EvalReport other_report =
        AttachmentScores(gold, other, !exclude_punct);
    const TTestResult test = PairedSignificance(report, other_report);
    row("LAS (compared)", Fixed(other_report.las));
    row("paired t", Fixed(test.t));
    row("p-value", Fixed(test.p, 6));
    kv.push_back({"compare_las", Fixed(other_report.las, 6)});
    kv.push_back({"t", Fixed(test.t, 6)});
    kv.push_back({"p", Fixed(test.p, 6)});
  }
  if (key_values) {
    for (const auto &[key, value] : kv) out << key << "=" << value << "\n";
  }
  return kExitOk;
}

int CmdJackknife(const GlobalFlags &global, const ConfigFlags &flags,
                 const std::string &train_path, const std::string &output_path,
                 const std::string &model_prefix, std::ostream &out,
                 std::ostream &err) {
  if (train_path.empty()) throw UsageError("jackknife needs --train");
  const TrainingConfig config = ResolveConfig(global, flags, nullptr);
  std::vector<Sentence> train = ReadCorpus(train_path, true);
  const Vocabulary tags = BuildCorpusVocab(train).tags;
  JackknifeResult result =
      JackknifeTags(config, train, tags, !model_prefix.empty(),
                    [&err](const std::string &line) { err << line << "\n"; });
  for (size_t f = 0; f < result.fold_models.size(); ++f) {
    const std::string path =
        model_prefix + ".fold" + std::to_string(f + 1) + ".model";
    SaveModel(result.fold_models[f], path);
    err << "fold_model=" << path << "\n";
  }
  for (size_t s = 0; s < train.size(); ++s) {
    for (Token &token : train[s].tokens) {
      token.upos = tags.Name(ArgMax(result.distributions[s].row(token.index - 1)));
    }
  }
  OutputFile output(output_path, out);
  for (const Sentence &sentence : train) {
    WriteConllu(sentence, false, &output.get());
  }
  return kExitOk;
}

std::string Context(const Sentence &sentence, int token) {
  std::string out;
  for (int t = std::max(1, token - 3); t <= std::min(sentence.size(), token + 3);
       ++t) {
    if (!out.empty()) out += ' ';
    const std::string &form = sentence.token(t).form;
    out += t == token ? "[" + form + "]" : form;
  }
  return out;
}

int CmdNeighbors(const std::string &model_path, const std::string &corpus_path,
                 const std::string &sentence_key, int token, int k,
                 std::ostream &out) {
  const StackedModel model = LoadModel(model_path);
  const std::vector<Sentence> corpus = ReadCorpus(corpus_path, false);
  if (corpus.empty()) throw DataError("empty corpus " + corpus_path);
  int query = -1;
  for (size_t s = 0; s < corpus.size(); ++s) {
    if (corpus[s].id == sentence_key) query = static_cast<int>(s);
  }
  if (query < 0) {
    try {
      query = std::stoi(sentence_key) - 1;
    } catch (const std::exception &) {
      throw UsageError("unknown sentence '" + sentence_key + "'");
    }
  }
  if (query < 0 || query >= static_cast<int>(corpus.size())) {
    throw UsageError("sentence " + sentence_key + " out of range");
  }
  if (token < 1 || token > corpus[query].size()) {
    throw UsageError("token " + std::to_string(token) + " out of range");
  }
  const std::vector<Neighbor> neighbors =
      NearestNeighbors(model, corpus, query, token, k);
  out << "query\t" << corpus[query].id << '\t' << token << '\t'
      << Context(corpus[query], token) << "\n";
  int rank = 0;
  for (const Neighbor &n : neighbors) {
    out << ++rank << '\t' << Fixed(n.similarity) << '\t'
        << corpus[n.sentence].id << '\t' << n.token << '\t'
        << Context(corpus[n.sentence], n.token) << "\n";
  }
  return kExitOk;
}

int CmdInspect(const std::string &model_path, std::ostream &out) {
  const StackedModel model = LoadModel(model_path);
  const ModelConfig &config = model.config();
  out << "format_version = " << kModelFormatVersion << "\n";
  out << "mode = " << TrainingModeName(config.mode) << "\n";
  out << "swap = " << (config.swap ? "true" : "false") << "\n";
  out << "vocab.forms = " << model.vocab().forms.size() << "\n";
  out << "vocab.affixes = " << model.affixes().size() << "\n";
  out << "vocab.tags = " << model.vocab().tags.size() << "\n";
  out << "vocab.labels = " << model.vocab().labels.size() << "\n";
  out << "actions = " << model.parser().actions().size() << "\n";
  out << "tagger.input_width = " << model.tagger().network().input_dim()
      << "\n";
  out << "tagger.hidden = " << model.tagger().hidden_dim() << "\n";
  out << "parser.input_width = " << model.parser().network().input_dim()
      << "\n";
  out << "parser.hidden = " << model.parser().network().hidden_dim() << "\n";
  for (const auto &[name, block] : model.Blocks()) {
    out << "block " << name << " " << block->value.rows() << "x"
        << block->value.cols() << " steps=" << block->steps << "\n";
  }
  out << "parameters.tagger = " << model.tagger().network().NumParameters()
      << "\n";
  out << "parameters.parser = " << model.parser().NumParameters() << "\n";
  out << "parameters.total = " << model.NumParameters() << "\n";
  return kExitOk;
}

int CmdGenerate(const GlobalFlags &global, int sentences, double nonprojective,
                double invented, const std::string &output_path,
                std::ostream &out) {
  SyntheticTreebankOptions options;
  options.num_sentences = sentences;
  options.nonprojective_rate = nonprojective;
  options.invented_word_rate = invented;
  if (!global.seed.empty()) {
    try {
      options.seed = std::stoull(global.seed);
    } catch (const std::exception &) {
      throw UsageError("bad --seed " + global.seed);
    }
  }
  OutputFile output(output_path, out);
  for (const Sentence &sentence : GenerateSyntheticTreebank(options)) {
    WriteConllu(sentence, false, &output.get());
  }
  return kExitOk;
}

}  // namespace

int RunCli(const std::vector<std::string> &args, std::istream &in,
           std::ostream &out, std::ostream &err) {
  CLI::App app{"Stack-propagation POS tagger and dependency parser",
               "stackprop"};
  app.require_subcommand(1);
  app.fallthrough();
  GlobalFlags global;
  app.add_option("--config", global.config, "Training config file");
  app.add_option("--seed", global.seed, "Random seed");
  app.add_option("--threads", global.threads, "Worker threads")
      ->check(CLI::PositiveNumber);

  std::string train_path, dev_path, model_path, manifest_path;
  ConfigFlags train_flags;
  CLI::App *train = app.add_subcommand("train", "Train a model");
  train->add_option("--train", train_path, "Training CoNLL-U");
  train->add_option("--dev", dev_path, "Development CoNLL-U");
  train->add_option("--model", model_path, "Output model file");
  train->add_option("--manifest", manifest_path,
                    "Replay the run recorded in a manifest");
  train_flags.Register(train);

  std::string input_path = "-", output_path = "-", activations_path;
  CLI::App *parse = app.add_subcommand("parse", "Parse CoNLL-U");
  parse->add_option("--model", model_path)->required();
  parse->add_option("--input", input_path, "Input CoNLL-U (- for stdin)");
  parse->add_option("--output", output_path, "Output CoNLL-U (- for stdout)");
  parse->add_option("--emit-activations", activations_path,
                    "Write tagger activations as TSV");

  CLI::App *tag = app.add_subcommand("tag", "POS-tag CoNLL-U");
  tag->add_option("--model", model_path)->required();
  tag->add_option("--input", input_path);
  tag->add_option("--output", output_path);

  std::string gold_path, system_path, reference_path, compare_path;
  bool exclude_punct = false, key_values = false;
  CLI::App *eval = app.add_subcommand("eval", "Score a parse");
  eval->add_option("--gold", gold_path)->required();
  eval->add_option("--system", system_path)->required();
  eval->add_option("--reference", reference_path,
                   "Reference tagging for the cascade breakdown");
  eval->add_option("--compare", compare_path,
                   "Second system for a paired t-test");
  eval->add_flag("--exclude-punct", exclude_punct);
  eval->add_flag("--kv", key_values, "Also print key=value lines");

  std::string model_prefix;
  ConfigFlags jackknife_flags;
  CLI::App *jackknife =
      app.add_subcommand("jackknife", "Jackknife POS tags for a corpus");
  jackknife->add_option("--train", train_path)->required();
  jackknife->add_option("--output", output_path, "Tagged corpus");
  jackknife->add_option("--model-prefix", model_prefix,
                        "Write fold models as PREFIX.foldK.model");
  jackknife_flags.Register(jackknife);

  std::string corpus_path, sentence_key;
  int token = 1, k = 3;
  CLI::App *neighbors =
      app.add_subcommand("neighbors", "Nearest tokens by tagger activation");
  neighbors->add_option("--model", model_path)->required();
  neighbors->add_option("--corpus", corpus_path)->required();
  neighbors->add_option("--sentence", sentence_key,
                        "Sentence id or 1-based index")
      ->required();
  neighbors->add_option("--token", token)->required();
  neighbors->add_option("--k", k);

  CLI::App *inspect = app.add_subcommand("inspect-model", "Describe a model");
  inspect->add_option("--model", model_path)->required();

  int sentences = 1000;
  double nonprojective = 0.0, invented = 0.15;
  CLI::App *generate =
      app.add_subcommand("generate", "Write a synthetic treebank");
  generate->add_option("--sentences", sentences);
  generate->add_option("--nonprojective-rate", nonprojective);
  generate->add_option("--invented-rate", invented);
  generate->add_option("--output", output_path);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (train->parsed()) {
      return CmdTrain(global, train_flags, train_path, dev_path, model_path,
                      manifest_path, err);
    }
    if (parse->parsed()) {
      return CmdParse(global, model_path, input_path, output_path,
                      activations_path, in, out, err);
    }
    if (tag->parsed()) {
      return CmdTag(global, model_path, input_path, output_path, in, out, err);
    }
    if (eval->parsed()) {
      return CmdEval(gold_path, system_path, reference_path, compare_path,
                     exclude_punct, key_values, out);
    }
    if (jackknife->parsed()) {
      return CmdJackknife(global, jackknife_flags, train_path, output_path,
                          model_prefix, out, err);
    }
    if (neighbors->parsed()) {
      return CmdNeighbors(model_path, corpus_path, sentence_key, token, k, out);
    }
    if (inspect->parsed()) return CmdInspect(model_path, out);
    if (generate->parsed()) {
      return CmdGenerate(global, sentences, nonprojective, invented,
                         output_path, out);
    }
  } catch (const UsageError &e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ModelError &e) {
    err << "error: " << e.what() << "\n";
    return kExitModel;
  } catch (const Error &e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception &e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace stackprop
