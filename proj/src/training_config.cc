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

#include "stackprop/training_config.h"

#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>

#include "stackprop/errors.h"

namespace stackprop {

namespace {

std::string Trim(const std::string &s) {
  const size_t begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const size_t end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

template <typename T>
T ParseNumber(const std::string &key, const std::string &value) {
  T out{};
  const char *first = value.data();
  const char *last = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc() || ptr != last) {
    throw UsageError("bad value '" + value + "' for " + key);
  }
  return out;
}

template <>
double ParseNumber<double>(const std::string &key, const std::string &value) {
  // from_chars for double is missing in older libstdc++.
  try {
    size_t used = 0;
    const double out = std::stod(value, &used);
    if (used == value.size()) return out;
  } catch (const std::exception &) {
  }
  throw UsageError("bad value '" + value + "' for " + key);
}

bool ParseBool(const std::string &key, const std::string &value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw UsageError("bad value '" + value + "' for " + key);
}

std::string Format(double v) {
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

struct Field {
  const char *key;
  std::function<void(TrainingConfig *, const std::string &, const std::string &)>
      set;
  std::function<std::string(const TrainingConfig &)> get;
};

#define INT_FIELD(name, expr)                                                 \
  Field {                                                                     \
    name,                                                                     \
        [](TrainingConfig *c, const std::string &k, const std::string &v) {   \
          c->expr = ParseNumber<int>(k, v);                                   \
        },                                                                    \
        [](const TrainingConfig &c) { return std::to_string(c.expr); }        \
  }

#define OPT_FIELDS(suffix, member, type, fmt)                                  \
  Field{"tagger." suffix,                                                      \
        [](TrainingConfig *c, const std::string &k, const std::string &v) {    \
          c->tagger_optimizer.member = ParseNumber<type>(k, v);                \
        },                                                                     \
        [](const TrainingConfig &c) { return fmt(c.tagger_optimizer.member); }}, \
      Field {                                                                  \
    "parser." suffix,                                                          \
        [](TrainingConfig *c, const std::string &k, const std::string &v) {    \
          c->parser_optimizer.member = ParseNumber<type>(k, v);                \
        },                                                                     \
        [](const TrainingConfig &c) { return fmt(c.parser_optimizer.member); } \
  }

std::string FormatInt(int64_t v) { return std::to_string(v); }

const std::vector<Field> &Fields() {
  static const std::vector<Field> kFields = {
      Field{"mode",
            [](TrainingConfig *c, const std::string &, const std::string &v) {
              c->model.mode = ParseTrainingMode(v);
            },
            [](const TrainingConfig &c) {
              return std::string(TrainingModeName(c.model.mode));
            }},
      Field{"swap",
            [](TrainingConfig *c, const std::string &k, const std::string &v) {
              c->model.swap = ParseBool(k, v);
            },
            [](const TrainingConfig &c) {
              return std::string(c.model.swap ? "true" : "false");
            }},
      INT_FIELD("parser_epochs", schedule.parser_epochs),
      INT_FIELD("tagger_epochs", schedule.tagger_epochs),
      INT_FIELD("pretrain_epochs", schedule.tagger_pretrain_epochs),
      Field{"lambda",
            [](TrainingConfig *c, const std::string &k, const std::string &v) {
              c->schedule.lambda = ParseNumber<double>(k, v);
            },
            [](const TrainingConfig &c) { return Format(c.schedule.lambda); }},
      INT_FIELD("patience", schedule.patience),
      OPT_FIELDS("eta0", learning_rate, double, Format),
      OPT_FIELDS("gamma", decay_steps, double, Format),
      OPT_FIELDS("mu", momentum, double, Format),
      OPT_FIELDS("batch_size", batch_size, int, FormatInt),
      OPT_FIELDS("averaging_start", averaging_start, int64_t, FormatInt),
      Field{"seed",
            [](TrainingConfig *c, const std::string &k, const std::string &v) {
              c->seed = ParseNumber<uint64_t>(k, v);
            },
            [](const TrainingConfig &c) { return std::to_string(c.seed); }},
      INT_FIELD("jackknife_folds", jackknife_folds),
      Field{"embeddings",
            [](TrainingConfig *c, const std::string &, const std::string &v) {
              c->embeddings = v;
            },
            [](const TrainingConfig &c) { return c.embeddings; }},
      INT_FIELD("tagger_hidden", model.dims.tagger_hidden),
      INT_FIELD("symbol_dim", model.dims.tagger_features.symbol_dim),
      INT_FIELD("capitalization_dim",
                model.dims.tagger_features.capitalization_dim),
      INT_FIELD("affix_dim", model.dims.tagger_features.affix_dim),
      INT_FIELD("word_dim", model.dims.tagger_features.word_dim),
      INT_FIELD("parser_hidden", model.dims.parser.hidden_dim),
      INT_FIELD("implicit_dim", model.dims.parser.implicit_dim),
      INT_FIELD("label_dim", model.dims.parser.label_dim),
      INT_FIELD("pipeline_word_dim", model.dims.parser.word_dim),
  };
  return kFields;
}

#undef INT_FIELD
#undef OPT_FIELDS

const Field *FindField(const std::string &key) {
  for (const Field &field : Fields()) {
    if (key == field.key) return &field;
  }
  return nullptr;
}

}  // namespace

void TrainingConfig::Set(const std::string &key, const std::string &value) {
  if (const Field *field = FindField(key)) {
    field->set(this, key, value);
    return;
  }
  const Field *tagger = FindField("tagger." + key);
  const Field *parser = FindField("parser." + key);
  if (tagger != nullptr && parser != nullptr) {
    tagger->set(this, key, value);
    parser->set(this, key, value);
    return;
  }
  throw UsageError("unknown config key '" + key + "'");
}

void TrainingConfig::MergeText(const std::string &text) {
  std::istringstream in(text);
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = Trim(line);
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw UsageError("config line " + std::to_string(number) +
                       ": expected key = value");
    }
    try {
      Set(Trim(line.substr(0, eq)), Trim(line.substr(eq + 1)));
    } catch (const UsageError &e) {
      throw UsageError("config line " + std::to_string(number) + ": " +
                       e.what());
    }
  }
}

void TrainingConfig::MergeFile(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file " + path);
  std::ostringstream text;
  text << in.rdbuf();
  MergeText(text.str());
}

std::vector<std::pair<std::string, std::string>> TrainingConfig::KeyValues()
    const {
  std::vector<std::pair<std::string, std::string>> out;
  for (const Field &field : Fields()) {
    out.emplace_back(field.key, field.get(*this));
  }
  return out;
}

std::string TrainingConfig::ToText() const {
  std::string out;
  for (const auto &[key, value] : KeyValues()) {
    out += key + " = " + value + "\n";
  }
  return out;
}

void TrainingConfig::Validate() const {
  tagger_optimizer.Validate();
  parser_optimizer.Validate();
  if (schedule.parser_epochs < 0 || schedule.tagger_epochs < 0 ||
      schedule.tagger_pretrain_epochs < 0) {
    throw UsageError("epoch counts must be >= 0");
  }
  if (schedule.tagger_pretrain_epochs > schedule.tagger_epochs &&
      schedule.tagger_epochs > 0) {
    throw UsageError("pretrain_epochs cannot exceed tagger_epochs");
  }
  if (!(schedule.lambda > 0.0)) throw UsageError("lambda must be positive");
  if (schedule.patience < 1) throw UsageError("patience must be >= 1");
  if (jackknife_folds < 2) throw UsageError("jackknife_folds must be >= 2");
  const ModelDims &d = model.dims;
  for (int dim : {d.tagger_hidden, d.tagger_features.symbol_dim,
                  d.tagger_features.capitalization_dim,
                  d.tagger_features.affix_dim, d.tagger_features.word_dim,
                  d.parser.hidden_dim, d.parser.implicit_dim,
                  d.parser.label_dim, d.parser.word_dim}) {
    if (dim < 1) throw UsageError("dimensions must be >= 1");
  }
}

std::vector<std::string> TrainingConfigKeys() {
  std::vector<std::string> keys;
  for (const Field &field : Fields()) {
    const std::string key = field.key;
    // Optimizer settings are also accepted without a prefix.
    if (key.rfind("tagger.", 0) == 0) keys.push_back(key.substr(7));
    keys.push_back(key);
  }
  return keys;
}

}  // namespace stackprop
