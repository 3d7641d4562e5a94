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

#include "stackprop/model_io.h"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include <zlib.h>

#include "json.hpp"
#include "stackprop/errors.h"

namespace stackprop {

namespace {

using nlohmann::json;

constexpr char kMagic[8] = {'S', 'T', 'K', 'P', 'R', 'O', 'P', '\0'};

template <typename T>
void PutLittleEndian(T value, std::string *out) {
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) {
    for (size_t i = 0; i < sizeof(T) / 2; ++i) {
      std::swap(bytes[i], bytes[sizeof(T) - 1 - i]);
    }
  }
  out->append(reinterpret_cast<const char *>(bytes), sizeof(T));
}

class Reader {
 public:
  explicit Reader(std::string_view bytes) : bytes_(bytes) {}

  template <typename T>
  T Get() {
    Need(sizeof(T));
    unsigned char bytes[sizeof(T)];
    std::memcpy(bytes, bytes_.data() + pos_, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) {
      for (size_t i = 0; i < sizeof(T) / 2; ++i) {
        std::swap(bytes[i], bytes[sizeof(T) - 1 - i]);
      }
    }
    pos_ += sizeof(T);
    T value;
    std::memcpy(&value, bytes, sizeof(T));
    return value;
  }

  std::string_view Take(size_t n) {
    Need(n);
    std::string_view out = bytes_.substr(pos_, n);
    pos_ += n;
    return out;
  }

  size_t pos() const { return pos_; }

 private:
  void Need(size_t n) const {
    if (bytes_.size() - pos_ < n) {
      throw ModelError("model file truncated at byte " + std::to_string(pos_));
    }
  }

  std::string_view bytes_;
  size_t pos_ = 0;
};

uint32_t Crc32(std::string_view bytes) {
  uLong crc = crc32(0L, Z_NULL, 0);
  // zlib takes uInt lengths; feed large inputs in chunks.
  size_t pos = 0;
  while (pos < bytes.size()) {
    const size_t chunk = std::min<size_t>(bytes.size() - pos, 1u << 30);
    crc = crc32(crc, reinterpret_cast<const Bytef *>(bytes.data() + pos),
                static_cast<uInt>(chunk));
    pos += chunk;
  }
  return static_cast<uint32_t>(crc);
}

json GroupsJson(const FeedForwardNetwork &network) {
  json groups = json::array();
  for (const FeatureGroupSpec &spec : network.groups()) {
    groups.push_back({{"name", spec.name},
                      {"num_features", spec.num_features},
                      {"vocab_size", spec.vocab_size},
                      {"embedding_dim", spec.embedding_dim},
                      {"dense", spec.dense},
                      {"passthrough", spec.passthrough}});
  }
  return groups;
}

json HeaderJson(const StackedModel &model) {
  const ModelConfig &config = model.config();
  const ModelDims &dims = config.dims;
  json header;
  header["config"] = {
      {"mode", TrainingModeName(config.mode)},
      {"swap", config.swap},
      {"symbol_dim", dims.tagger_features.symbol_dim},
      {"capitalization_dim", dims.tagger_features.capitalization_dim},
      {"affix_dim", dims.tagger_features.affix_dim},
      {"word_dim", dims.tagger_features.word_dim},
      {"tagger_hidden", dims.tagger_hidden},
      {"parser_hidden", dims.parser.hidden_dim},
      {"implicit_dim", dims.parser.implicit_dim},
      {"label_dim", dims.parser.label_dim},
      {"pipeline_word_dim", dims.parser.word_dim},
  };
  header["vocab"] = {{"forms", model.vocab().forms.names()},
                     {"tags", model.vocab().tags.names()},
                     {"labels", model.vocab().labels.names()},
                     {"affixes", model.affixes().names()}};
  header["tagger_groups"] = GroupsJson(model.tagger().network());
  header["parser_groups"] = GroupsJson(model.parser().network());
  json templates = json::array();
  for (std::string_view name : TokenTemplateNames()) {
    templates.push_back(std::string(name));
  }
  header["parser_templates"] = templates;
  json blocks = json::array();
  for (const auto &[name, block] : model.Blocks()) {
    blocks.push_back({{"name", name},
                      {"rows", block->value.rows()},
                      {"cols", block->value.cols()},
                      {"steps", block->steps},
                      {"averaged_steps", block->averaged_steps}});
  }
  header["blocks"] = blocks;
  return header;
}

ModelConfig ConfigFromJson(const json &j) {
  ModelConfig config;
  config.mode = ParseTrainingMode(j.at("mode").get<std::string>());
  config.swap = j.at("swap").get<bool>();
  ModelDims &dims = config.dims;
  dims.tagger_features.symbol_dim = j.at("symbol_dim").get<int>();
  dims.tagger_features.capitalization_dim =
      j.at("capitalization_dim").get<int>();
  dims.tagger_features.affix_dim = j.at("affix_dim").get<int>();
  dims.tagger_features.word_dim = j.at("word_dim").get<int>();
  dims.tagger_hidden = j.at("tagger_hidden").get<int>();
  dims.parser.hidden_dim = j.at("parser_hidden").get<int>();
  dims.parser.implicit_dim = j.at("implicit_dim").get<int>();
  dims.parser.label_dim = j.at("label_dim").get<int>();
  dims.parser.word_dim = j.at("pipeline_word_dim").get<int>();
  return config;
}

void PutMatrix(const Matrix &m, std::string *out) {
  for (Eigen::Index k = 0; k < m.size(); ++k) {
    PutLittleEndian<double>(m.data()[k], out);
  }
}

void GetMatrix(Reader *reader, Matrix *m) {
  for (Eigen::Index k = 0; k < m->size(); ++k) {
    m->data()[k] = reader->Get<double>();
  }
}

}  // namespace

std::string SerializeModel(const StackedModel &model) {
  std::string out(kMagic, sizeof(kMagic));
  PutLittleEndian<uint32_t>(kModelFormatVersion, &out);
  const std::string header = HeaderJson(model).dump();
  PutLittleEndian<uint64_t>(header.size(), &out);
  out += header;
  for (const auto &[name, block] : model.Blocks()) {
    PutMatrix(block->value, &out);
    PutMatrix(block->velocity, &out);
    PutMatrix(block->average, &out);
  }
  PutLittleEndian<uint32_t>(Crc32(out), &out);
  return out;
}

StackedModel DeserializeModel(std::string_view bytes) {
  Reader reader(bytes);
  if (reader.Take(sizeof(kMagic)) != std::string_view(kMagic, sizeof(kMagic))) {
    throw ModelError("not a stackprop model file (bad magic)");
  }
  const uint32_t version = reader.Get<uint32_t>();
  if (version != kModelFormatVersion) {
    throw ModelError("unsupported model format version " +
                     std::to_string(version));
  }
  const uint64_t header_size = reader.Get<uint64_t>();
  if (header_size > bytes.size()) throw ModelError("model file truncated");
  json header;
  try {
    header = json::parse(reader.Take(header_size));
  } catch (const json::exception &e) {
    throw ModelError(std::string("corrupt model header: ") + e.what());
  }

  StackedModel model;
  std::vector<json> block_specs;
  try {
    const json &vocab = header.at("vocab");
    CorpusVocab corpus_vocab;
    corpus_vocab.forms = Vocabulary::FromNames(
        vocab.at("forms").get<std::vector<std::string>>(), true);
    corpus_vocab.tags = Vocabulary::FromNames(
        vocab.at("tags").get<std::vector<std::string>>(), false);
    corpus_vocab.labels = Vocabulary::FromNames(
        vocab.at("labels").get<std::vector<std::string>>(), false);
    Vocabulary affixes = Vocabulary::FromNames(
        vocab.at("affixes").get<std::vector<std::string>>(), true);
    model = StackedModel(ConfigFromJson(header.at("config")),
                         std::move(corpus_vocab), std::move(affixes));
    if (header.at("tagger_groups") != GroupsJson(model.tagger().network()) ||
        header.at("parser_groups") != GroupsJson(model.parser().network())) {
      throw ModelError("model header feature groups are inconsistent");
    }
    std::vector<std::string> templates;
    for (std::string_view name : TokenTemplateNames()) {
      templates.emplace_back(name);
    }
    if (header.at("parser_templates").get<std::vector<std::string>>() !=
        templates) {
      throw ModelError("model uses a different parser template set");
    }
    block_specs = header.at("blocks").get<std::vector<json>>();
  } catch (const json::exception &e) {
    throw ModelError(std::string("corrupt model header: ") + e.what());
  } catch (const DataError &e) {
    throw ModelError(std::string("corrupt model header: ") + e.what());
  }

  std::vector<NamedBlock> blocks = model.Blocks();
  if (block_specs.size() != blocks.size()) {
    throw ModelError("model header lists " +
                     std::to_string(block_specs.size()) + " blocks, expected " +
                     std::to_string(blocks.size()));
  }
  for (size_t i = 0; i < blocks.size(); ++i) {
    ParameterBlock &block = *blocks[i].block;
    const json &spec = block_specs[i];
    try {
      if (spec.at("name").get<std::string>() != blocks[i].name ||
          spec.at("rows").get<int64_t>() != block.value.rows() ||
          spec.at("cols").get<int64_t>() != block.value.cols()) {
        throw ModelError("block " + std::to_string(i) + " (" +
                         blocks[i].name + ") does not match the header");
      }
      block.steps = spec.at("steps").get<int64_t>();
      block.averaged_steps = spec.at("averaged_steps").get<int64_t>();
    } catch (const json::exception &e) {
      throw ModelError(std::string("corrupt block header: ") + e.what());
    }
    GetMatrix(&reader, &block.value);
    GetMatrix(&reader, &block.velocity);
    GetMatrix(&reader, &block.average);
  }
  const size_t payload_end = reader.pos();
  const uint32_t stored = reader.Get<uint32_t>();
  if (reader.pos() != bytes.size()) {
    throw ModelError("trailing bytes after model payload");
  }
  if (stored != Crc32(bytes.substr(0, payload_end))) {
    throw ModelError("model checksum mismatch");
  }
  return model;
}

void SaveModel(const StackedModel &model, const std::string &path) {
  const std::string bytes = SerializeModel(model);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ModelError("cannot write model file " + path);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw ModelError("failed writing model file " + path);
}

StackedModel LoadModel(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ModelError("cannot open model file " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return DeserializeModel(buffer.str());
}

std::string ContentDigest(std::string_view bytes) {
  uLong adler = adler32(0L, Z_NULL, 0);
  size_t pos = 0;
  while (pos < bytes.size()) {
    const size_t chunk = std::min<size_t>(bytes.size() - pos, 1u << 30);
    adler = adler32(adler, reinterpret_cast<const Bytef *>(bytes.data() + pos),
                    static_cast<uInt>(chunk));
    pos += chunk;
  }
  char out[17];
  std::snprintf(out, sizeof(out), "%08x%08x", Crc32(bytes),
                static_cast<uint32_t>(adler));
  return out;
}

}  // namespace stackprop
