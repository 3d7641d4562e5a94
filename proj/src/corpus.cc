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

#include "stackprop/corpus.h"

#include <charconv>
#include <fstream>
#include <sstream>

#include "stackprop/errors.h"
#include "stackprop/unicode_text.h"

namespace stackprop {

namespace {

std::vector<std::string_view> SplitTabs(std::string_view line) {
  std::vector<std::string_view> fields;
  size_t start = 0;
  while (true) {
    const size_t tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
  return fields;
}

bool ParseInt(std::string_view text, int *value) {
  if (text.empty()) return false;
  const auto result =
      std::from_chars(text.data(), text.data() + text.size(), *value);
  return result.ec == std::errc() && result.ptr == text.data() + text.size();
}

std::string SentenceLabel(const Sentence &sentence) {
  return sentence.id.empty() ? std::string("<unnamed>") : sentence.id;
}

}  // namespace

bool Sentence::HasGoldTree() const {
  for (const Token &token : tokens) {
    if (token.head == kNoHead) return false;
  }
  return !tokens.empty();
}

std::vector<int> Sentence::Heads() const {
  std::vector<int> heads(tokens.size() + 1, kNoHead);
  for (const Token &token : tokens) heads[token.index] = token.head;
  return heads;
}

void ValidateTree(const Sentence &sentence) {
  const int n = sentence.size();
  int roots = 0;
  for (const Token &token : sentence.tokens) {
    if (token.head < 0 || token.head > n) {
      throw DataError("sentence " + SentenceLabel(sentence) + ": token " +
                      std::to_string(token.index) + " has head " +
                      std::to_string(token.head) + " outside 0.." +
                      std::to_string(n));
    }
    if (token.head == token.index) {
      throw DataError("sentence " + SentenceLabel(sentence) + ": token " +
                      std::to_string(token.index) + " is its own head");
    }
    if (token.head == kRootIndex) ++roots;
  }
  if (roots != 1) {
    throw DataError("sentence " + SentenceLabel(sentence) + ": expected one " +
                    "root attachment, found " + std::to_string(roots));
  }
  // Walk up from every token; a path longer than n means a cycle.
  for (const Token &token : sentence.tokens) {
    int node = token.index;
    int steps = 0;
    while (node != kRootIndex) {
      node = sentence.token(node).head;
      if (++steps > n) {
        throw DataError("sentence " + SentenceLabel(sentence) +
                        ": cycle in head relation through token " +
                        std::to_string(token.index));
      }
    }
  }
}

Vocabulary::Vocabulary(bool with_specials) : with_specials_(with_specials) {
  if (with_specials_) {
    Add(std::string(kNullName));
    Add(std::string(kUnknownName));
  }
}

int Vocabulary::Add(const std::string &name) {
  auto it = ids_.find(name);
  if (it != ids_.end()) return it->second;
  const int id = static_cast<int>(names_.size());
  names_.push_back(name);
  ids_.emplace(name, id);
  return id;
}

int Vocabulary::Lookup(std::string_view name) const {
  auto it = ids_.find(std::string(name));
  if (it != ids_.end()) return it->second;
  return with_specials_ ? kUnknownId : -1;
}

bool Vocabulary::Contains(std::string_view name) const {
  return ids_.count(std::string(name)) > 0;
}

Vocabulary Vocabulary::FromNames(const std::vector<std::string> &names,
                                 bool with_specials) {
  Vocabulary vocab(with_specials);
  if (with_specials &&
      (names.size() < 2 || names[0] != kNullName || names[1] != kUnknownName)) {
    throw ModelError("vocabulary is missing its NULL/UNKNOWN entries");
  }
  for (const std::string &name : names) vocab.Add(name);
  if (vocab.size() != static_cast<int>(names.size())) {
    throw ModelError("vocabulary contains duplicate entries");
  }
  return vocab;
}

CorpusVocab BuildCorpusVocab(const std::vector<Sentence> &corpus) {
  CorpusVocab vocab;
  for (const Sentence &sentence : corpus) {
    for (const Token &token : sentence.tokens) {
      vocab.forms.Add(Lowercase(token.form));
      vocab.tags.Add(token.upos);
      vocab.labels.Add(token.deprel);
    }
  }
  return vocab;
}

ConlluReader::ConlluReader(std::istream *input, bool validate)
    : input_(input), validate_(validate) {}

bool ConlluReader::Next(Sentence *sentence) {
  sentence->id.clear();
  sentence->tokens.clear();
  std::string line;
  bool in_block = false;
  while (std::getline(*input_, line)) {
    ++line_number_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      if (in_block) break;
      continue;
    }
    in_block = true;
    if (line[0] == '#') {
      constexpr std::string_view kSentId = "# sent_id";
      if (line.compare(0, kSentId.size(), kSentId) == 0) {
        const size_t eq = line.find('=');
        if (eq != std::string::npos) {
          size_t start = line.find_first_not_of(' ', eq + 1);
          if (start != std::string::npos) sentence->id = line.substr(start);
        }
      }
      continue;
    }
    const std::vector<std::string_view> fields = SplitTabs(line);
    if (fields.size() != 10) {
      throw DataError("line " + std::to_string(line_number_) +
                      ": expected 10 tab-separated columns, found " +
                      std::to_string(fields.size()));
    }
    const std::string_view id = fields[0];
    if (id.find('-') != std::string_view::npos ||
        id.find('.') != std::string_view::npos) {
      continue;
    }
    Token token;
    if (!ParseInt(id, &token.index) ||
        token.index != sentence->size() + 1) {
      throw DataError("line " + std::to_string(line_number_) +
                      ": token id '" + std::string(id) +
                      "' is not the next position in the sentence");
    }
    token.form = std::string(fields[1]);
    token.lemma = std::string(fields[2]);
    token.upos = std::string(fields[3]);
    token.xpos = std::string(fields[4]);
    token.feats = std::string(fields[5]);
    if (fields[6] != "_") {
      if (!ParseInt(fields[6], &token.head)) {
        throw DataError("line " + std::to_string(line_number_) +
                        ": bad HEAD value '" + std::string(fields[6]) + "'");
      }
    }
    token.deprel = std::string(fields[7]);
    token.deps = std::string(fields[8]);
    token.misc = std::string(fields[9]);
    sentence->tokens.push_back(std::move(token));
  }
  if (!in_block) return false;
  ++sentence_count_;
  if (sentence->id.empty()) sentence->id = std::to_string(sentence_count_);
  if (sentence->empty()) {
    // Comment-only block; keep reading.
    return Next(sentence);
  }
  if (validate_) {
    bool any_head = false;
    for (const Token &token : sentence->tokens) {
      any_head = any_head || token.head != kNoHead;
    }
    if (any_head) ValidateTree(*sentence);
  }
  return true;
}

std::vector<Sentence> ParseConllu(std::string_view text, bool validate) {
  std::istringstream input{std::string(text)};
  ConlluReader reader(&input, validate);
  std::vector<Sentence> sentences;
  Sentence sentence;
  while (reader.Next(&sentence)) sentences.push_back(std::move(sentence));
  return sentences;
}

std::vector<Sentence> ReadConlluFile(const std::string &path, bool validate) {
  std::ifstream input(path);
  if (!input) throw DataError("cannot open " + path);
  ConlluReader reader(&input, validate);
  std::vector<Sentence> sentences;
  Sentence sentence;
  try {
    while (reader.Next(&sentence)) sentences.push_back(std::move(sentence));
  } catch (const DataError &e) {
    throw DataError(path + ": " + e.what());
  }
  return sentences;
}

void WriteConllu(const Sentence &sentence, bool use_predicted,
                 std::ostream *output) {
  for (const Token &token : sentence.tokens) {
    std::string upos = token.upos;
    std::string head = token.head == kNoHead ? "_" : std::to_string(token.head);
    std::string deprel = token.deprel;
    if (use_predicted) {
      if (!token.pred_head.has_value() || !token.pred_deprel.has_value()) {
        throw DataError("sentence " + SentenceLabel(sentence) + ": token " +
                        std::to_string(token.index) +
                        " has no predicted head/label");
      }
      head = std::to_string(*token.pred_head);
      deprel = *token.pred_deprel;
      if (token.pred_upos.has_value()) upos = *token.pred_upos;
    }
    *output << token.index << '\t' << token.form << '\t' << token.lemma
            << '\t' << upos << '\t' << token.xpos << '\t' << token.feats
            << '\t' << head << '\t' << deprel << '\t' << token.deps << '\t'
            << token.misc << '\n';
  }
  *output << '\n';
}

std::string EmitConllu(const std::vector<Sentence> &sentences,
                       bool use_predicted) {
  std::ostringstream output;
  for (const Sentence &sentence : sentences) {
    WriteConllu(sentence, use_predicted, &output);
  }
  return output.str();
}

}  // namespace stackprop
