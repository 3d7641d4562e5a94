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

#ifndef STACKPROP_CORPUS_H_
#define STACKPROP_CORPUS_H_

#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace stackprop {

// Index of the artificial root. Tokens are numbered 1..n.
inline constexpr int kRootIndex = 0;

// Head value of a token whose HEAD column is unannotated ("_").
inline constexpr int kNoHead = -1;

// One CoNLL-U token line. Tag and label columns are kept as strings; models
// map them to ids through their own vocabularies.
struct Token {
  int index = 0;  // 1-based position in the sentence
  std::string form;
  std::string lemma = "_";
  std::string upos = "_";
  std::string xpos = "_";
  std::string feats = "_";
  int head = kNoHead;  // 0 = root
  std::string deprel = "_";
  std::string deps = "_";
  std::string misc = "_";

  std::optional<std::string> pred_upos;
  std::optional<int> pred_head;
  std::optional<std::string> pred_deprel;
};

struct Sentence {
  std::string id;
  std::vector<Token> tokens;

  int size() const { return static_cast<int>(tokens.size()); }
  bool empty() const { return tokens.empty(); }

  // 1-based access.
  const Token &token(int index) const { return tokens[index - 1]; }
  Token &token(int index) { return tokens[index - 1]; }

  // True when every token carries a HEAD value.
  bool HasGoldTree() const;

  // Gold heads as a vector indexed by token (element 0 is unused).
  std::vector<int> Heads() const;
};

// Checks that the gold heads form a single tree under the artificial root:
// heads in range, no self loops, no cycles, exactly one root attachment.
// Throws DataError naming the sentence id.
void ValidateTree(const Sentence &sentence);

// Bidirectional string <-> dense id map. Vocabularies used as feature inputs
// reserve id 0 for NULL (out-of-scope templates) and id 1 for UNKNOWN; class
// inventories (tags, labels) carry no specials.
class Vocabulary {
 public:
  static constexpr int kNullId = 0;
  static constexpr int kUnknownId = 1;
  static constexpr std::string_view kNullName = "<NULL>";
  static constexpr std::string_view kUnknownName = "<UNK>";

  explicit Vocabulary(bool with_specials = false);

  // Adds `name` if absent and returns its id.
  int Add(const std::string &name);

  // Returns the id of `name`, kUnknownId for unseen names in a vocabulary
  // with specials, and -1 otherwise.
  int Lookup(std::string_view name) const;
  bool Contains(std::string_view name) const;

  const std::string &Name(int id) const { return names_[id]; }
  int size() const { return static_cast<int>(names_.size()); }
  bool has_specials() const { return with_specials_; }
  const std::vector<std::string> &names() const { return names_; }

  // Rebuilds a vocabulary from its serialized name list.
  static Vocabulary FromNames(const std::vector<std::string> &names,
                              bool with_specials);

  bool operator==(const Vocabulary &other) const {
    return with_specials_ == other.with_specials_ && names_ == other.names_;
  }

 private:
  bool with_specials_;
  std::vector<std::string> names_;
  std::unordered_map<std::string, int> ids_;
};

// Closed vocabularies of a training corpus. Forms are lowercased.
struct CorpusVocab {
  Vocabulary forms{true};
  Vocabulary tags{false};
  Vocabulary labels{false};
};

// Builds vocabularies in first-occurrence order over the corpus.
CorpusVocab BuildCorpusVocab(const std::vector<Sentence> &corpus);

// Streaming CoNLL-U reader. Multiword ranges ("3-4") and empty nodes ("5.1")
// are skipped, comment lines are ignored except for "# sent_id = ...".
class ConlluReader {
 public:
  // `validate` rejects sentences whose annotated heads do not form a tree.
  explicit ConlluReader(std::istream *input, bool validate = true);

  // Reads the next sentence; returns false at end of input.
  bool Next(Sentence *sentence);

  int line_number() const { return line_number_; }

 private:
  std::istream *input_;
  bool validate_;
  int line_number_ = 0;
  int sentence_count_ = 0;
};

std::vector<Sentence> ParseConllu(std::string_view text, bool validate = true);
std::vector<Sentence> ReadConlluFile(const std::string &path,
                                     bool validate = true);

// Writes sentences as CoNLL-U. With `use_predicted`, HEAD and DEPREL come
// from the predicted fields (which must be set) and UPOS from pred_upos when
// present.
std::string EmitConllu(const std::vector<Sentence> &sentences,
                       bool use_predicted);
void WriteConllu(const Sentence &sentence, bool use_predicted,
                 std::ostream *output);

}  // namespace stackprop

#endif  // STACKPROP_CORPUS_H_
