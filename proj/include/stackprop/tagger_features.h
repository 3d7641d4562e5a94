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

#ifndef STACKPROP_TAGGER_FEATURES_H_
#define STACKPROP_TAGGER_FEATURES_H_

#include <array>
#include <span>
#include <string>
#include <vector>

#include "stackprop/corpus.h"
#include "stackprop/nn_kernel.h"

namespace stackprop {

// Window-based tagger feature groups, in input order:
//   symbols         3 binary indicators of the target token (hyphen, digit,
//                   punctuation)
//   capitalization  case class of tokens j-1, j, j+1
//   affixes         prefix/suffix of length 2 and 3 of tokens j-1, j, j+1
//   words           lowercased forms of tokens j-3 .. j+3
// Out-of-sentence positions map to the NULL id of their group.
struct TaggerFeatureConfig {
  int symbol_dim = 8;
  int capitalization_dim = 4;
  int affix_dim = 16;
  int word_dim = 64;

  bool operator==(const TaggerFeatureConfig &other) const = default;
};

inline constexpr int kCapitalizationWindow = 1;
inline constexpr int kAffixWindow = 1;
inline constexpr int kWordWindow = 3;
inline constexpr int kNumTaggerTemplates = 3 + 3 + 12 + 7;

enum class TaggerGroup { kSymbols = 0, kCapitalization, kAffixes, kWords };

// Capitalization classes (ids after NULL and UNKNOWN).
enum class CaseClass {
  kAllLower = 2,
  kInitialUpper,
  kAllCaps,
  kMixed,
  kNoLetters,
};
inline constexpr int kCapitalizationVocabSize = 7;
inline constexpr int kSymbolVocabSize = 8;

CaseClass ClassifyCase(std::string_view form);

// Affix strings computed on the lowercased form; tokens shorter than n
// contribute the whole form.
std::string Prefix(std::string_view lowered, int n);
std::string Suffix(std::string_view lowered, int n);

// Vocabulary keys for the four affix templates.
std::array<std::string, 4> AffixKeys(std::string_view form);

// Per-token ids, computed once per sentence.
struct TokenFeatureIds {
  std::array<int, 3> symbols{};
  int capitalization = 0;
  std::array<int, 4> affixes{};  // p2, p3, s2, s3
  int word = 0;
};

// Adds a training sentence's words and affixes to the lexicon.
void AddToLexicon(const Sentence &sentence, Vocabulary *words,
                  Vocabulary *affixes);

std::vector<TokenFeatureIds> ComputeTokenFeatureIds(
    const Sentence &sentence, const Vocabulary &words,
    const Vocabulary &affixes);

class TaggerFeatureExtractor {
 public:
  TaggerFeatureExtractor() = default;
  explicit TaggerFeatureExtractor(const TaggerFeatureConfig &config)
      : config_(config) {}

  const TaggerFeatureConfig &config() const { return config_; }

  std::vector<FeatureGroupSpec> GroupSpecs(int word_vocab_size,
                                           int affix_vocab_size) const;

  // Empty per-group inputs with the right dense/sparse layout.
  FeatureInputs EmptyInputs() const;

  // Appends the features of token j (1-based) as one batch row.
  // Throws std::out_of_range when j is outside 1..n.
  void Append(std::span<const TokenFeatureIds> sentence, int j,
              FeatureInputs *inputs) const;

  FeatureInputs Extract(std::span<const TokenFeatureIds> sentence,
                        int j) const;

 private:
  TaggerFeatureConfig config_;
};

}  // namespace stackprop

#endif  // STACKPROP_TAGGER_FEATURES_H_
