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

#include "stackprop/tagger_features.h"

#include <stdexcept>

#include "stackprop/unicode_text.h"

namespace stackprop {

namespace {

constexpr const char *kAffixPrefixes[4] = {"p2:", "p3:", "s2:", "s3:"};

int SymbolId(int indicator, bool fires) {
  return 2 + 2 * indicator + (fires ? 1 : 0);
}

}  // namespace

CaseClass ClassifyCase(std::string_view form) {
  const std::u32string chars = DecodeUtf8(form);
  int letters = 0;
  int upper = 0;
  bool first_upper = false;
  bool first_letter_seen = false;
  for (char32_t c : chars) {
    if (!IsLetter(c)) continue;
    ++letters;
    const bool is_upper = IsUpper(c);
    if (is_upper) ++upper;
    if (!first_letter_seen) {
      first_upper = is_upper;
      first_letter_seen = true;
    }
  }
  if (letters == 0) return CaseClass::kNoLetters;
  if (upper == 0) return CaseClass::kAllLower;
  if (upper == letters) {
    return letters == 1 ? CaseClass::kInitialUpper : CaseClass::kAllCaps;
  }
  if (first_upper && upper == 1) return CaseClass::kInitialUpper;
  return CaseClass::kMixed;
}

std::string Prefix(std::string_view lowered, int n) {
  const std::u32string chars = DecodeUtf8(lowered);
  if (static_cast<int>(chars.size()) <= n) return std::string(lowered);
  return EncodeUtf8(std::u32string_view(chars).substr(0, n));
}

std::string Suffix(std::string_view lowered, int n) {
  const std::u32string chars = DecodeUtf8(lowered);
  if (static_cast<int>(chars.size()) <= n) return std::string(lowered);
  return EncodeUtf8(std::u32string_view(chars).substr(chars.size() - n));
}

std::array<std::string, 4> AffixKeys(std::string_view form) {
  const std::string lowered = Lowercase(form);
  return {std::string(kAffixPrefixes[0]) + Prefix(lowered, 2),
          std::string(kAffixPrefixes[1]) + Prefix(lowered, 3),
          std::string(kAffixPrefixes[2]) + Suffix(lowered, 2),
          std::string(kAffixPrefixes[3]) + Suffix(lowered, 3)};
}

void AddToLexicon(const Sentence &sentence, Vocabulary *words,
                  Vocabulary *affixes) {
  for (const Token &token : sentence.tokens) {
    words->Add(Lowercase(token.form));
    for (const std::string &key : AffixKeys(token.form)) affixes->Add(key);
  }
}

std::vector<TokenFeatureIds> ComputeTokenFeatureIds(
    const Sentence &sentence, const Vocabulary &words,
    const Vocabulary &affixes) {
  std::vector<TokenFeatureIds> ids(sentence.tokens.size());
  for (size_t i = 0; i < sentence.tokens.size(); ++i) {
    const std::string &form = sentence.tokens[i].form;
    bool hyphen = false;
    bool digit = false;
    bool punct = false;
    for (char32_t c : DecodeUtf8(form)) {
      hyphen = hyphen || IsHyphen(c);
      digit = digit || IsDigit(c);
      punct = punct || IsPunctuation(c);
    }
    TokenFeatureIds &token = ids[i];
    token.symbols = {SymbolId(0, hyphen), SymbolId(1, digit),
                     SymbolId(2, punct)};
    token.capitalization = static_cast<int>(ClassifyCase(form));
    const std::array<std::string, 4> keys = AffixKeys(form);
    for (int k = 0; k < 4; ++k) token.affixes[k] = affixes.Lookup(keys[k]);
    token.word = words.Lookup(Lowercase(form));
  }
  return ids;
}

std::vector<FeatureGroupSpec> TaggerFeatureExtractor::GroupSpecs(
    int word_vocab_size, int affix_vocab_size) const {
  return {
      {"symbols", 3, kSymbolVocabSize, config_.symbol_dim, false, false},
      {"capitalization", 2 * kCapitalizationWindow + 1,
       kCapitalizationVocabSize, config_.capitalization_dim, false, false},
      {"affixes", 4 * (2 * kAffixWindow + 1), affix_vocab_size,
       config_.affix_dim, false, false},
      {"words", 2 * kWordWindow + 1, word_vocab_size, config_.word_dim, false,
       false},
  };
}

FeatureInputs TaggerFeatureExtractor::EmptyInputs() const {
  return FeatureInputs(4);
}

void TaggerFeatureExtractor::Append(std::span<const TokenFeatureIds> sentence,
                                    int j, FeatureInputs *inputs) const {
  const int n = static_cast<int>(sentence.size());
  if (j < 1 || j > n) {
    throw std::out_of_range("tagger target " + std::to_string(j) +
                            " outside 1.." + std::to_string(n));
  }
  if (inputs->size() != 4) inputs->assign(4, FeatureMatrix());
  auto at = [&](int position) -> const TokenFeatureIds * {
    if (position < 1 || position > n) return nullptr;
    return &sentence[position - 1];
  };
  const TokenFeatureIds &target = sentence[j - 1];
  std::vector<int> &symbols = (*inputs)[0].ids;
  symbols.insert(symbols.end(), target.symbols.begin(), target.symbols.end());

  std::vector<int> &capitalization = (*inputs)[1].ids;
  for (int k = -kCapitalizationWindow; k <= kCapitalizationWindow; ++k) {
    const TokenFeatureIds *token = at(j + k);
    capitalization.push_back(token ? token->capitalization
                                   : Vocabulary::kNullId);
  }

  std::vector<int> &affixes = (*inputs)[2].ids;
  for (int k = -kAffixWindow; k <= kAffixWindow; ++k) {
    const TokenFeatureIds *token = at(j + k);
    for (int a = 0; a < 4; ++a) {
      affixes.push_back(token ? token->affixes[a] : Vocabulary::kNullId);
    }
  }

  std::vector<int> &words = (*inputs)[3].ids;
  for (int k = -kWordWindow; k <= kWordWindow; ++k) {
    const TokenFeatureIds *token = at(j + k);
    words.push_back(token ? token->word : Vocabulary::kNullId);
  }
}

FeatureInputs TaggerFeatureExtractor::Extract(
    std::span<const TokenFeatureIds> sentence, int j) const {
  FeatureInputs inputs = EmptyInputs();
  Append(sentence, j, &inputs);
  return inputs;
}

}  // namespace stackprop
