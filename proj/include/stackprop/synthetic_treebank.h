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

#ifndef STACKPROP_SYNTHETIC_TREEBANK_H_
#define STACKPROP_SYNTHETIC_TREEBANK_H_

#include <cstdint>
#include <vector>

#include "stackprop/corpus.h"

namespace stackprop {

// Small English-like grammar with universal tags and labels. The lexicon has
// noun/verb ambiguous words, inflected forms, sentence-initial capitals,
// numbers, hyphenated adjectives, an open class of invented words whose
// suffix reveals the tag, and PP attachment ambiguity. A fraction of
// sentences extrapose a subject modifier past the verb, which makes the
// tree non-projective.
struct SyntheticTreebankOptions {
  int num_sentences = 1000;
  uint64_t seed = 1;
  double nonprojective_rate = 0.0;
  // Probability that an open-class slot draws an invented word.
  double invented_word_rate = 0.15;
};

std::vector<Sentence> GenerateSyntheticTreebank(
    const SyntheticTreebankOptions &options);

}  // namespace stackprop

#endif  // STACKPROP_SYNTHETIC_TREEBANK_H_
