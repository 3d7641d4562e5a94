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

#ifndef STACKPROP_PROJECTIVIZE_H_
#define STACKPROP_PROJECTIVIZE_H_

#include <span>
#include <vector>

#include "stackprop/corpus.h"

namespace stackprop {

// `heads` is indexed by token (element 0, the root, is ignored) and must
// describe a tree under the artificial root.

// True iff every arc h -> d dominates all tokens strictly between h and d,
// i.e. no two arcs (including the root arc) cross.
bool IsProjective(std::span<const int> heads);
bool IsProjective(const Sentence &sentence);

// Lifts non-projective arcs until the tree is projective: repeatedly picks
// the non-projective arc with the shortest span (leftmost on ties) and
// re-attaches its dependent to the head's head. Labels are untouched.
std::vector<int> ProjectivizeHeads(std::span<const int> heads);
Sentence Projectivize(const Sentence &sentence);

}  // namespace stackprop

#endif  // STACKPROP_PROJECTIVIZE_H_
