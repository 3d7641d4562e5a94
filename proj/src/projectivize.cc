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

#include "stackprop/projectivize.h"

#include <algorithm>
#include <cstdlib>

namespace stackprop {

namespace {

bool Dominates(std::span<const int> heads, int ancestor, int node) {
  const int n = static_cast<int>(heads.size()) - 1;
  for (int steps = 0; steps <= n + 1; ++steps) {
    if (node == ancestor) return true;
    if (node == kRootIndex) return false;
    node = heads[node];
  }
  return false;
}

bool ArcIsProjective(std::span<const int> heads, int dependent) {
  const int head = heads[dependent];
  const int lo = std::min(head, dependent);
  const int hi = std::max(head, dependent);
  for (int k = lo + 1; k < hi; ++k) {
    if (!Dominates(heads, head, k)) return false;
  }
  return true;
}

}  // namespace

bool IsProjective(std::span<const int> heads) {
  for (size_t d = 1; d < heads.size(); ++d) {
    if (!ArcIsProjective(heads, static_cast<int>(d))) return false;
  }
  return true;
}

bool IsProjective(const Sentence &sentence) {
  const std::vector<int> heads = sentence.Heads();
  return IsProjective(heads);
}

std::vector<int> ProjectivizeHeads(std::span<const int> heads) {
  std::vector<int> lifted(heads.begin(), heads.end());
  const int n = static_cast<int>(lifted.size()) - 1;
  while (true) {
    int best = -1;
    int best_span = 0;
    for (int d = 1; d <= n; ++d) {
      if (ArcIsProjective(lifted, d)) continue;
      const int span = std::abs(lifted[d] - d);
      const int left = std::min(lifted[d], d);
      if (best < 0 || span < best_span ||
          (span == best_span && left < std::min(lifted[best], best))) {
        best = d;
        best_span = span;
      }
    }
    if (best < 0) return lifted;
    // Arcs from the root are always projective, so the head has a head.
    lifted[best] = lifted[lifted[best]];
  }
}

Sentence Projectivize(const Sentence &sentence) {
  const std::vector<int> lifted = ProjectivizeHeads(sentence.Heads());
  Sentence result = sentence;
  for (Token &token : result.tokens) token.head = lifted[token.index];
  return result;
}

}  // namespace stackprop
