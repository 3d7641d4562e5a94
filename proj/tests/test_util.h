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

#ifndef STACKPROP_TESTS_TEST_UTIL_H_
#define STACKPROP_TESTS_TEST_UTIL_H_

#include <functional>
#include <random>
#include <string>
#include <vector>

#include "stackprop/corpus.h"

namespace stackprop {
namespace testing {

// True when `heads` (element 0 unused) is a tree with exactly one token
// attached to the root.
inline bool IsSingleRootTree(const std::vector<int> &heads) {
  const int n = static_cast<int>(heads.size()) - 1;
  int roots = 0;
  for (int d = 1; d <= n; ++d) {
    if (heads[d] < 0 || heads[d] > n || heads[d] == d) return false;
    if (heads[d] == 0) ++roots;
  }
  if (roots != 1) return false;
  for (int d = 1; d <= n; ++d) {
    int x = d;
    for (int steps = 0; x != 0; ++steps) {
      if (steps > n) return false;
      x = heads[x];
    }
  }
  return true;
}

// Calls `visit` on every single-root tree over n tokens.
inline void ForEachTree(int n,
                        const std::function<void(const std::vector<int> &)>
                            &visit) {
  std::vector<int> heads(n + 1, 0);
  std::function<void(int)> rec = [&](int d) {
    if (d > n) {
      if (IsSingleRootTree(heads)) visit(heads);
      return;
    }
    for (int h = 0; h <= n; ++h) {
      if (h == d) continue;
      heads[d] = h;
      rec(d + 1);
    }
  };
  rec(1);
}

// Pairwise crossing test over all arcs, the root arc included.
inline bool BruteForceProjective(const std::vector<int> &heads) {
  const int n = static_cast<int>(heads.size()) - 1;
  for (int a = 1; a <= n; ++a) {
    const int l1 = std::min(a, heads[a]), r1 = std::max(a, heads[a]);
    for (int b = 1; b <= n; ++b) {
      if (a == b) continue;
      const int l2 = std::min(b, heads[b]), r2 = std::max(b, heads[b]);
      if (l1 < l2 && l2 < r1 && r1 < r2) return false;
    }
  }
  return true;
}

// Uniform-ish random single-root tree: attach tokens in random order to an
// already attached node.
inline std::vector<int> RandomTree(int n, std::mt19937_64 *rng) {
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i + 1;
  std::shuffle(order.begin(), order.end(), *rng);
  std::vector<int> heads(n + 1, 0);
  std::vector<int> attached = {order[0]};
  for (int i = 1; i < n; ++i) {
    std::uniform_int_distribution<size_t> pick(0, attached.size() - 1);
    heads[order[i]] = attached[pick(*rng)];
    attached.push_back(order[i]);
  }
  return heads;
}

// Random projective tree: recursive split of a span around a head.
inline void FillProjective(int lo, int hi, int head, std::mt19937_64 *rng,
                           std::vector<int> *heads) {
  if (lo > hi) return;
  std::uniform_int_distribution<int> pick(lo, hi);
  const int h = pick(*rng);
  (*heads)[h] = head;
  FillProjective(lo, h - 1, h, rng, heads);
  FillProjective(h + 1, hi, h, rng, heads);
}

inline std::vector<int> RandomProjectiveTree(int n, std::mt19937_64 *rng) {
  std::vector<int> heads(n + 1, 0);
  FillProjective(1, n, 0, rng, &heads);
  return heads;
}

// Sentence with forms w1..wn, heads as given and labels "root" / "dep".
inline Sentence TreeSentence(const std::vector<int> &heads,
                             const std::string &id = "t") {
  Sentence s;
  s.id = id;
  for (size_t d = 1; d < heads.size(); ++d) {
    Token t;
    t.index = static_cast<int>(d);
    t.form = "w" + std::to_string(d);
    t.upos = "X";
    t.head = heads[d];
    t.deprel = heads[d] == 0 ? "root" : "dep";
    s.tokens.push_back(t);
  }
  return s;
}

}  // namespace testing
}  // namespace stackprop

#endif  // STACKPROP_TESTS_TEST_UTIL_H_
