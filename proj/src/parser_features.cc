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

#include "stackprop/parser_features.h"

namespace stackprop {

namespace {

int NullIfRoot(int token) { return token == kRootIndex ? kNullToken : token; }

}  // namespace

const std::array<std::string_view, kNumTokenTemplates> &TokenTemplateNames() {
  static const std::array<std::string_view, kNumTokenTemplates> kNames = {
      "stack.0",         "stack.1",         "stack.2",
      "stack.3",         "input.0",         "input.1",
      "input.2",         "input.3",         "stack.0.lc1",
      "stack.0.rc1",     "stack.0.lc2",     "stack.0.rc2",
      "stack.1.lc1",     "stack.1.rc1",     "stack.1.lc2",
      "stack.1.rc2",     "stack.0.lc1.lc1", "stack.0.rc1.rc1",
      "stack.1.lc1.lc1", "stack.1.rc1.rc1",
  };
  return kNames;
}

std::array<int, kNumTokenTemplates> FeatureTokens(
    const ParserConfiguration &config) {
  std::array<int, kNumTokenTemplates> t;
  for (int i = 0; i < 4; ++i) t[i] = config.Stack(i);
  for (int i = 0; i < 4; ++i) t[4 + i] = config.Buffer(i);
  // Children are looked up on the raw stack tokens; the root's children are
  // real tokens.
  const int s0 = t[0];
  const int s1 = t[1];
  t[8] = config.LeftChild(s0, 1);
  t[9] = config.RightChild(s0, 1);
  t[10] = config.LeftChild(s0, 2);
  t[11] = config.RightChild(s0, 2);
  t[12] = config.LeftChild(s1, 1);
  t[13] = config.RightChild(s1, 1);
  t[14] = config.LeftChild(s1, 2);
  t[15] = config.RightChild(s1, 2);
  t[16] = config.LeftChild(t[8], 1);
  t[17] = config.RightChild(t[9], 1);
  t[18] = config.LeftChild(t[12], 1);
  t[19] = config.RightChild(t[13], 1);
  for (int &token : t) token = NullIfRoot(token);
  return t;
}

ParserFeatureTokens ExtractParserFeatures(const ParserConfiguration &config) {
  ParserFeatureTokens features;
  features.tokens = FeatureTokens(config);
  for (int i = 0; i < kNumLabelTemplates; ++i) {
    const int token = features.tokens[kFirstChildTemplate + i];
    features.labels[i] =
        token == kNullToken || config.Label(token) < 0 ? 0
                                                        : config.Label(token) + 1;
  }
  return features;
}

}  // namespace stackprop
