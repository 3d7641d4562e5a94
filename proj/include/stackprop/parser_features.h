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

#ifndef STACKPROP_PARSER_FEATURES_H_
#define STACKPROP_PARSER_FEATURES_H_

#include <array>
#include <string_view>

#include "stackprop/transition_system.h"

namespace stackprop {

// Token templates, in input order:
//   s0 s1 s2 s3 b0 b1 b2 b3
//   lc1(s0) rc1(s0) lc2(s0) rc2(s0) lc1(s1) rc1(s1) lc2(s1) rc2(s1)
//   lc1(lc1(s0)) rc1(rc1(s0)) lc1(lc1(s1)) rc1(rc1(s1))
// Label templates read the arc labels of the 12 child templates.
inline constexpr int kNumTokenTemplates = 20;
inline constexpr int kNumLabelTemplates = 12;
inline constexpr int kFirstChildTemplate = 8;
inline constexpr int kNullToken = -1;

const std::array<std::string_view, kNumTokenTemplates> &TokenTemplateNames();

struct ParserFeatureTokens {
  std::array<int, kNumTokenTemplates> tokens;  // token index or kNullToken
  std::array<int, kNumLabelTemplates> labels;  // label id + 1, 0 for NULL
};

// Template values of `config`. The root sentinel maps to kNullToken.
std::array<int, kNumTokenTemplates> FeatureTokens(
    const ParserConfiguration &config);

ParserFeatureTokens ExtractParserFeatures(const ParserConfiguration &config);

}  // namespace stackprop

#endif  // STACKPROP_PARSER_FEATURES_H_
