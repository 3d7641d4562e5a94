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

#ifndef STACKPROP_MODEL_IO_H_
#define STACKPROP_MODEL_IO_H_

#include <cstdint>
#include <string>
#include <string_view>

#include "stackprop/model.h"

namespace stackprop {

// Model file layout (all integers and doubles little-endian):
//   "STKPROP\0"  magic
//   uint32       format version
//   uint64       header length, then a JSON header with the config,
//                vocabularies, feature groups, template names and the
//                name/shape/step counters of every parameter block
//   per block    value, velocity and average as rows*cols doubles
//   uint32       crc32 of everything above
// Optimizer state is kept so training can resume and round trips are exact.
inline constexpr uint32_t kModelFormatVersion = 1;

std::string SerializeModel(const StackedModel &model);
// Throws ModelError for bad magic, unsupported versions, truncation,
// checksum mismatches or inconsistent headers.
StackedModel DeserializeModel(std::string_view bytes);

void SaveModel(const StackedModel &model, const std::string &path);
StackedModel LoadModel(const std::string &path);

// Short content digest (crc32 and adler32, hex) used in manifests.
std::string ContentDigest(std::string_view bytes);

}  // namespace stackprop

#endif  // STACKPROP_MODEL_IO_H_
