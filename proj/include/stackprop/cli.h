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

#ifndef STACKPROP_CLI_H_
#define STACKPROP_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace stackprop {

// Exit codes of the command line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;
inline constexpr int kExitModel = 3;

// Runs the command line tool. "-" for an input or output path means `in`
// or `out`; logs go to `err`.
int RunCli(const std::vector<std::string> &args, std::istream &in,
           std::ostream &out, std::ostream &err);

}  // namespace stackprop

#endif  // STACKPROP_CLI_H_
