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

#ifndef STACKPROP_ERRORS_H_
#define STACKPROP_ERRORS_H_

#include <stdexcept>
#include <string>

namespace stackprop {

// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent input data (CoNLL-U, embeddings, configs).
class DataError : public Error {
 public:
  using Error::Error;
};

// Unreadable, corrupt or incompatible model files.
class ModelError : public Error {
 public:
  using Error::Error;
};

// Invalid use of the transition system (illegal actions, unrollable trees).
class TransitionError : public Error {
 public:
  using Error::Error;
};

// Bad command line or configuration values.
class UsageError : public Error {
 public:
  using Error::Error;
};

}  // namespace stackprop

#endif  // STACKPROP_ERRORS_H_
