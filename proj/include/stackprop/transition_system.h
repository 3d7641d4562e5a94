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

#ifndef STACKPROP_TRANSITION_SYSTEM_H_
#define STACKPROP_TRANSITION_SYSTEM_H_

#include <deque>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "stackprop/corpus.h"

namespace stackprop {

// Arc-standard (Nivre 2004) with optional SWAP (Nivre 2009) and a joint
// variant in which SHIFT also assigns a POS tag.
//
// Stack conventions: s0 is the stack top, s1 the element below it.
//   SHIFT         push the buffer front onto the stack
//   LEFT_ARC(l)   s0 -l-> s1, pop s1
//   RIGHT_ARC(l)  s1 -l-> s0, pop s0
//   SWAP          move s1 back to the front of the buffer
//   SHIFT_TAG(t)  SHIFT and tag the shifted token with t
enum class ActionKind { kShift, kLeftArc, kRightArc, kSwap, kShiftTag };

struct Action {
  ActionKind kind = ActionKind::kShift;
  int label = -1;  // arc actions only
  int tag = -1;    // SHIFT_TAG only

  static Action Shift() { return {ActionKind::kShift, -1, -1}; }
  static Action LeftArc(int label) { return {ActionKind::kLeftArc, label, -1}; }
  static Action RightArc(int label) {
    return {ActionKind::kRightArc, label, -1};
  }
  static Action Swap() { return {ActionKind::kSwap, -1, -1}; }
  static Action ShiftTag(int tag) { return {ActionKind::kShiftTag, -1, tag}; }

  bool operator==(const Action &other) const = default;
};

const char *ActionKindName(ActionKind kind);

struct TransitionOptions {
  bool swap = false;
  bool joint = false;

  bool operator==(const TransitionOptions &other) const = default;
};

struct Arc {
  int head;
  int label;
  int dependent;

  bool operator==(const Arc &other) const = default;
};

// Parser state. Tokens are 1..n; the root sentinel (0) starts on the stack.
class ParserConfiguration {
 public:
  ParserConfiguration() = default;

  // Throws TransitionError for n < 1.
  static ParserConfiguration Initial(int num_tokens);

  int num_tokens() const { return num_tokens_; }
  const std::vector<int> &stack() const { return stack_; }
  const std::deque<int> &buffer() const { return buffer_; }

  // Stack element i from the top (0 = s0), or -1 when the stack is shorter.
  int Stack(int i) const;
  // Buffer element i from the front, or -1 when the buffer is shorter.
  int Buffer(int i) const;

  // Head and label of token t, or -1 when not yet attached.
  int Head(int token) const { return heads_[token]; }
  int Label(int token) const { return labels_[token]; }
  int AssignedTag(int token) const { return tags_[token]; }

  // Leftmost / rightmost children in surface order; `rank` 1 is the
  // outermost, 2 the next one. Returns -1 when absent.
  int LeftChild(int token, int rank) const;
  int RightChild(int token, int rank) const;

  // Arcs in the order they were built.
  std::vector<Arc> Arcs() const;
  int num_swaps() const { return num_swaps_; }

  bool IsTerminal() const {
    return buffer_.empty() && stack_.size() == 1;
  }

  bool operator==(const ParserConfiguration &other) const = default;

  // One-line rendering used in derivation dumps and error messages.
  std::string DebugString() const;

 private:
  friend void ApplyInPlace(ParserConfiguration *config, const Action &action,
                           const TransitionOptions &options);

  int num_tokens_ = 0;
  std::vector<int> stack_;
  std::deque<int> buffer_;
  std::vector<int> heads_;
  std::vector<int> labels_;
  std::vector<int> tags_;
  std::vector<Arc> arcs_;
  int num_swaps_ = 0;
};

// Which action kinds are legal in `config`.
struct LegalActions {
  bool shift = false;      // SHIFT or, in the joint system, SHIFT_TAG
  bool left_arc = false;
  bool right_arc = false;
  bool swap = false;

  bool empty() const { return !shift && !left_arc && !right_arc && !swap; }
  bool operator==(const LegalActions &other) const = default;
};

// SHIFT needs a non-empty buffer. Arc actions need two stack elements and a
// non-root dependent; attaching to the root sentinel additionally requires an
// empty buffer so decoded trees have a single root. SWAP needs two non-root
// stack elements in surface order (s1 < s0).
LegalActions GetLegalActions(const ParserConfiguration &config,
                             const TransitionOptions &options);
bool IsLegal(const ParserConfiguration &config, const Action &action,
             const TransitionOptions &options);

// Applies `action`; throws TransitionError when it is illegal.
ParserConfiguration Apply(const ParserConfiguration &config,
                          const Action &action,
                          const TransitionOptions &options);
void ApplyInPlace(ParserConfiguration *config, const Action &action,
                  const TransitionOptions &options);

// Gold annotation consumed by the oracle, in id space.
struct GoldTree {
  std::vector<int> heads;   // indexed by token, element 0 unused
  std::vector<int> labels;  // label ids
  std::vector<int> tags;    // tag ids (joint system)

  int num_tokens() const { return static_cast<int>(heads.size()) - 1; }
};

// Rank of every token in the in-order traversal of the tree (children in
// surface order, the head between its left and right dependents). Element 0
// is unused.
std::vector<int> ProjectiveOrder(std::span<const int> heads);

// Static oracle with eager SWAP. `projective_order` may be empty when SWAP
// is disabled. Throws TransitionError when no action leads to the gold tree.
Action Oracle(const ParserConfiguration &config, const GoldTree &gold,
              std::span<const int> projective_order,
              const TransitionOptions &options);

struct DerivationStep {
  ParserConfiguration config;  // state before the action
  Action action;
};

struct Derivation {
  std::vector<DerivationStep> steps;
};

// Unrolls the gold tree into (configuration, action) pairs.
Derivation Unroll(const GoldTree &gold, const TransitionOptions &options);

// Replays the actions of a derivation from the initial configuration.
ParserConfiguration Replay(int num_tokens, const Derivation &derivation,
                           const TransitionOptions &options);

// Line-oriented dump: one step per line, "ACTION[ arg]\tstack=[...]\t
// buffer=[...]". Labels and tags are printed by name when vocabularies are
// given.
std::string DumpDerivation(const Derivation &derivation,
                           const Vocabulary *labels = nullptr,
                           const Vocabulary *tags = nullptr);

// Maps actions to dense output ids of the parser network.
//   plain:  SHIFT, LEFT_ARC(0..L-1), RIGHT_ARC(0..L-1) [, SWAP]
//   joint:  SHIFT_TAG(0..T-1), LEFT_ARC(...), RIGHT_ARC(...) [, SWAP]
class ActionSpace {
 public:
  ActionSpace() = default;
  ActionSpace(int num_labels, int num_tags, const TransitionOptions &options);

  int size() const { return size_; }
  int Encode(const Action &action) const;
  Action Decode(int id) const;
  bool IsLegal(int id, const LegalActions &legal) const;

  int num_labels() const { return num_labels_; }
  int num_tags() const { return num_tags_; }
  const TransitionOptions &options() const { return options_; }

 private:
  int num_labels_ = 0;
  int num_tags_ = 0;
  TransitionOptions options_;
  int shift_base_ = 0;
  int num_shift_ = 1;
  int left_base_ = 0;
  int right_base_ = 0;
  int swap_id_ = -1;
  int size_ = 0;
};

// Greedy decoding with an arbitrary scorer over action ids. Illegal actions
// are masked; ties go to the lowest id. SWAP is limited to n applications per
// sentence, which bounds the derivation at 4n steps.
using ActionScorer =
    std::function<void(const ParserConfiguration &, std::vector<double> *)>;
ParserConfiguration GreedyDecode(int num_tokens, const ActionSpace &space,
                                 const ActionScorer &scorer,
                                 int *num_steps = nullptr);

}  // namespace stackprop

#endif  // STACKPROP_TRANSITION_SYSTEM_H_
