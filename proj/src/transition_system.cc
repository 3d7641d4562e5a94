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

#include "stackprop/transition_system.h"

#include <algorithm>
#include <limits>
#include <sstream>

#include "stackprop/errors.h"

namespace stackprop {

namespace {

std::string ActionString(const Action &action) {
  std::string out = ActionKindName(action.kind);
  if (action.label >= 0) out += "(" + std::to_string(action.label) + ")";
  if (action.tag >= 0) out += "(" + std::to_string(action.tag) + ")";
  return out;
}

template <typename Container>
std::string JoinIndices(const Container &items) {
  std::string out = "[";
  bool first = true;
  for (int item : items) {
    if (!first) out += ",";
    out += std::to_string(item);
    first = false;
  }
  return out + "]";
}

// True when every gold dependent of `token` is already attached.
bool HasAllDependents(const ParserConfiguration &config, const GoldTree &gold,
                      int token) {
  const int n = gold.num_tokens();
  for (int d = 1; d <= n; ++d) {
    if (gold.heads[d] == token && config.Head(d) != token) return false;
  }
  return true;
}

void InOrder(int node, const std::vector<std::vector<int>> &children,
             std::vector<int> *order, int *next_rank) {
  const std::vector<int> &kids = children[node];
  size_t i = 0;
  for (; i < kids.size() && kids[i] < node; ++i) {
    InOrder(kids[i], children, order, next_rank);
  }
  if (node != kRootIndex) (*order)[node] = (*next_rank)++;
  for (; i < kids.size(); ++i) InOrder(kids[i], children, order, next_rank);
}

}  // namespace

const char *ActionKindName(ActionKind kind) {
  switch (kind) {
    case ActionKind::kShift:
      return "SHIFT";
    case ActionKind::kLeftArc:
      return "LEFT_ARC";
    case ActionKind::kRightArc:
      return "RIGHT_ARC";
    case ActionKind::kSwap:
      return "SWAP";
    case ActionKind::kShiftTag:
      return "SHIFT_TAG";
  }
  return "?";
}

ParserConfiguration ParserConfiguration::Initial(int num_tokens) {
  if (num_tokens < 1) {
    throw TransitionError("cannot build a configuration for an empty sentence");
  }
  ParserConfiguration config;
  config.num_tokens_ = num_tokens;
  config.stack_.push_back(kRootIndex);
  for (int i = 1; i <= num_tokens; ++i) config.buffer_.push_back(i);
  config.heads_.assign(num_tokens + 1, -1);
  config.labels_.assign(num_tokens + 1, -1);
  config.tags_.assign(num_tokens + 1, -1);
  return config;
}

int ParserConfiguration::Stack(int i) const {
  if (i < 0 || i >= static_cast<int>(stack_.size())) return -1;
  return stack_[stack_.size() - 1 - i];
}

int ParserConfiguration::Buffer(int i) const {
  if (i < 0 || i >= static_cast<int>(buffer_.size())) return -1;
  return buffer_[i];
}

int ParserConfiguration::LeftChild(int token, int rank) const {
  if (token < 0) return -1;
  int found = 0;
  for (int d = 1; d < token; ++d) {
    if (heads_[d] == token && ++found == rank) return d;
  }
  return -1;
}

int ParserConfiguration::RightChild(int token, int rank) const {
  if (token < 0) return -1;
  int found = 0;
  for (int d = num_tokens_; d > token; --d) {
    if (heads_[d] == token && ++found == rank) return d;
  }
  return -1;
}

std::vector<Arc> ParserConfiguration::Arcs() const { return arcs_; }

std::string ParserConfiguration::DebugString() const {
  return "stack=" + JoinIndices(stack_) + "\tbuffer=" + JoinIndices(buffer_);
}

LegalActions GetLegalActions(const ParserConfiguration &config,
                             const TransitionOptions &options) {
  LegalActions legal;
  legal.shift = !config.buffer().empty();
  if (config.stack().size() >= 2) {
    const int s0 = config.Stack(0);
    const int s1 = config.Stack(1);
    legal.left_arc = s1 != kRootIndex;
    legal.right_arc = s1 != kRootIndex || config.buffer().empty();
    legal.swap = options.swap && s1 != kRootIndex && s1 < s0;
  }
  return legal;
}

bool IsLegal(const ParserConfiguration &config, const Action &action,
             const TransitionOptions &options) {
  const LegalActions legal = GetLegalActions(config, options);
  switch (action.kind) {
    case ActionKind::kShift:
      return !options.joint && legal.shift;
    case ActionKind::kShiftTag:
      return options.joint && legal.shift && action.tag >= 0;
    case ActionKind::kLeftArc:
      return legal.left_arc && action.label >= 0;
    case ActionKind::kRightArc:
      return legal.right_arc && action.label >= 0;
    case ActionKind::kSwap:
      return legal.swap;
  }
  return false;
}

void ApplyInPlace(ParserConfiguration *config, const Action &action,
                  const TransitionOptions &options) {
  if (!IsLegal(*config, action, options)) {
    throw TransitionError("illegal action " + ActionString(action) + " in " +
                          config->DebugString());
  }
  ParserConfiguration &c = *config;
  switch (action.kind) {
    case ActionKind::kShiftTag:
      c.tags_[c.buffer_.front()] = action.tag;
      [[fallthrough]];
    case ActionKind::kShift:
      c.stack_.push_back(c.buffer_.front());
      c.buffer_.pop_front();
      break;
    case ActionKind::kLeftArc: {
      const int s0 = c.stack_.back();
      const int s1 = c.stack_[c.stack_.size() - 2];
      c.heads_[s1] = s0;
      c.labels_[s1] = action.label;
      c.arcs_.push_back({s0, action.label, s1});
      c.stack_.erase(c.stack_.end() - 2);
      break;
    }
    case ActionKind::kRightArc: {
      const int s0 = c.stack_.back();
      const int s1 = c.stack_[c.stack_.size() - 2];
      c.heads_[s0] = s1;
      c.labels_[s0] = action.label;
      c.arcs_.push_back({s1, action.label, s0});
      c.stack_.pop_back();
      break;
    }
    case ActionKind::kSwap: {
      const int s1 = c.stack_[c.stack_.size() - 2];
      c.stack_.erase(c.stack_.end() - 2);
      c.buffer_.push_front(s1);
      ++c.num_swaps_;
      break;
    }
  }
}

ParserConfiguration Apply(const ParserConfiguration &config,
                          const Action &action,
                          const TransitionOptions &options) {
  ParserConfiguration next = config;
  ApplyInPlace(&next, action, options);
  return next;
}

std::vector<int> ProjectiveOrder(std::span<const int> heads) {
  const int n = static_cast<int>(heads.size()) - 1;
  std::vector<std::vector<int>> children(n + 1);
  for (int d = 1; d <= n; ++d) children[heads[d]].push_back(d);
  std::vector<int> order(n + 1, 0);
  int next_rank = 1;
  InOrder(kRootIndex, children, &order, &next_rank);
  return order;
}

Action Oracle(const ParserConfiguration &config, const GoldTree &gold,
              std::span<const int> projective_order,
              const TransitionOptions &options) {
  if (config.stack().size() >= 2) {
    const int s0 = config.Stack(0);
    const int s1 = config.Stack(1);
    if (s1 != kRootIndex && gold.heads[s1] == s0 &&
        HasAllDependents(config, gold, s1)) {
      return Action::LeftArc(gold.labels[s1]);
    }
    if (gold.heads[s0] == s1 && HasAllDependents(config, gold, s0)) {
      return Action::RightArc(gold.labels[s0]);
    }
    if (options.swap && s1 != kRootIndex && !projective_order.empty() &&
        projective_order[s0] < projective_order[s1]) {
      return Action::Swap();
    }
  }
  if (!config.buffer().empty()) {
    if (options.joint) return Action::ShiftTag(gold.tags[config.Buffer(0)]);
    return Action::Shift();
  }
  throw TransitionError("no oracle action applies in " + config.DebugString() +
                        (options.swap ? "" : " (non-projective tree?)"));
}

Derivation Unroll(const GoldTree &gold, const TransitionOptions &options) {
  const int n = gold.num_tokens();
  std::vector<int> order;
  if (options.swap) order = ProjectiveOrder(gold.heads);
  Derivation derivation;
  ParserConfiguration config = ParserConfiguration::Initial(n);
  // Each token is shifted at most once per swap it takes part in.
  const int max_steps = 2 * n + n * (n - 1) + 1;
  while (!config.IsTerminal()) {
    if (static_cast<int>(derivation.steps.size()) > max_steps) {
      throw TransitionError("oracle did not terminate");
    }
    const Action action = Oracle(config, gold, order, options);
    derivation.steps.push_back({config, action});
    ApplyInPlace(&config, action, options);
  }
  for (int d = 1; d <= n; ++d) {
    if (config.Head(d) != gold.heads[d] || config.Label(d) != gold.labels[d]) {
      throw TransitionError("oracle derivation does not reproduce token " +
                            std::to_string(d));
    }
  }
  return derivation;
}

ParserConfiguration Replay(int num_tokens, const Derivation &derivation,
                           const TransitionOptions &options) {
  ParserConfiguration config = ParserConfiguration::Initial(num_tokens);
  for (const DerivationStep &step : derivation.steps) {
    ApplyInPlace(&config, step.action, options);
  }
  return config;
}

std::string DumpDerivation(const Derivation &derivation,
                           const Vocabulary *labels, const Vocabulary *tags) {
  std::ostringstream out;
  for (const DerivationStep &step : derivation.steps) {
    out << ActionKindName(step.action.kind);
    if (step.action.label >= 0) {
      out << ' '
          << (labels ? labels->Name(step.action.label)
                     : std::to_string(step.action.label));
    }
    if (step.action.tag >= 0) {
      out << ' '
          << (tags ? tags->Name(step.action.tag)
                   : std::to_string(step.action.tag));
    }
    out << '\t' << step.config.DebugString() << '\n';
  }
  return out.str();
}

ActionSpace::ActionSpace(int num_labels, int num_tags,
                         const TransitionOptions &options)
    : num_labels_(num_labels), num_tags_(num_tags), options_(options) {
  num_shift_ = options.joint ? num_tags : 1;
  shift_base_ = 0;
  left_base_ = num_shift_;
  right_base_ = left_base_ + num_labels;
  size_ = right_base_ + num_labels;
  if (options.swap) swap_id_ = size_++;
}

int ActionSpace::Encode(const Action &action) const {
  switch (action.kind) {
    case ActionKind::kShift:
      return shift_base_;
    case ActionKind::kShiftTag:
      return shift_base_ + action.tag;
    case ActionKind::kLeftArc:
      return left_base_ + action.label;
    case ActionKind::kRightArc:
      return right_base_ + action.label;
    case ActionKind::kSwap:
      return swap_id_;
  }
  return -1;
}

Action ActionSpace::Decode(int id) const {
  if (id == swap_id_) return Action::Swap();
  if (id >= right_base_) return Action::RightArc(id - right_base_);
  if (id >= left_base_) return Action::LeftArc(id - left_base_);
  return options_.joint ? Action::ShiftTag(id - shift_base_) : Action::Shift();
}

bool ActionSpace::IsLegal(int id, const LegalActions &legal) const {
  if (id == swap_id_) return legal.swap;
  if (id >= right_base_) return legal.right_arc;
  if (id >= left_base_) return legal.left_arc;
  return legal.shift;
}

ParserConfiguration GreedyDecode(int num_tokens, const ActionSpace &space,
                                 const ActionScorer &scorer, int *num_steps) {
  ParserConfiguration config = ParserConfiguration::Initial(num_tokens);
  std::vector<double> scores(space.size());
  int steps = 0;
  while (!config.IsTerminal()) {
    LegalActions legal = GetLegalActions(config, space.options());
    if (config.num_swaps() >= num_tokens) legal.swap = false;
    scorer(config, &scores);
    int best = -1;
    double best_score = -std::numeric_limits<double>::infinity();
    for (int id = 0; id < space.size(); ++id) {
      if (!space.IsLegal(id, legal)) continue;
      if (best < 0 || scores[id] > best_score) {
        best = id;
        best_score = scores[id];
      }
    }
    if (best < 0) {
      throw TransitionError("no legal action before terminal state in " +
                            config.DebugString());
    }
    ApplyInPlace(&config, space.Decode(best), space.options());
    ++steps;
  }
  if (num_steps != nullptr) *num_steps = steps;
  return config;
}

}  // namespace stackprop
