// Copyright 2026 The SELT Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "selt/tree.hpp"

#include <cctype>
#include <utility>

#include "selt/error.hpp"

namespace selt {

namespace {
const std::string kEmpty;
}  // namespace

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kFullyExpanded: return "FullyExpanded";
    case ErrorKind::kTerminalParent: return "TerminalParent";
    case ErrorKind::kUnknownNode: return "UnknownNode";
    case ErrorKind::kInvalidCounts: return "InvalidCounts";
    case ErrorKind::kNoChildren: return "NoChildren";
    case ErrorKind::kRestartLimit: return "RestartLimit";
    case ErrorKind::kNoAnswer: return "NoAnswer";
    case ErrorKind::kEmptyVocabulary: return "EmptyVocabulary";
    case ErrorKind::kEigenFailure: return "EigenFailure";
    case ErrorKind::kInvalidArgument: return "InvalidArgument";
    case ErrorKind::kOracleUnavailable: return "OracleUnavailable";
    case ErrorKind::kOracleEmpty: return "OracleEmpty";
    case ErrorKind::kOracleScoreParse: return "OracleScoreParse";
    case ErrorKind::kMissingTemplate: return "MissingTemplate";
    case ErrorKind::kMissingPlaceholder: return "MissingPlaceholder";
    case ErrorKind::kParseError: return "ParseError";
    case ErrorKind::kIoError: return "IoError";
  }
  return "Unknown";
}

const std::string& NodeState::question() const {
  return context ? context->question : kEmpty;
}

const std::string& NodeState::examples() const {
  return context ? context->examples : kEmpty;
}

NodeState make_root_state(std::string question, std::string examples,
                          TaskType task, InferenceMode mode) {
  NodeState s;
  s.context = std::make_shared<const PromptContext>(
      PromptContext{std::move(question), std::move(examples)});
  s.task_type = task;
  s.inference_mode = mode;
  return s;
}

bool TerminalRule::is_terminal_step(std::string_view step,
                                    std::size_t depth) const {
  if (depth >= depth_cap) return true;
  return marker_ends_path && !answer_marker.empty() &&
         step.find(answer_marker) != std::string_view::npos;
}

Tree::Tree(NodeState root_state, TerminalRule rule) : rule_(std::move(rule)) {
  if (root_state.depth != 0 || !root_state.reasoning_path.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "root state must have depth 0");
  }
  root_state.terminal = false;
  Node root;
  root.state = std::move(root_state);
  nodes_.push_back(std::move(root));
}

const Node& Tree::node(NodeId id) const {
  if (!contains(id)) {
    throw Error(ErrorKind::kUnknownNode, "node " + std::to_string(id.value));
  }
  return nodes_[id.value];
}

Node& Tree::node(NodeId id) {
  return const_cast<Node&>(std::as_const(*this).node(id));
}

NodeId Tree::add_child(NodeId parent, std::string step_text) {
  const Node& p = node(parent);
  if (p.state.terminal) {
    throw Error(ErrorKind::kTerminalParent,
                "node " + std::to_string(parent.value) + " is terminal");
  }
  if (p.children.size() >= kMaxChildren) {
    throw Error(ErrorKind::kFullyExpanded,
                "node " + std::to_string(parent.value) + " has 2 children");
  }

  Node child;
  child.parent = parent;
  child.state = p.state;
  child.state.simulated_answer.reset();
  child.state.reasoning_path.push_back(step_text);
  child.state.depth = p.state.depth + 1;
  child.state.terminal = rule_.is_terminal_step(step_text, child.state.depth);
  child.step_text = std::move(step_text);

  const NodeId id{static_cast<std::uint32_t>(nodes_.size())};
  nodes_.push_back(std::move(child));
  nodes_[parent.value].children.push_back(id);
  return id;
}

bool Tree::is_terminal(NodeId v) const { return node(v).state.terminal; }

bool Tree::is_fully_expanded(NodeId v) const {
  const Node& n = node(v);
  return n.state.terminal || n.children.size() >= kMaxChildren;
}

double Tree::mean_reward(NodeId v, double unvisited_fallback) const {
  const Node& n = node(v);
  if (n.visits == 0) return unvisited_fallback;
  return n.reward / static_cast<double>(n.visits);
}

void Tree::backup(NodeId v, double delta) {
  std::optional<NodeId> cur = v;
  node(v);  // bounds check before mutating anything
  while (cur) {
    Node& n = nodes_[cur->value];
    n.visits += 1;
    n.reward += delta;
    n.reward_list.push_back(delta);
    cur = n.parent;
  }
  total_reward_ += delta;
  total_backups_ += 1;
}

void Tree::set_answer(NodeId v, std::string answer) {
  node(v).state.simulated_answer = std::move(answer);
}

std::string normalize_whitespace(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(c);
  }
  return out;
}

}  // namespace selt
