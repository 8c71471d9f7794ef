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

#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "selt/task.hpp"

namespace selt {

// Dense index into a Tree's node arena. Ids are never reused; the root is 0.
struct NodeId {
  std::uint32_t value = 0;

  friend bool operator==(NodeId, NodeId) = default;
  friend auto operator<=>(NodeId, NodeId) = default;
};

inline constexpr std::size_t kMaxChildren = 2;
inline constexpr std::string_view kDefaultAnswerMarker = "Final Answer:";

// Question-level material shared by every node of a tree.
struct PromptContext {
  std::string question;
  std::string examples;  // few-shot demonstrations
};

struct NodeState {
  std::shared_ptr<const PromptContext> context;
  std::vector<std::string> reasoning_path;
  std::optional<std::string> simulated_answer;
  TaskType task_type = TaskType::kSA;
  InferenceMode inference_mode = InferenceMode::kThink;
  std::size_t depth = 0;
  bool terminal = false;

  const std::string& question() const;
  const std::string& examples() const;
};

NodeState make_root_state(std::string question, std::string examples,
                          TaskType task, InferenceMode mode);

struct Node {
  std::optional<NodeId> parent;
  std::vector<NodeId> children;
  std::string step_text;  // step that produced this node; empty for the root
  std::uint64_t visits = 0;
  double reward = 0.0;
  std::vector<double> reward_list;
  NodeState state;
};

// Rules that decide when a freshly created node is terminal.
struct TerminalRule {
  std::size_t depth_cap = 10;
  std::string answer_marker = std::string(kDefaultAnswerMarker);
  // Response-level trees refine whole drafts that always carry the marker,
  // so only the depth cap ends them.
  bool marker_ends_path = true;

  bool is_terminal_step(std::string_view step, std::size_t depth) const;
};

class Tree {
 public:
  Tree(NodeState root_state, TerminalRule rule = {});

  NodeId root() const { return NodeId{0}; }
  std::size_t size() const { return nodes_.size(); }
  const Node& node(NodeId id) const;
  Node& node(NodeId id);
  bool contains(NodeId id) const { return id.value < nodes_.size(); }
  const std::vector<Node>& nodes() const { return nodes_; }
  const TerminalRule& rule() const { return rule_; }

  NodeId add_child(NodeId parent, std::string step_text);
  bool is_terminal(NodeId v) const;
  bool is_fully_expanded(NodeId v) const;

  // Q(v)/N(v), or `unvisited_fallback` when N(v) == 0.
  double mean_reward(NodeId v, double unvisited_fallback) const;

  // Walks v -> root adding delta to every node on the path.
  void backup(NodeId v, double delta);

  void set_answer(NodeId v, std::string answer);

  double total_reward() const { return total_reward_; }
  std::uint64_t total_backups() const { return total_backups_; }

 private:
  std::vector<Node> nodes_;
  TerminalRule rule_;
  double total_reward_ = 0.0;
  std::uint64_t total_backups_ = 0;
};

// Collapses runs of whitespace and trims; used to detect duplicate siblings.
std::string normalize_whitespace(std::string_view text);

}  // namespace selt
