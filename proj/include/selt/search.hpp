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
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "selt/clustering.hpp"
#include "selt/oracle.hpp"
#include "selt/prompts.hpp"
#include "selt/random.hpp"
#include "selt/scoring.hpp"
#include "selt/tree.hpp"

namespace selt {

enum class Granularity {
  kSentence,  // each edge appends one reasoning sentence
  kResponse,  // each edge refines the whole previous response
};

std::string_view to_string(Granularity g);
std::optional<Granularity> parse_granularity(std::string_view s);

inline constexpr std::size_t kSentenceDepthCap = 10;
inline constexpr std::size_t kResponseDepthCap = 4;

inline std::size_t default_depth_cap(Granularity g) {
  return g == Granularity::kSentence ? kSentenceDepthCap : kResponseDepthCap;
}

struct SearchConfig {
  std::size_t steps = 100;
  ScoreParams score_params;
  Granularity granularity = Granularity::kSentence;
  std::size_t depth_cap = kSentenceDepthCap;
  double descend_probability = 0.5;
  std::uint64_t rng_seed = 0;
  std::string answer_marker = std::string(kDefaultAnswerMarker);
  // Duplicate expansions restart selection from the root; past this many
  // restarts in one iteration, selection only descends.
  std::size_t max_restarts = 10;
  std::size_t max_tokens = 512;

  void validate() const;
  TerminalRule terminal_rule() const;
};

struct IterationLog {
  std::size_t iter = 0;
  NodeId selected_node;
  double delta = 0.0;
  std::size_t restarts = 0;
  std::size_t num_clusters = 0;
};

// One search run: owns the tree and RNG; borrows the oracle and prompts.
class Search {
 public:
  Search(NodeState root_state, SearchConfig config, Oracle& oracle,
         const PromptLibrary& prompts);

  // Selection and expansion from v0. Returns the node to simulate.
  NodeId tree_policy(NodeId v0);

  // Generates one step (or refined response) under v. A result that matches
  // an existing child after whitespace normalization returns that child.
  NodeId expand(NodeId v);

  // Rolls v's state forward to an answer, stores it on v, and returns the
  // evaluator's score against the references. Terminal nodes that already
  // hold an answer are re-scored without regenerating.
  double default_policy(NodeId v, std::span<const std::string> references);

  void backup(NodeId v, double delta) { tree_.backup(v, delta); }

  // Current cluster representatives' answers; empty while fewer than two
  // answers exist.
  std::vector<std::string> refresh_references(std::size_t& num_clusters);

  // One full iteration: select, cluster, simulate, back up.
  const IterationLog& iterate();
  void run();

  // ScoreParams with mu_tree taken from the tree right now.
  ScoreParams live_params(std::optional<double> c_p = std::nullopt) const;

  const Tree& tree() const { return tree_; }
  Tree& tree() { return tree_; }
  Tree take_tree() && { return std::move(tree_); }
  const std::vector<IterationLog>& log() const { return log_; }
  std::vector<IterationLog> take_log() && { return std::move(log_); }
  Rng& rng() { return rng_; }
  const SearchConfig& config() const { return config_; }
  std::size_t last_restarts() const { return restarts_; }

 private:
  OracleRequest request_for(const NodeState& state, Purpose purpose) const;
  std::string rollout(const NodeState& state);

  SearchConfig config_;
  Tree tree_;
  Oracle& oracle_;
  const PromptLibrary& prompts_;
  Rng rng_;
  std::vector<IterationLog> log_;
  std::size_t restarts_ = 0;
};

struct SearchResult {
  Tree tree;
  std::vector<IterationLog> log;
};

SearchResult run_search(NodeState root_state, const SearchConfig& config,
                        Oracle& oracle, const PromptLibrary& prompts);

struct LeafAnswer {
  NodeId node;
  std::string answer;
};

// Greedy descent with c_p = 0 under the configured variant until a terminal
// or childless node. Throws kNoAnswer if that node was never simulated.
LeafAnswer best_leaf(const Tree& tree, const ScoreParams& params);

}  // namespace selt
