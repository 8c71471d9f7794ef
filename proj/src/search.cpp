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

#include "selt/search.hpp"

#include <string>

#include "selt/error.hpp"

namespace selt {

std::string_view to_string(Granularity g) {
  return g == Granularity::kSentence ? "sentence" : "response";
}

std::optional<Granularity> parse_granularity(std::string_view s) {
  if (s == "sentence") return Granularity::kSentence;
  if (s == "response") return Granularity::kResponse;
  return std::nullopt;
}

void SearchConfig::validate() const {
  if (steps < 1) throw Error(ErrorKind::kInvalidArgument, "steps must be >= 1");
  if (!(descend_probability >= 0.0 && descend_probability <= 1.0)) {
    throw Error(ErrorKind::kInvalidArgument, "descend_probability must be in [0,1]");
  }
  if (depth_cap < 1) throw Error(ErrorKind::kInvalidArgument, "depth_cap must be >= 1");
  if (score_params.c_p < 0.0 || score_params.c_beta < 0.0) {
    throw Error(ErrorKind::kInvalidArgument, "c_p and c_beta must be non-negative");
  }
}

TerminalRule SearchConfig::terminal_rule() const {
  TerminalRule rule;
  rule.depth_cap = depth_cap;
  rule.answer_marker = answer_marker;
  rule.marker_ends_path = granularity == Granularity::kSentence;
  return rule;
}

namespace {

SearchConfig validated(SearchConfig config) {
  config.validate();
  return config;
}

}  // namespace

Search::Search(NodeState root_state, SearchConfig config, Oracle& oracle,
               const PromptLibrary& prompts)
    : config_(validated(std::move(config))),
      tree_(std::move(root_state), config_.terminal_rule()),
      oracle_(oracle),
      prompts_(prompts),
      rng_(config_.rng_seed) {}

ScoreParams Search::live_params(std::optional<double> c_p) const {
  ScoreParams p = config_.score_params;
  p.mu_tree = tree_mean(tree_);
  if (c_p) p.c_p = *c_p;
  return p;
}

OracleRequest Search::request_for(const NodeState& state, Purpose purpose) const {
  OracleRequest req;
  req.prompt = prompts_.build_prompt(state, purpose);
  req.temperature = kGenerateTemperature;
  req.max_tokens = config_.max_tokens;
  req.path = state.reasoning_path;
  if (config_.granularity == Granularity::kSentence) {
    req.continuation = Continuation::kStep;
    req.stop = {"\n"};
  } else {
    req.continuation = Continuation::kFull;
  }
  return req;
}

NodeId Search::tree_policy(NodeId v0) {
  restarts_ = 0;
  NodeId v = v0;
  while (!tree_.is_terminal(v)) {
    if (tree_.node(v).children.empty()) return expand(v);
    if (uniform01(rng_) < config_.descend_probability) {
      v = best_child(tree_, v, live_params());
    } else if (!tree_.is_fully_expanded(v) && restarts_ < config_.max_restarts) {
      const NodeId w = expand(v);
      if (tree_.node(w).visits == 0) return w;
      ++restarts_;
      v = v0;
    } else {
      v = best_child(tree_, v, live_params());
    }
  }
  return v;
}

NodeId Search::expand(NodeId v) {
  if (tree_.is_fully_expanded(v)) {
    throw Error(tree_.is_terminal(v) ? ErrorKind::kTerminalParent
                                     : ErrorKind::kFullyExpanded,
                "cannot expand node " + std::to_string(v.value));
  }
  const NodeState& state = tree_.node(v).state;
  std::string text = normalize_whitespace(
      oracle_.generate(request_for(state, Purpose::kExpand)));
  if (text.empty()) throw Error(ErrorKind::kOracleEmpty, "blank expansion");
  for (NodeId c : tree_.node(v).children) {
    if (normalize_whitespace(tree_.node(c).step_text) == text) return c;
  }
  return tree_.add_child(v, std::move(text));
}

std::string Search::rollout(const NodeState& start) {
  if (start.terminal) {
    // Freshly created terminal: its own path is the answer.
    return config_.granularity == Granularity::kSentence
               ? join_path(start.reasoning_path)
               : start.reasoning_path.back();
  }
  if (config_.granularity == Granularity::kResponse) {
    std::string text = oracle_.generate(request_for(start, Purpose::kSimulate));
    if (normalize_whitespace(text).empty()) {
      throw Error(ErrorKind::kOracleEmpty, "blank rollout");
    }
    return text;
  }
  NodeState s = start;
  const TerminalRule& rule = tree_.rule();
  while (!s.terminal) {
    std::string step = normalize_whitespace(
        oracle_.generate(request_for(s, Purpose::kSimulate)));
    if (step.empty()) throw Error(ErrorKind::kOracleEmpty, "blank rollout step");
    s.depth += 1;
    s.terminal = rule.is_terminal_step(step, s.depth);
    s.reasoning_path.push_back(std::move(step));
  }
  return join_path(s.reasoning_path);
}

double Search::default_policy(NodeId v, std::span<const std::string> references) {
  const Node& n = tree_.node(v);
  std::string answer;
  if (n.state.terminal && n.state.simulated_answer) {
    answer = *n.state.simulated_answer;
  } else {
    answer = rollout(n.state);
    tree_.set_answer(v, answer);
  }
  return oracle_.evaluate(answer, references).value();
}

std::vector<std::string> Search::refresh_references(std::size_t& num_clusters) {
  num_clusters = 0;
  std::size_t answered = 0;
  for (const Node& n : tree_.nodes()) answered += n.state.simulated_answer ? 1 : 0;
  if (answered < 2) return {};
  const Clustering c = cluster_answers(tree_, rng_);
  num_clusters = c.k;
  std::vector<std::string> refs;
  refs.reserve(c.representatives.size());
  for (NodeId r : c.representatives) refs.push_back(*tree_.node(r).state.simulated_answer);
  return refs;
}

const IterationLog& Search::iterate() {
  const std::size_t iter = log_.size();
  try {
    IterationLog entry;
    entry.iter = iter;
    entry.selected_node = tree_policy(tree_.root());
    entry.restarts = restarts_;
    const auto refs = refresh_references(entry.num_clusters);
    entry.delta = default_policy(entry.selected_node, refs);
    backup(entry.selected_node, entry.delta);
    log_.push_back(entry);
  } catch (const Error& e) {
    throw Error(e.kind(), "iteration " + std::to_string(iter) + ": " + e.what());
  }
  return log_.back();
}

void Search::run() {
  while (log_.size() < config_.steps) iterate();
}

SearchResult run_search(NodeState root_state, const SearchConfig& config,
                        Oracle& oracle, const PromptLibrary& prompts) {
  Search search(std::move(root_state), config, oracle, prompts);
  search.run();
  auto log = search.log();
  return SearchResult{std::move(search).take_tree(), std::move(log)};
}

LeafAnswer best_leaf(const Tree& tree, const ScoreParams& params) {
  if (tree.node(tree.root()).children.empty()) {
    throw Error(ErrorKind::kNoChildren, "root has no children");
  }
  ScoreParams greedy = params;
  greedy.c_p = 0.0;
  greedy.mu_tree = tree_mean(tree);
  NodeId v = tree.root();
  while (!tree.is_terminal(v) && !tree.node(v).children.empty()) {
    v = best_child(tree, v, greedy);
  }
  const auto& answer = tree.node(v).state.simulated_answer;
  if (!answer) {
    throw Error(ErrorKind::kNoAnswer, "node " + std::to_string(v.value) +
                                          " was never simulated");
  }
  return {v, *answer};
}

}  // namespace selt
