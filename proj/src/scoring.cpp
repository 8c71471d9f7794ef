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

#include "selt/scoring.hpp"

#include <limits>
#include <string>

#include "selt/error.hpp"

namespace selt {

std::string_view to_string(ScoreVariant v) {
  switch (v) {
    case ScoreVariant::kRaw: return "raw";
    case ScoreVariant::kAlpha: return "alpha";
    case ScoreVariant::kBeta: return "beta";
    case ScoreVariant::kAlphaBeta: return "alpha_beta";
  }
  return "raw";
}

std::optional<ScoreVariant> parse_score_variant(std::string_view s) {
  if (s == "raw") return ScoreVariant::kRaw;
  if (s == "alpha") return ScoreVariant::kAlpha;
  if (s == "beta") return ScoreVariant::kBeta;
  if (s == "alpha_beta") return ScoreVariant::kAlphaBeta;
  return std::nullopt;
}

double tree_mean(const Tree& tree) {
  if (tree.total_backups() == 0) return kNeutralPrior;
  return tree.total_reward() / static_cast<double>(tree.total_backups());
}

double bayes_exploit(double q, std::uint64_t n, double mu, double c_beta) {
  return (mu * c_beta + q) / (c_beta + static_cast<double>(n));
}

double exploit_term(double q, std::uint64_t n, const ScoreParams& params) {
  switch (params.variant) {
    case ScoreVariant::kAlpha:
    case ScoreVariant::kAlphaBeta:
      if (n == 0 && params.c_beta == 0.0) return params.mu_tree;
      return bayes_exploit(q, n, params.mu_tree, params.c_beta);
    case ScoreVariant::kRaw:
    case ScoreVariant::kBeta:
      break;
  }
  if (n == 0) return params.mu_tree;
  return q / static_cast<double>(n);
}

double explore_term(std::uint64_t n, std::uint64_t parent_n,
                    const ScoreParams& params) {
  if (params.c_p == 0.0) return 0.0;
  switch (params.variant) {
    case ScoreVariant::kBeta:
    case ScoreVariant::kAlphaBeta: {
      // Child count in both places; ln(1) = 0 and N = 0 contributes nothing.
      if (n <= 1) return 0.0;
      const double dn = static_cast<double>(n);
      return params.c_p * std::sqrt(2.0 * std::log(dn) / dn);
    }
    case ScoreVariant::kRaw:
    case ScoreVariant::kAlpha:
      break;
  }
  if (n == 0) return std::numeric_limits<double>::infinity();
  return params.c_p * std::sqrt(2.0 * std::log(static_cast<double>(parent_n)) /
                                static_cast<double>(n));
}

double uct_score(double q, std::uint64_t n, std::uint64_t parent_n,
                 const ScoreParams& params) {
  if (n > parent_n) {
    throw Error(ErrorKind::kInvalidCounts,
                "child visits " + std::to_string(n) + " exceed parent visits " +
                    std::to_string(parent_n));
  }
  return exploit_term(q, n, params) + explore_term(n, parent_n, params);
}

NodeId best_child(const Tree& tree, NodeId v, const ScoreParams& params) {
  const Node& parent = tree.node(v);
  if (parent.children.empty()) {
    throw Error(ErrorKind::kNoChildren,
                "node " + std::to_string(v.value) + " has no children");
  }
  NodeId best = parent.children.front();
  double best_score = -std::numeric_limits<double>::infinity();
  for (NodeId c : parent.children) {
    const Node& child = tree.node(c);
    const double s = uct_score(child.reward, child.visits, parent.visits, params);
    if (s > best_score) {
      best_score = s;
      best = c;
    }
  }
  return best;
}

}  // namespace selt
