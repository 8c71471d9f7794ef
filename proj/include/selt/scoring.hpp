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

#include <cmath>
#include <cstdint>
#include <optional>
#include <string_view>

#include "selt/tree.hpp"

namespace selt {

enum class ScoreVariant { kRaw, kAlpha, kBeta, kAlphaBeta };

std::string_view to_string(ScoreVariant v);
std::optional<ScoreVariant> parse_score_variant(std::string_view s);

struct ScoreParams {
  ScoreVariant variant = ScoreVariant::kAlphaBeta;
  double c_p = std::sqrt(2.0);  // exploration constant
  double c_beta = 2.0;          // Bayesian prior strength
  double mu_tree = 0.5;         // tree-wide mean reward
};

inline constexpr double kNeutralPrior = 0.5;

// Mean of every reward backed up so far; kNeutralPrior for an empty tree.
double tree_mean(const Tree& tree);

// Bayesian-averaged mean: shrinks Q/N toward mu with strength c_beta.
// Defined at N == 0, where it returns mu exactly.
double bayes_exploit(double q, std::uint64_t n, double mu, double c_beta);

// Exploitation and exploration halves, exposed separately for tests that
// need to reason about each term.
double exploit_term(double q, std::uint64_t n, const ScoreParams& params);
double explore_term(std::uint64_t n, std::uint64_t parent_n,
                    const ScoreParams& params);

// Full selection score of a child with cumulative reward q and n visits
// under a parent with parent_n visits. Throws kInvalidCounts if n > parent_n.
double uct_score(double q, std::uint64_t n, std::uint64_t parent_n,
                 const ScoreParams& params);

// Argmax of uct_score over v's children; ties go to the earlier child.
NodeId best_child(const Tree& tree, NodeId v, const ScoreParams& params);

}  // namespace selt
