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

// Test-only oracles and helpers. Nothing here calls into the code paths it
// is used to check.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <functional>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "selt/oracle.hpp"
#include "selt/prompts.hpp"
#include "selt/scoring.hpp"

namespace selt::testing {

inline const PromptLibrary& shipped_prompts() {
  static const PromptLibrary lib = PromptLibrary::load(SELT_TEMPLATE_DIR);
  return lib;
}

// Straight transcription of the four scoring formulas, one branch per variant.
inline double reference_uct(ScoreVariant variant, double q, double n, double parent_n,
                            double c_p, double c_beta, double mu) {
  const double inf = std::numeric_limits<double>::infinity();
  double exploit = 0, explore = 0;
  const double raw_exploit = n > 0 ? q / n : mu;
  const double bayes = c_beta + n > 0 ? (mu * c_beta + q) / (c_beta + n) : mu;
  const double raw_explore =
      c_p == 0 ? 0 : (n > 0 ? c_p * std::sqrt(2 * std::log(parent_n) / n) : inf);
  const double child_explore =
      (c_p == 0 || n <= 1) ? 0 : c_p * std::sqrt(2 * std::log(n) / n);
  switch (variant) {
    case ScoreVariant::kRaw: exploit = raw_exploit; explore = raw_explore; break;
    case ScoreVariant::kAlpha: exploit = bayes; explore = raw_explore; break;
    case ScoreVariant::kBeta: exploit = raw_exploit; explore = child_explore; break;
    case ScoreVariant::kAlphaBeta: exploit = bayes; explore = child_explore; break;
  }
  return exploit + explore;
}

// Connected components of the graph with an edge wherever adj[i][j] > 0.
inline std::vector<std::size_t> connected_components(
    const std::vector<std::vector<double>>& adj) {
  const std::size_t n = adj.size();
  std::vector<std::size_t> comp(n, n);
  std::size_t next = 0;
  for (std::size_t s = 0; s < n; ++s) {
    if (comp[s] != n) continue;
    std::vector<std::size_t> stack = {s};
    comp[s] = next;
    while (!stack.empty()) {
      const std::size_t u = stack.back();
      stack.pop_back();
      for (std::size_t v = 0; v < n; ++v) {
        if (v != u && adj[u][v] > 0 && comp[v] == n) {
          comp[v] = next;
          stack.push_back(v);
        }
      }
    }
    ++next;
  }
  return comp;
}

inline std::size_t count_distinct(const std::vector<std::size_t>& labels) {
  std::map<std::size_t, int> seen;
  for (auto l : labels) seen[l] = 1;
  return seen.size();
}

// Adjusted Rand index (Hubert & Arabie).
inline double adjusted_rand_index(const std::vector<std::size_t>& a,
                                  const std::vector<std::size_t>& b) {
  auto c2 = [](double x) { return x * (x - 1) / 2; };
  if (a.size() < 2) return 1.0;
  std::map<std::pair<std::size_t, std::size_t>, double> joint;
  std::map<std::size_t, double> ra, rb;
  for (std::size_t i = 0; i < a.size(); ++i) {
    joint[{a[i], b[i]}] += 1;
    ra[a[i]] += 1;
    rb[b[i]] += 1;
  }
  double index = 0, sa = 0, sb = 0;
  for (const auto& [_, v] : joint) index += c2(v);
  for (const auto& [_, v] : ra) sa += c2(v);
  for (const auto& [_, v] : rb) sb += c2(v);
  const double expected = sa * sb / c2(static_cast<double>(a.size()));
  const double max_index = (sa + sb) / 2;
  if (max_index == expected) return 1.0;  // both trivial partitions
  return (index - expected) / (max_index - expected);
}

// Oracle with scripted generations and a pluggable scorer; logs every call.
class ScriptedOracle final : public Oracle {
 public:
  std::deque<std::string> script;
  std::string fallback = "Final Answer: done";
  std::function<double(const std::string&)> scorer = [](const std::string&) { return 0.5; };
  std::vector<OracleRequest> generate_calls;
  std::vector<std::pair<std::string, std::vector<std::string>>> evaluate_calls;

  std::string generate(const OracleRequest& r) override {
    generate_calls.push_back(r);
    if (script.empty()) return fallback;
    auto s = script.front();
    script.pop_front();
    return s;
  }
  Score evaluate(std::string_view answer, std::span<const std::string> refs) override {
    evaluate_calls.emplace_back(std::string(answer),
                                std::vector<std::string>(refs.begin(), refs.end()));
    return Score(scorer(std::string(answer)));
  }
  std::size_t select(std::span<const std::string>, std::string_view) override { return 0; }
};

}  // namespace selt::testing
