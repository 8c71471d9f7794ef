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

#include <doctest.h>

#include <cmath>
#include <numeric>

#include "selt/error.hpp"
#include "selt/random.hpp"
#include "selt/scoring.hpp"
#include "selt/tree.hpp"

using namespace selt;

namespace {

NodeState root() {
  return make_root_state("Q: 2+2?", "", TaskType::kSA, InferenceMode::kThink);
}

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected selt::Error");
  return ErrorKind::kIoError;
}

}  // namespace

TEST_CASE("new tree holds a single unvisited root") {
  Tree t(root());
  CHECK(t.size() == 1);
  CHECK(t.root() == NodeId{0});
  const Node& r = t.node(t.root());
  CHECK(r.visits == 0);
  CHECK(r.reward == 0.0);
  CHECK(r.reward_list.empty());
  CHECK_FALSE(t.is_terminal(t.root()));
  CHECK(tree_mean(t) == 0.5);
}

TEST_CASE("root state must be at depth 0") {
  NodeState s = root();
  s.depth = 1;
  s.reasoning_path = {"x"};
  CHECK(kind_of([&] { Tree t(s); }) == ErrorKind::kInvalidArgument);
}

TEST_CASE("add_child extends the path and respects the binary bound") {
  Tree t(root(), TerminalRule{10, "Final Answer:", true});
  NodeId v = t.root();
  for (int d = 0; d < 3; ++d) v = t.add_child(v, "step " + std::to_string(d));
  CHECK(t.node(v).state.depth == 3);
  const NodeId c = t.add_child(v, "therefore x=4");
  CHECK(t.node(c).state.depth == 4);
  CHECK(t.node(c).state.reasoning_path.back() == "therefore x=4");
  CHECK(t.node(c).visits == 0);
  CHECK(*t.node(c).parent == v);

  t.add_child(t.root(), "second");
  CHECK(t.node(t.root()).children.size() == 2);
  CHECK(t.is_fully_expanded(t.root()));
  CHECK(kind_of([&] { t.add_child(t.root(), "third"); }) == ErrorKind::kFullyExpanded);
}

TEST_CASE("terminal rules: marker and depth cap") {
  Tree t(root(), TerminalRule{3, "Final Answer:", true});
  const NodeId a = t.add_child(t.root(), "so Final Answer: 4");
  CHECK(t.is_terminal(a));
  CHECK(t.is_fully_expanded(a));
  CHECK(t.node(a).children.empty());
  CHECK(kind_of([&] { t.add_child(a, "more"); }) == ErrorKind::kTerminalParent);

  NodeId v = t.add_child(t.root(), "think");
  CHECK_FALSE(t.is_terminal(v));
  CHECK_FALSE(t.is_fully_expanded(v));
  v = t.add_child(v, "think more");
  v = t.add_child(v, "still thinking");
  CHECK(t.node(v).state.depth == 3);
  CHECK(t.is_terminal(v));

  TerminalRule response{4, "Final Answer:", false};
  CHECK_FALSE(response.is_terminal_step("Final Answer: 4", 1));
  CHECK(response.is_terminal_step("Final Answer: 4", 4));
}

TEST_CASE("mean_reward divides or falls back") {
  Tree t(root());
  const NodeId c = t.add_child(t.root(), "a");
  CHECK(t.mean_reward(c, 0.4) == 0.4);
  t.backup(c, 0.2);
  t.backup(c, 0.8);
  CHECK(t.mean_reward(c, 0.4) == doctest::Approx(0.5));
  t.backup(c, 0.5);
  CHECK(t.node(c).reward == doctest::Approx(1.5));
  CHECK(t.mean_reward(c, 0.0) == doctest::Approx(0.5));
}

TEST_CASE("backup updates every ancestor") {
  Tree t(root());
  NodeId v = t.root();
  for (int d = 0; d < 3; ++d) v = t.add_child(v, "s" + std::to_string(d));
  t.backup(v, 0.6);
  std::size_t updated = 0;
  for (const Node& n : t.nodes()) updated += n.visits;
  CHECK(updated == 4);
  CHECK(t.node(t.root()).visits == 1);
  CHECK(t.total_backups() == 1);
  CHECK(t.total_reward() == doctest::Approx(0.6));
}

TEST_CASE("tree_mean over backed-up rewards") {
  Tree t(root());
  const NodeId a = t.add_child(t.root(), "a");
  t.backup(a, 0.9);
  CHECK(tree_mean(t) == doctest::Approx(0.9));
  t.backup(a, 0.2);
  t.backup(t.root(), 0.4);
  CHECK(tree_mean(t) == doctest::Approx(0.5));
}

TEST_CASE("property: random build/backup sequences keep the bookkeeping invariants") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Rng rng(seed);
    Tree t(root(), TerminalRule{6, "Final Answer:", true});
    double issued = 0.0;
    for (int op = 0; op < 200; ++op) {
      const NodeId v{static_cast<std::uint32_t>(uniform_index(rng, t.size()))};
      if (uniform01(rng) < 0.4 && !t.is_fully_expanded(v)) {
        const bool fin = uniform01(rng) < 0.2;
        t.add_child(v, fin ? "Final Answer: x" : "step");
      } else {
        const double d = uniform01(rng);
        t.backup(v, d);
        issued += d;
      }
    }
    CHECK(t.total_backups() == t.node(t.root()).visits);
    CHECK(std::abs(t.total_reward() - issued) < 1e-9);
    CHECK(std::abs(t.node(t.root()).reward - issued) < 1e-9);
    std::vector<int> parent_refs(t.size(), 0);
    for (std::uint32_t i = 0; i < t.size(); ++i) {
      const Node& n = t.nodes()[i];
      CHECK(n.children.size() <= 2);
      CHECK(n.visits == n.reward_list.size());
      const double sum = std::accumulate(n.reward_list.begin(), n.reward_list.end(), 0.0);
      CHECK(std::abs(n.reward - sum) < 1e-9);
      std::uint64_t child_visits = 0;
      for (NodeId c : n.children) {
        child_visits += t.node(c).visits;
        ++parent_refs[c.value];
      }
      CHECK(n.visits >= child_visits);
      std::size_t hops = 0;
      for (auto p = n.parent; p; p = t.node(*p).parent) ++hops;
      CHECK(hops == n.state.depth);
      CHECK(n.state.depth == n.state.reasoning_path.size());
    }
    CHECK(parent_refs[0] == 0);
    for (std::size_t i = 1; i < t.size(); ++i) CHECK(parent_refs[i] == 1);
  }
}

TEST_CASE("whitespace normalization") {
  CHECK(normalize_whitespace("  step   A \n") == "step A");
  CHECK(normalize_whitespace("\t") == "");
}
