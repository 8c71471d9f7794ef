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

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "selt/clustering.hpp"
#include "selt/search.hpp"
#include "selt/tree.hpp"

namespace selt {

// Trace document layout, field order fixed:
//   {"root", "nodes": [{"id", "parent", "step_text", "answer", "visits",
//    "reward", "reward_list", "depth", "terminal", "cluster"}],
//    "iterations": [{"iter", "selected_node", "delta", "restarts",
//    "num_clusters"}], <extra top-level fields in the order given>}
// Rewards and deltas are written with exactly six decimals.
struct TraceExtras {
  std::vector<std::pair<std::string, nlohmann::ordered_json>> fields;
};

std::string write_trace(const Tree& tree, std::span<const IterationLog> log,
                        const Clustering* final_clustering,
                        const TraceExtras& extras = {});

// Writes to a temporary sibling then renames over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

std::string format_fixed6(double v);

}  // namespace selt
