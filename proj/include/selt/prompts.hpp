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
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "selt/task.hpp"
#include "selt/tree.hpp"

namespace selt {

enum class Purpose { kExpand, kSimulate, kEvaluate, kSelect };

inline constexpr std::array<Purpose, 4> kAllPurposes = {
    Purpose::kExpand, Purpose::kSimulate, Purpose::kEvaluate, Purpose::kSelect};

std::string_view to_string(Purpose p);

enum class DatasetKind { kMmlu, kSealTools, kCustom };

std::string_view to_string(DatasetKind k);
std::optional<DatasetKind> parse_dataset_kind(std::string_view s);

// Static mapping from dataset to (task type, inference mode). `custom`
// returns the caller's pair, or (SA, Think) when none is given.
std::pair<TaskType, InferenceMode> classify_task(
    DatasetKind kind,
    std::optional<std::pair<TaskType, InferenceMode>> custom = std::nullopt);

// Placeholders a template may reference. Braces around anything else are
// literal text, so JSON examples need no escaping.
inline constexpr std::array<std::string_view, 4> kPlaceholders = {
    "question", "path", "examples", "references"};

// Template library keyed by (task type, mode, purpose). Loaded from
// `{dir}/{task}/{mode}/{purpose}.txt`; immutable once built.
class PromptLibrary {
 public:
  struct Key {
    TaskType task;
    InferenceMode mode;
    Purpose purpose;
    friend auto operator<=>(const Key&, const Key&) = default;
  };

  // Every grid cell without a readable, valid file is recorded as
  // unsupported rather than failing later at render time.
  static PromptLibrary load(const std::filesystem::path& dir);

  void add(Key key, std::string text);
  bool supports(Key key) const { return templates_.contains(key); }
  const std::vector<std::string>& unsupported() const { return unsupported_; }

  // Few-shot demonstrations from `{dir}/examples/{dataset}.txt`.
  const std::string& examples_for(DatasetKind kind) const;
  void set_examples(DatasetKind kind, std::string text);
  std::size_t size() const { return templates_.size(); }

  // {path} is the reasoning path joined with newlines. For kEvaluate the
  // references render as numbered reference answers; for kSelect as
  // lettered options (A), (B), ...
  std::string build_prompt(const NodeState& state, Purpose purpose,
                           std::span<const std::string> references = {}) const;

 private:
  std::map<Key, std::string> templates_;
  std::vector<std::string> unsupported_;
  std::map<DatasetKind, std::string> examples_;
};

std::string join_path(std::span<const std::string> steps);
std::string render_references(std::span<const std::string> refs, Purpose purpose);

// Option letter for index i: 0 -> 'A'.
inline char option_letter(std::size_t i) { return static_cast<char>('A' + i); }

}  // namespace selt
