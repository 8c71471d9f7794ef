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
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "selt/clustering.hpp"
#include "selt/oracle.hpp"
#include "selt/prompts.hpp"
#include "selt/search.hpp"

namespace selt {

// ---------------------------------------------------------------------------
// Datasets

struct ToolCall {
  std::string tool_name;
  std::vector<std::pair<std::string, std::string>> params;  // value as string

  nlohmann::ordered_json to_json() const;
};

struct Question {
  std::string id;
  std::string text;
  DatasetKind kind = DatasetKind::kMmlu;
  std::optional<char> gold_letter;          // MMLU
  std::vector<std::string> options;         // MMLU option texts, A..D
  std::vector<ToolCall> gold_calls;         // Seal-Tools
  std::string split;                        // "single" | "multiple" for Seal-Tools

  nlohmann::ordered_json to_json() const;
  static Question from_json(const nlohmann::json& j);
};

// Headerless CSV rows: question, A, B, C, D, answer letter.
std::vector<Question> load_mmlu(const std::filesystem::path& path);
// JSON array of {"id"?, "query", "gold": [{"tool_name", "params": {...}}]}.
std::vector<Question> load_sealtools(const std::filesystem::path& path);

std::vector<Question> load_dataset(DatasetKind kind, const std::filesystem::path& path);

// Minimal RFC 4180 reader: quoted fields, doubled quotes, CRLF.
std::vector<std::vector<std::string>> parse_csv(std::string_view text);

// ---------------------------------------------------------------------------
// Answer extraction and metrics

// Option letter from the text after the last answer marker (or the last
// line when the marker is absent); falls back to exact option-text match.
std::optional<char> extract_choice(std::string_view answer,
                                   std::span<const std::string> options,
                                   std::string_view marker = kDefaultAnswerMarker);

// Tool calls from the text after the last answer marker (or the whole text);
// nullopt if it is not a JSON list of {tool_name, params}.
std::optional<std::vector<ToolCall>> parse_tool_calls(
    std::string_view prediction, std::string_view marker = kDefaultAnswerMarker);

struct Prf {
  double precision = 0.0;  // percent
  double recall = 0.0;
  double f1 = 0.0;

  nlohmann::ordered_json to_json() const;
};

Prf make_prf(std::size_t matched, std::size_t predicted, std::size_t gold);

struct SealToolsMetrics {
  double format = 0.0;  // percent of parseable predictions
  Prf tool;
  Prf param;
  std::size_t count = 0;

  nlohmann::ordered_json to_json() const;
};

// Micro-averaged over questions. Unparseable predictions match nothing but
// keep their gold counts in the recall denominators.
SealToolsMetrics sealtools_metrics(std::span<const std::string> predictions,
                                   std::span<const std::vector<ToolCall>> gold,
                                   std::string_view marker = kDefaultAnswerMarker);

struct QuestionRecord {
  std::string id;
  bool ok = false;
  std::string error;
  std::optional<std::string> baseline_answer;
  std::string leaf_answer;
  std::string cluster_answer;
  std::string picked_answer;
  std::vector<std::string> representatives;  // representative answers
  std::optional<NodeId> leaf_node;
  std::optional<NodeId> cluster_node;
  std::vector<NodeId> representative_nodes;

  nlohmann::ordered_json to_json() const;
  static QuestionRecord from_json(const nlohmann::json& j);
};

struct MmluMetrics {
  double leaf = 0.0;  // all in percent
  double cluster = 0.0;
  double picked = 0.0;
  double both = 0.0;
  double clusters = 0.0;
  double baseline = 0.0;
  std::size_t count = 0;
  std::size_t extraction_failures = 0;

  nlohmann::ordered_json to_json(bool baseline_run) const;
};

struct MmluHits {
  bool leaf = false;
  bool cluster = false;
  bool picked = false;
  bool both = false;
  bool clusters = false;
  bool baseline = false;
};

MmluHits mmlu_hits(const QuestionRecord& record, const Question& question);

// Records and questions pair up by index. Failed records count as wrong.
MmluMetrics mmlu_metrics(std::span<const QuestionRecord> records,
                         std::span<const Question> questions);

// Metrics of any dataset as a JSON object; the same function backs the
// run report and `selt eval`.
nlohmann::ordered_json compute_metrics(DatasetKind kind,
                                       std::span<const QuestionRecord> records,
                                       std::span<const Question> questions);

// ---------------------------------------------------------------------------
// Analysis

struct Analysis {
  LeafAnswer leaf;
  NodeId cluster_node;
  std::string cluster_answer;
  std::string picked_answer;
  Clustering clustering;
};

// Leaf from greedy descent, Cluster from the selector's pick among cluster
// representatives, Picked from the selector's pick between those two.
Analysis analyze(const Tree& tree, std::string_view question, Oracle& selector,
                 const ScoreParams& params, Rng& rng);

// ---------------------------------------------------------------------------
// Benchmark runner

enum class Baseline { kOneShot, kOneShotCot };
std::optional<Baseline> parse_baseline(std::string_view s);
std::string_view to_string(Baseline b);

enum class OracleKind { kMock, kHttp };

// Deterministic mock world for a dataset question: three reasoning levels
// plus an answer level whose planted entry is the gold answer.
MockWorld mock_world_for(const Question& q, std::string_view marker = kDefaultAnswerMarker);

using OracleFactory = std::function<std::unique_ptr<Oracle>(
    const Question&, const NodeState& root, std::uint64_t seed)>;

struct BenchmarkConfig {
  DatasetKind dataset = DatasetKind::kMmlu;
  std::filesystem::path data;
  std::filesystem::path out;
  std::filesystem::path templates;
  SearchConfig search;
  OracleKind oracle = OracleKind::kMock;
  HttpConfig http;
  std::uint64_t seed = 0;
  std::size_t workers = 4;
  std::optional<Baseline> baseline;
  bool force = false;
};

struct RunReport {
  DatasetKind dataset = DatasetKind::kMmlu;
  std::vector<Question> questions;
  std::vector<QuestionRecord> records;
  nlohmann::ordered_json metrics;
  std::size_t failed = 0;

  // More than 10% of questions failed.
  bool too_many_failures() const { return failed * 10 > records.size(); }
  nlohmann::ordered_json to_json(const BenchmarkConfig& config) const;
};

// Root state for a question, using the dataset's task mapping and examples.
NodeState root_state_for(const Question& q, const PromptLibrary& prompts);

// Runs every question (bounded worker pool), writes out/q_{id}.json traces
// and out/report.json. Refuses to touch an output directory that already
// holds results unless config.force is set.
RunReport run_benchmark(const BenchmarkConfig& config, const PromptLibrary& prompts,
                        OracleFactory factory = {});

// Recomputes metrics from a directory of traces written by run_benchmark.
nlohmann::ordered_json evaluate_traces(const std::filesystem::path& dir);

}  // namespace selt
