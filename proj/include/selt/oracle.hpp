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

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "selt/prompts.hpp"
#include "selt/random.hpp"
#include "selt/tree.hpp"

namespace selt {

// Self-evaluation reward, always within [0, 1].
class Score {
 public:
  Score() = default;
  // Clamps into [0, 1]; NaN maps to 0.
  explicit Score(double v);
  double value() const { return value_; }

 private:
  double value_ = 0.0;
};

enum class Continuation {
  kStep,  // one next reasoning step
  kFull,  // one complete (or refined) response
};

struct OracleRequest {
  std::string prompt;
  double temperature = 0.8;
  std::size_t max_tokens = 512;
  std::vector<std::string> stop;
  // Reasoning steps the prompt was rendered from. Transports that talk to
  // a real model ignore it; the mock world uses it as its state.
  std::vector<std::string> path;
  Continuation continuation = Continuation::kStep;
};

inline constexpr double kGenerateTemperature = 0.8;
inline constexpr double kJudgeTemperature = 0.0;

// The language-model boundary. One instance serves a single search run;
// implementations must tolerate other instances being used concurrently.
class Oracle {
 public:
  virtual ~Oracle() = default;
  virtual std::string generate(const OracleRequest& request) = 0;
  virtual Score evaluate(std::string_view answer,
                         std::span<const std::string> references) = 0;
  virtual std::size_t select(std::span<const std::string> candidates,
                             std::string_view question) = 0;
};

// First integer in [0, 10]; an "N/10" pattern wins over bare integers.
// Throws kOracleScoreParse when nothing qualifies.
int parse_score(std::string_view text);

// Letter choice among n options: "(B)" forms first, then a standalone
// capital letter. Returns nullopt when none is in range.
std::optional<std::size_t> parse_choice(std::string_view text, std::size_t n);

// Jaccard overlap of token sets; 1 for identical token sets.
double token_overlap(std::string_view a, std::string_view b);

// Synthetic environment for the mock oracle. levels[d] holds candidate
// steps for depth d; the last level holds answer steps carrying the marker.
struct MockWorld {
  std::string planted_answer;
  std::vector<std::vector<std::string>> levels;

  double quality(std::string_view answer) const {
    return token_overlap(answer, planted_answer);
  }
};

// Builds a world whose planted answer is the newline-joined planted steps.
MockWorld make_mock_world(std::vector<std::vector<std::string>> levels,
                          std::span<const std::size_t> planted_choice);

struct MockCall {
  std::string kind;  // "generate" | "evaluate" | "select"
  std::string input;
  std::vector<std::string> references;
  std::string output;
};

class MockOracle final : public Oracle {
 public:
  MockOracle(MockWorld world, std::uint64_t seed);

  std::string generate(const OracleRequest& request) override;
  Score evaluate(std::string_view answer,
                 std::span<const std::string> references) override;
  std::size_t select(std::span<const std::string> candidates,
                     std::string_view question) override;

  const MockWorld& world() const { return world_; }
  const std::vector<MockCall>& calls() const { return calls_; }

 private:
  std::string draw(std::size_t level);

  MockWorld world_;
  Rng rng_;
  std::vector<MockCall> calls_;
};

struct HttpConfig {
  std::string endpoint;  // base URL; requests go to {endpoint}/v1/chat/completions
  std::string model;
  std::string api_key;
  std::chrono::milliseconds timeout{60'000};
  int retries = 3;
  std::chrono::milliseconds backoff{1000};  // doubled after each failure
  std::size_t max_tokens = 512;
};

// Fills endpoint and api_key from SELT_ENDPOINT / SELT_API_KEY when unset.
HttpConfig http_config_from_env(HttpConfig base);

// OpenAI-compatible chat-completions client bound to one question.
class HttpOracle final : public Oracle {
 public:
  HttpOracle(HttpConfig config, const PromptLibrary& prompts, NodeState question);

  std::string generate(const OracleRequest& request) override;
  Score evaluate(std::string_view answer,
                 std::span<const std::string> references) override;
  std::size_t select(std::span<const std::string> candidates,
                     std::string_view question) override;

  // Exposed for schema tests.
  std::string request_body(const OracleRequest& request) const;

 private:
  std::string post(const OracleRequest& request);

  HttpConfig config_;
  const PromptLibrary& prompts_;
  NodeState question_;
};

}  // namespace selt
