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

#include <filesystem>
#include <fstream>

#include "selt/error.hpp"
#include "selt/prompts.hpp"
#include "test_support.hpp"

using namespace selt;
using selt::testing::shipped_prompts;

namespace {

NodeState mmlu_state() {
  return make_root_state("Which planet is largest?\nA. Mars\nB. Jupiter\nC. Venus\nD. Mercury",
                         "Q: 1+1?\nFinal Answer: A", TaskType::kChoice, InferenceMode::kThink);
}

}  // namespace

TEST_CASE("shipped library covers the full grid") {
  const auto& lib = shipped_prompts();
  CHECK(lib.size() == 64);
  CHECK(lib.unsupported().empty());
  for (auto t : kAllTaskTypes)
    for (auto m : kAllInferenceModes)
      for (auto p : kAllPurposes) CHECK(lib.supports({t, m, p}));
  CHECK_FALSE(lib.examples_for(DatasetKind::kMmlu).empty());
}

TEST_CASE("expand prompt carries question, options and the path so far") {
  NodeState s = mmlu_state();
  s.reasoning_path = {"Jupiter is a gas giant.", "It is the largest planet."};
  s.depth = 2;
  const auto p = shipped_prompts().build_prompt(s, Purpose::kExpand);
  CHECK(p.find("Which planet is largest?") != std::string::npos);
  CHECK(p.find("B. Jupiter") != std::string::npos);
  CHECK(p.find("Jupiter is a gas giant.\nIt is the largest planet.") != std::string::npos);
  CHECK(p.find("Q: 1+1?") != std::string::npos);
  CHECK(p.find('{') == std::string::npos);
  CHECK(p == shipped_prompts().build_prompt(s, Purpose::kExpand));
}

TEST_CASE("empty path renders as nothing") {
  PromptLibrary lib;
  lib.add({TaskType::kSA, InferenceMode::kLearn, Purpose::kExpand}, "[{path}]");
  const auto s = make_root_state("q", "", TaskType::kSA, InferenceMode::kLearn);
  CHECK(lib.build_prompt(s, Purpose::kExpand) == "[]");
  CHECK(join_path(std::vector<std::string>{}) == "");
  CHECK(join_path(std::vector<std::string>{"a", "b"}) == "a\nb");
}

TEST_CASE("unknown combination and unknown placeholder") {
  PromptLibrary lib;
  const auto s = make_root_state("q", "", TaskType::kTF, InferenceMode::kRecite);
  try {
    lib.build_prompt(s, Purpose::kEvaluate);
    FAIL("expected MissingTemplate");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kMissingTemplate);
  }
  lib.add({TaskType::kTF, InferenceMode::kRecite, Purpose::kEvaluate}, "x {answerz} y");
  try {
    lib.build_prompt(s, Purpose::kEvaluate);
    FAIL("expected MissingPlaceholder");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kMissingPlaceholder);
  }
}

TEST_CASE("non-placeholder braces are literal") {
  PromptLibrary lib;
  lib.add({TaskType::kSA, InferenceMode::kMimic, Purpose::kExpand},
          R"(Format: {"tool": "name", "Args": {}} for {question})");
  const auto s = make_root_state("book a flight", "", TaskType::kSA, InferenceMode::kMimic);
  CHECK(lib.build_prompt(s, Purpose::kExpand) ==
        R"(Format: {"tool": "name", "Args": {}} for book a flight)");
}

TEST_CASE("references render per purpose") {
  const std::vector<std::string> refs = {"first", "second"};
  CHECK(render_references(refs, Purpose::kEvaluate) ==
        "[Reference 1]\nfirst\n\n[Reference 2]\nsecond");
  CHECK(render_references(refs, Purpose::kSelect) == "(A) first\n\n(B) second");
  const auto p = shipped_prompts().build_prompt(mmlu_state(), Purpose::kSelect, refs);
  CHECK(p.find("(B) second") != std::string::npos);
}

TEST_CASE("loader records missing and invalid cells") {
  const auto dir = std::filesystem::temp_directory_path() / "selt_prompt_loader_test";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir / "SA" / "Think");
  std::ofstream(dir / "SA" / "Think" / "expand.txt") << "{question}";
  std::ofstream(dir / "SA" / "Think" / "simulate.txt") << "{nope}";
  const auto lib = PromptLibrary::load(dir);
  CHECK(lib.size() == 1);
  CHECK(lib.supports({TaskType::kSA, InferenceMode::kThink, Purpose::kExpand}));
  CHECK_FALSE(lib.supports({TaskType::kSA, InferenceMode::kThink, Purpose::kSimulate}));
  CHECK(lib.unsupported().size() == 63);
  std::filesystem::remove_all(dir);
}

TEST_CASE("task classification per dataset") {
  CHECK(classify_task(DatasetKind::kMmlu) ==
        std::pair{TaskType::kChoice, InferenceMode::kThink});
  CHECK(classify_task(DatasetKind::kSealTools) ==
        std::pair{TaskType::kSA, InferenceMode::kMimic});
  CHECK(classify_task(DatasetKind::kCustom) ==
        std::pair{TaskType::kSA, InferenceMode::kThink});
  CHECK(classify_task(DatasetKind::kCustom, std::pair{TaskType::kFITB, InferenceMode::kRecite}) ==
        std::pair{TaskType::kFITB, InferenceMode::kRecite});
}

TEST_CASE("enum names round-trip") {
  for (auto t : kAllTaskTypes) CHECK(parse_task_type(to_string(t)) == t);
  for (auto m : kAllInferenceModes) CHECK(parse_inference_mode(to_string(m)) == m);
  for (auto k : {DatasetKind::kMmlu, DatasetKind::kSealTools, DatasetKind::kCustom})
    CHECK(parse_dataset_kind(to_string(k)) == k);
  CHECK(option_letter(0) == 'A');
  CHECK(option_letter(4) == 'E');
}
