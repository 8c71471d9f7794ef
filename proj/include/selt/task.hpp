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

#include <array>
#include <optional>
#include <string_view>

namespace selt {

// Atomic task categories a question is decomposed into.
enum class TaskType { kTF, kChoice, kFITB, kSA };

// How the model is asked to reason about a task.
enum class InferenceMode { kLearn, kThink, kMimic, kRecite };

inline constexpr std::array<TaskType, 4> kAllTaskTypes = {
    TaskType::kTF, TaskType::kChoice, TaskType::kFITB, TaskType::kSA};
inline constexpr std::array<InferenceMode, 4> kAllInferenceModes = {
    InferenceMode::kLearn, InferenceMode::kThink, InferenceMode::kMimic,
    InferenceMode::kRecite};

std::string_view to_string(TaskType t);
std::string_view to_string(InferenceMode m);
std::optional<TaskType> parse_task_type(std::string_view s);
std::optional<InferenceMode> parse_inference_mode(std::string_view s);

}  // namespace selt
