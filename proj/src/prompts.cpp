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

#include "selt/prompts.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "selt/error.hpp"

namespace selt {

std::string_view to_string(TaskType t) {
  switch (t) {
    case TaskType::kTF: return "TF";
    case TaskType::kChoice: return "Choice";
    case TaskType::kFITB: return "FITB";
    case TaskType::kSA: return "SA";
  }
  return "SA";
}

std::string_view to_string(InferenceMode m) {
  switch (m) {
    case InferenceMode::kLearn: return "Learn";
    case InferenceMode::kThink: return "Think";
    case InferenceMode::kMimic: return "Mimic";
    case InferenceMode::kRecite: return "Recite";
  }
  return "Think";
}

std::optional<TaskType> parse_task_type(std::string_view s) {
  for (TaskType t : kAllTaskTypes) {
    if (to_string(t) == s) return t;
  }
  return std::nullopt;
}

std::optional<InferenceMode> parse_inference_mode(std::string_view s) {
  for (InferenceMode m : kAllInferenceModes) {
    if (to_string(m) == s) return m;
  }
  return std::nullopt;
}

std::string_view to_string(Purpose p) {
  switch (p) {
    case Purpose::kExpand: return "expand";
    case Purpose::kSimulate: return "simulate";
    case Purpose::kEvaluate: return "evaluate";
    case Purpose::kSelect: return "select";
  }
  return "expand";
}

std::string_view to_string(DatasetKind k) {
  switch (k) {
    case DatasetKind::kMmlu: return "mmlu";
    case DatasetKind::kSealTools: return "sealtools";
    case DatasetKind::kCustom: return "custom";
  }
  return "custom";
}

std::optional<DatasetKind> parse_dataset_kind(std::string_view s) {
  if (s == "mmlu") return DatasetKind::kMmlu;
  if (s == "sealtools") return DatasetKind::kSealTools;
  if (s == "custom") return DatasetKind::kCustom;
  return std::nullopt;
}

std::pair<TaskType, InferenceMode> classify_task(
    DatasetKind kind, std::optional<std::pair<TaskType, InferenceMode>> custom) {
  switch (kind) {
    case DatasetKind::kMmlu: return {TaskType::kChoice, InferenceMode::kThink};
    case DatasetKind::kSealTools: return {TaskType::kSA, InferenceMode::kMimic};
    case DatasetKind::kCustom: break;
  }
  return custom.value_or(std::pair{TaskType::kSA, InferenceMode::kThink});
}

namespace {

bool is_placeholder_name(std::string_view name) {
  return !name.empty() && std::all_of(name.begin(), name.end(), [](char c) {
    return std::islower(static_cast<unsigned char>(c)) || c == '_';
  });
}

bool is_known_placeholder(std::string_view name) {
  return std::find(kPlaceholders.begin(), kPlaceholders.end(), name) !=
         kPlaceholders.end();
}

// Calls on_text for literal runs and on_field for `{name}` occurrences.
template <typename Text, typename Field>
void scan_template(std::string_view tpl, Text on_text, Field on_field) {
  std::size_t pos = 0;
  while (pos < tpl.size()) {
    const std::size_t open = tpl.find('{', pos);
    if (open == std::string_view::npos) break;
    const std::size_t close = tpl.find('}', open + 1);
    if (close == std::string_view::npos) break;
    const std::string_view name = tpl.substr(open + 1, close - open - 1);
    if (!is_placeholder_name(name)) {
      on_text(tpl.substr(pos, open + 1 - pos));
      pos = open + 1;
      continue;
    }
    on_text(tpl.substr(pos, open - pos));
    on_field(name);
    pos = close + 1;
  }
  on_text(tpl.substr(std::min(pos, tpl.size())));
}

std::string key_name(const PromptLibrary::Key& key) {
  std::string s;
  s += to_string(key.task);
  s += '/';
  s += to_string(key.mode);
  s += '/';
  s += to_string(key.purpose);
  return s;
}

}  // namespace

std::string join_path(std::span<const std::string> steps) {
  std::string out;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    if (i > 0) out += '\n';
    out += steps[i];
  }
  return out;
}

std::string render_references(std::span<const std::string> refs, Purpose purpose) {
  std::string out;
  for (std::size_t i = 0; i < refs.size(); ++i) {
    if (i > 0) out += "\n\n";
    if (purpose == Purpose::kSelect) {
      out += '(';
      out += option_letter(i);
      out += ") ";
    } else {
      out += "[Reference " + std::to_string(i + 1) + "]\n";
    }
    out += refs[i];
  }
  return out;
}

PromptLibrary PromptLibrary::load(const std::filesystem::path& dir) {
  PromptLibrary lib;
  for (TaskType t : kAllTaskTypes) {
    for (InferenceMode m : kAllInferenceModes) {
      for (Purpose p : kAllPurposes) {
        const Key key{t, m, p};
        const auto file = dir / std::string(to_string(t)) /
                          std::string(to_string(m)) /
                          (std::string(to_string(p)) + ".txt");
        std::ifstream in(file, std::ios::binary);
        if (!in) {
          lib.unsupported_.push_back(key_name(key) + ": missing");
          continue;
        }
        std::ostringstream ss;
        ss << in.rdbuf();
        std::string text = ss.str();
        std::string bad;
        scan_template(text, [](std::string_view) {}, [&](std::string_view name) {
          if (bad.empty() && !is_known_placeholder(name)) bad = std::string(name);
        });
        if (!bad.empty()) {
          lib.unsupported_.push_back(key_name(key) + ": unknown placeholder {" + bad + "}");
          continue;
        }
        lib.templates_.emplace(key, std::move(text));
      }
    }
  }
  for (DatasetKind kind : {DatasetKind::kMmlu, DatasetKind::kSealTools, DatasetKind::kCustom}) {
    std::ifstream in(dir / "examples" / (std::string(to_string(kind)) + ".txt"),
                     std::ios::binary);
    if (!in) continue;
    std::ostringstream ss;
    ss << in.rdbuf();
    lib.examples_[kind] = ss.str();
  }
  return lib;
}

const std::string& PromptLibrary::examples_for(DatasetKind kind) const {
  static const std::string kNone;
  const auto it = examples_.find(kind);
  return it == examples_.end() ? kNone : it->second;
}

void PromptLibrary::set_examples(DatasetKind kind, std::string text) {
  examples_.insert_or_assign(kind, std::move(text));
}

void PromptLibrary::add(Key key, std::string text) {
  templates_.insert_or_assign(key, std::move(text));
}

std::string PromptLibrary::build_prompt(const NodeState& state, Purpose purpose,
                                        std::span<const std::string> references) const {
  const Key key{state.task_type, state.inference_mode, purpose};
  const auto it = templates_.find(key);
  if (it == templates_.end()) {
    throw Error(ErrorKind::kMissingTemplate, key_name(key));
  }
  std::string out;
  scan_template(
      it->second, [&](std::string_view text) { out += text; },
      [&](std::string_view name) {
        if (name == "question") {
          out += state.question();
        } else if (name == "path") {
          out += join_path(state.reasoning_path);
        } else if (name == "examples") {
          out += state.examples();
        } else if (name == "references") {
          out += render_references(references, purpose);
        } else {
          throw Error(ErrorKind::kMissingPlaceholder,
                      "{" + std::string(name) + "} in " + key_name(key));
        }
      });
  return out;
}

}  // namespace selt
