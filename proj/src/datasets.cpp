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

#include <fstream>
#include <sstream>

#include "selt/error.hpp"
#include "selt/harness.hpp"

namespace selt {

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIoError, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::string value_as_string(const nlohmann::json& v) {
  return trim(v.is_string() ? v.get<std::string>() : v.dump());
}

}  // namespace

nlohmann::ordered_json ToolCall::to_json() const {
  nlohmann::ordered_json p = nlohmann::ordered_json::object();
  for (const auto& [k, v] : params) p[k] = v;
  return {{"tool_name", tool_name}, {"params", p}};
}

nlohmann::ordered_json Question::to_json() const {
  nlohmann::ordered_json j;
  j["id"] = id;
  j["kind"] = std::string(to_string(kind));
  j["text"] = text;
  if (kind == DatasetKind::kMmlu) {
    j["gold"] = gold_letter ? std::string(1, *gold_letter) : "";
    j["options"] = options;
  } else {
    auto calls = nlohmann::ordered_json::array();
    for (const auto& c : gold_calls) calls.push_back(c.to_json());
    j["gold"] = calls;
    j["split"] = split;
  }
  return j;
}

Question Question::from_json(const nlohmann::json& j) {
  try {
    Question q;
    q.id = j.at("id").get<std::string>();
    q.text = j.at("text").get<std::string>();
    const auto kind = parse_dataset_kind(j.at("kind").get<std::string>());
    if (!kind) throw Error(ErrorKind::kParseError, "unknown dataset kind");
    q.kind = *kind;
    if (q.kind == DatasetKind::kMmlu) {
      const auto g = j.at("gold").get<std::string>();
      if (!g.empty()) q.gold_letter = g[0];
      q.options = j.at("options").get<std::vector<std::string>>();
    } else {
      for (const auto& c : j.at("gold")) {
        ToolCall call;
        call.tool_name = c.at("tool_name").get<std::string>();
        for (const auto& [k, v] : c.at("params").items()) {
          call.params.emplace_back(k, value_as_string(v));
        }
        q.gold_calls.push_back(std::move(call));
      }
      q.split = j.value("split", "");
    }
    return q;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kParseError, std::string("question record: ") + e.what());
  }
}

std::vector<std::vector<std::string>> parse_csv(std::string_view text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool in_quotes = false;
  bool row_has_content = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        in_quotes = true;
        row_has_content = true;
        break;
      case ',':
        row.push_back(std::move(field));
        field.clear();
        row_has_content = true;
        break;
      case '\r':
        break;
      case '\n':
        if (row_has_content || !field.empty()) {
          row.push_back(std::move(field));
          rows.push_back(std::move(row));
        }
        field.clear();
        row.clear();
        row_has_content = false;
        break;
      default:
        field.push_back(c);
        row_has_content = true;
    }
  }
  if (in_quotes) throw Error(ErrorKind::kParseError, "unterminated quoted field");
  if (row_has_content || !field.empty()) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<Question> load_mmlu(const std::filesystem::path& path) {
  std::vector<Question> out;
  const auto rows = parse_csv(read_file(path));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto& row = rows[r];
    const std::string where = "row " + std::to_string(r + 1);
    if (row.size() != 6) {
      throw Error(ErrorKind::kParseError,
                  where + ": expected 6 fields, got " + std::to_string(row.size()));
    }
    const std::string letter = trim(row[5]);
    if (letter.size() != 1 || letter[0] < 'A' || letter[0] > 'D') {
      throw Error(ErrorKind::kParseError, where + ": answer must be one of A-D");
    }
    Question q;
    q.id = std::to_string(r + 1);
    q.kind = DatasetKind::kMmlu;
    q.gold_letter = letter[0];
    q.text = trim(row[0]);
    for (std::size_t o = 0; o < 4; ++o) {
      q.options.push_back(trim(row[o + 1]));
      q.text += "\n";
      q.text += option_letter(o);
      q.text += ". " + q.options.back();
    }
    out.push_back(std::move(q));
  }
  return out;
}

std::vector<Question> load_sealtools(const std::filesystem::path& path) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::kParseError, path.string() + ": " + e.what());
  }
  if (!doc.is_array()) throw Error(ErrorKind::kParseError, "expected a JSON array");
  std::vector<Question> out;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const auto& item = doc[i];
    const std::string where = "item " + std::to_string(i + 1);
    try {
      Question q;
      q.kind = DatasetKind::kSealTools;
      q.id = item.contains("id")
                 ? (item["id"].is_string() ? item["id"].get<std::string>()
                                           : item["id"].dump())
                 : std::to_string(i + 1);
      q.text = item.at("query").get<std::string>();
      const auto& gold = item.at("gold");
      if (!gold.is_array() || gold.empty()) {
        throw Error(ErrorKind::kParseError, where + ": gold must be a non-empty list");
      }
      for (const auto& c : gold) {
        ToolCall call;
        call.tool_name = c.at("tool_name").get<std::string>();
        const auto& params = c.at("params");
        if (!params.is_object()) {
          throw Error(ErrorKind::kParseError, where + ": params must be an object");
        }
        for (const auto& [k, v] : params.items()) {
          call.params.emplace_back(k, value_as_string(v));
        }
        q.gold_calls.push_back(std::move(call));
      }
      q.split = q.gold_calls.size() == 1 ? "single" : "multiple";
      out.push_back(std::move(q));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorKind::kParseError, where + ": " + e.what());
    }
  }
  return out;
}

std::vector<Question> load_dataset(DatasetKind kind, const std::filesystem::path& path) {
  switch (kind) {
    case DatasetKind::kMmlu: return load_mmlu(path);
    case DatasetKind::kSealTools: return load_sealtools(path);
    case DatasetKind::kCustom: break;
  }
  throw Error(ErrorKind::kInvalidArgument, "no loader for custom datasets");
}

}  // namespace selt
