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

#include <algorithm>
#include <cctype>
#include <map>
#include <regex>

#include "selt/error.hpp"
#include "selt/harness.hpp"

namespace selt {

namespace {

std::string_view trim_view(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

// Text following the last answer marker, or nullopt when there is none.
std::optional<std::string_view> after_marker(std::string_view text,
                                             std::string_view marker) {
  if (marker.empty()) return std::nullopt;
  const auto pos = text.rfind(marker);
  if (pos == std::string_view::npos) return std::nullopt;
  return text.substr(pos + marker.size());
}

std::string fold(std::string_view s) {
  std::string out = normalize_whitespace(s);
  while (!out.empty() && (out.back() == '.' || out.back() == ' ')) out.pop_back();
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

double percent(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : 100.0 * static_cast<double>(num) / static_cast<double>(den);
}

template <typename Key>
std::size_t multiset_matches(const std::map<Key, std::size_t>& a,
                             const std::map<Key, std::size_t>& b) {
  std::size_t m = 0;
  for (const auto& [k, n] : a) {
    const auto it = b.find(k);
    if (it != b.end()) m += std::min(n, it->second);
  }
  return m;
}

struct CallCounts {
  std::map<std::string, std::size_t> tools;
  std::map<std::tuple<std::string, std::string, std::string>, std::size_t> params;
  std::size_t tool_total = 0;
  std::size_t param_total = 0;
};

CallCounts count_calls(std::span<const ToolCall> calls) {
  CallCounts c;
  for (const auto& call : calls) {
    ++c.tools[call.tool_name];
    ++c.tool_total;
    for (const auto& [name, value] : call.params) {
      ++c.params[{call.tool_name, name, value}];
      ++c.param_total;
    }
  }
  return c;
}

}  // namespace

std::optional<char> extract_choice(std::string_view answer,
                                   std::span<const std::string> options,
                                   std::string_view marker) {
  std::string_view tail;
  if (auto t = after_marker(answer, marker)) {
    tail = *t;
  } else {
    const auto trimmed = trim_view(answer);
    const auto nl = trimmed.rfind('\n');
    tail = nl == std::string_view::npos ? trimmed : trimmed.substr(nl + 1);
  }
  const std::size_t n = std::max<std::size_t>(options.size(), 4);
  const std::string s(trim_view(tail));
  static const std::regex kLetter(R"((^|[^A-Za-z])([A-Z])(?![A-Za-z]))");
  for (std::sregex_iterator it(s.begin(), s.end(), kLetter), end; it != end; ++it) {
    const char letter = (*it)[2].str()[0];
    if (static_cast<std::size_t>(letter - 'A') < n) return letter;
  }
  const std::string folded = fold(s);
  for (std::size_t i = 0; i < options.size(); ++i) {
    if (!options[i].empty() && fold(options[i]) == folded) return option_letter(i);
  }
  return std::nullopt;
}

std::optional<std::vector<ToolCall>> parse_tool_calls(std::string_view prediction,
                                                      std::string_view marker) {
  const std::string_view body = trim_view(after_marker(prediction, marker).value_or(prediction));
  const auto doc = nlohmann::json::parse(body.begin(), body.end(), nullptr, false);
  if (doc.is_discarded() || !doc.is_array()) return std::nullopt;
  std::vector<ToolCall> calls;
  for (const auto& item : doc) {
    if (!item.is_object() || !item.contains("tool_name") || !item.contains("params")) {
      return std::nullopt;
    }
    const auto& name = item["tool_name"];
    const auto& params = item["params"];
    if (!name.is_string() || !params.is_object()) return std::nullopt;
    ToolCall call;
    call.tool_name = name.get<std::string>();
    for (const auto& [k, v] : params.items()) {
      call.params.emplace_back(
          k, std::string(trim_view(v.is_string() ? v.get<std::string>() : v.dump())));
    }
    calls.push_back(std::move(call));
  }
  return calls;
}

Prf make_prf(std::size_t matched, std::size_t predicted, std::size_t gold) {
  Prf out;
  out.precision = percent(matched, predicted);
  out.recall = percent(matched, gold);
  const double sum = out.precision + out.recall;
  out.f1 = sum > 0.0 ? 2.0 * out.precision * out.recall / sum : 0.0;
  return out;
}

nlohmann::ordered_json Prf::to_json() const {
  return {{"P", precision}, {"R", recall}, {"F1", f1}};
}

nlohmann::ordered_json SealToolsMetrics::to_json() const {
  return {{"count", count}, {"format", format}, {"tool", tool.to_json()},
          {"param", param.to_json()}};
}

SealToolsMetrics sealtools_metrics(std::span<const std::string> predictions,
                                   std::span<const std::vector<ToolCall>> gold,
                                   std::string_view marker) {
  if (predictions.size() != gold.size()) {
    throw Error(ErrorKind::kInvalidArgument, "predictions and gold differ in length");
  }
  std::size_t parseable = 0;
  std::size_t tool_matched = 0, tool_pred = 0, tool_gold = 0;
  std::size_t param_matched = 0, param_pred = 0, param_gold = 0;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    const CallCounts g = count_calls(gold[i]);
    tool_gold += g.tool_total;
    param_gold += g.param_total;
    const auto parsed = parse_tool_calls(predictions[i], marker);
    if (!parsed) continue;
    ++parseable;
    const CallCounts p = count_calls(*parsed);
    tool_pred += p.tool_total;
    param_pred += p.param_total;
    tool_matched += multiset_matches(p.tools, g.tools);
    param_matched += multiset_matches(p.params, g.params);
  }
  SealToolsMetrics m;
  m.count = predictions.size();
  m.format = percent(parseable, predictions.size());
  m.tool = make_prf(tool_matched, tool_pred, tool_gold);
  m.param = make_prf(param_matched, param_pred, param_gold);
  return m;
}

nlohmann::ordered_json QuestionRecord::to_json() const {
  nlohmann::ordered_json j;
  j["id"] = id;
  j["ok"] = ok;
  if (!ok) j["error"] = error;
  if (baseline_answer) {
    j["baseline_answer"] = *baseline_answer;
    return j;
  }
  auto node = [](const std::optional<NodeId>& n) -> nlohmann::ordered_json {
    return n ? nlohmann::ordered_json(n->value) : nlohmann::ordered_json(nullptr);
  };
  j["leaf_node"] = node(leaf_node);
  j["leaf_answer"] = leaf_answer;
  j["cluster_node"] = node(cluster_node);
  j["cluster_answer"] = cluster_answer;
  j["picked_answer"] = picked_answer;
  auto ids = nlohmann::ordered_json::array();
  for (NodeId r : representative_nodes) ids.push_back(r.value);
  j["representative_nodes"] = ids;
  j["representatives"] = representatives;
  return j;
}

QuestionRecord QuestionRecord::from_json(const nlohmann::json& j) {
  try {
    QuestionRecord r;
    r.id = j.at("id").get<std::string>();
    r.ok = j.at("ok").get<bool>();
    r.error = j.value("error", "");
    if (j.contains("baseline_answer")) {
      r.baseline_answer = j["baseline_answer"].get<std::string>();
      return r;
    }
    auto node = [](const nlohmann::json& v) -> std::optional<NodeId> {
      if (v.is_null()) return std::nullopt;
      return NodeId{v.get<std::uint32_t>()};
    };
    r.leaf_node = node(j.at("leaf_node"));
    r.leaf_answer = j.at("leaf_answer").get<std::string>();
    r.cluster_node = node(j.at("cluster_node"));
    r.cluster_answer = j.at("cluster_answer").get<std::string>();
    r.picked_answer = j.at("picked_answer").get<std::string>();
    for (const auto& id : j.at("representative_nodes")) {
      r.representative_nodes.push_back(NodeId{id.get<std::uint32_t>()});
    }
    r.representatives = j.at("representatives").get<std::vector<std::string>>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kParseError, std::string("record: ") + e.what());
  }
}

MmluHits mmlu_hits(const QuestionRecord& record, const Question& question) {
  MmluHits h;
  if (!record.ok || !question.gold_letter) return h;
  const char gold = *question.gold_letter;
  auto hit = [&](const std::string& answer) {
    const auto letter = extract_choice(answer, question.options);
    return letter && *letter == gold;
  };
  if (record.baseline_answer) {
    h.baseline = hit(*record.baseline_answer);
    return h;
  }
  h.leaf = hit(record.leaf_answer);
  h.cluster = hit(record.cluster_answer);
  h.picked = hit(record.picked_answer);
  h.both = h.leaf || h.cluster;
  h.clusters = std::any_of(record.representatives.begin(), record.representatives.end(), hit);
  return h;
}

nlohmann::ordered_json MmluMetrics::to_json(bool baseline_run) const {
  nlohmann::ordered_json j;
  j["count"] = count;
  j["extraction_failures"] = extraction_failures;
  if (baseline_run) {
    j["baseline_acc"] = baseline;
    return j;
  }
  j["leaf_acc"] = leaf;
  j["cluster_acc"] = cluster;
  j["picked_acc"] = picked;
  j["both_acc"] = both;
  j["clusters_acc"] = clusters;
  return j;
}

MmluMetrics mmlu_metrics(std::span<const QuestionRecord> records,
                         std::span<const Question> questions) {
  if (records.size() != questions.size()) {
    throw Error(ErrorKind::kInvalidArgument, "records and questions differ in length");
  }
  std::size_t leaf = 0, cluster = 0, picked = 0, both = 0, clusters = 0, baseline = 0;
  MmluMetrics m;
  m.count = records.size();
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    const auto& q = questions[i];
    const MmluHits h = mmlu_hits(r, q);
    leaf += h.leaf;
    cluster += h.cluster;
    picked += h.picked;
    both += h.both;
    clusters += h.clusters;
    baseline += h.baseline;
    if (!r.ok) continue;
    auto fails = [&](const std::string& a) { return !extract_choice(a, q.options); };
    if (r.baseline_answer) {
      m.extraction_failures += fails(*r.baseline_answer);
    } else {
      m.extraction_failures += fails(r.leaf_answer) + fails(r.cluster_answer) +
                               fails(r.picked_answer);
    }
  }
  m.leaf = percent(leaf, m.count);
  m.cluster = percent(cluster, m.count);
  m.picked = percent(picked, m.count);
  m.both = percent(both, m.count);
  m.clusters = percent(clusters, m.count);
  m.baseline = percent(baseline, m.count);
  return m;
}

nlohmann::ordered_json compute_metrics(DatasetKind kind,
                                       std::span<const QuestionRecord> records,
                                       std::span<const Question> questions) {
  const bool baseline_run =
      std::any_of(records.begin(), records.end(),
                  [](const QuestionRecord& r) { return r.baseline_answer.has_value(); });
  if (kind == DatasetKind::kMmlu) {
    return mmlu_metrics(records, questions).to_json(baseline_run);
  }

  using Getter = std::string (*)(const QuestionRecord&);
  std::vector<std::pair<std::string, Getter>> modes;
  if (baseline_run) {
    modes.emplace_back("baseline", [](const QuestionRecord& r) {
      return r.baseline_answer.value_or("");
    });
  } else {
    modes.emplace_back("leaf", [](const QuestionRecord& r) { return r.leaf_answer; });
    modes.emplace_back("cluster", [](const QuestionRecord& r) { return r.cluster_answer; });
    modes.emplace_back("picked", [](const QuestionRecord& r) { return r.picked_answer; });
  }
  nlohmann::ordered_json out;
  for (const auto& [name, get] : modes) {
    nlohmann::ordered_json per_split;
    for (const std::string split : {"single", "multiple", "all"}) {
      std::vector<std::string> preds;
      std::vector<std::vector<ToolCall>> gold;
      for (std::size_t i = 0; i < records.size(); ++i) {
        if (split != "all" && questions[i].split != split) continue;
        preds.push_back(records[i].ok ? get(records[i]) : std::string());
        gold.push_back(questions[i].gold_calls);
      }
      per_split[split] = sealtools_metrics(preds, gold).to_json();
    }
    out[name] = per_split;
  }
  return out;
}

}  // namespace selt
