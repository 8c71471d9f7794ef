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
#include <atomic>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "selt/error.hpp"
#include "selt/harness.hpp"
#include "selt/trace.hpp"

namespace selt {

namespace {

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

const std::vector<std::vector<std::string>> kReasoningSteps = {
    {"Restate what the question is asking in plain terms.",
     "List every quantity given in the question before solving."},
    {"Recall the governing definition and apply it to each option.",
     "Guess based on which option sounds most familiar."},
    {"Eliminate options that contradict that definition.",
     "Keep every option open since none look obviously wrong."},
};

std::string safe_file_id(std::string_view id) {
  std::string out;
  for (char c : id) {
    const bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_';
    out.push_back(ok ? c : '_');
  }
  return out.empty() ? "_" : out;
}

std::string compact_calls(std::span<const ToolCall> calls) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& c : calls) arr.push_back(c.to_json());
  return arr.dump();
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIoError, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool has_results(const std::filesystem::path& dir) {
  if (!std::filesystem::exists(dir)) return false;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    const auto name = entry.path().filename().string();
    if (name == "report.json") return true;
    if (name.rfind("q_", 0) == 0 && entry.path().extension() == ".json") return true;
  }
  return false;
}

nlohmann::ordered_json config_json(const BenchmarkConfig& c) {
  nlohmann::ordered_json j;
  j["steps"] = c.search.steps;
  j["scoring"] = std::string(to_string(c.search.score_params.variant));
  j["c_p"] = c.search.score_params.c_p;
  j["c_beta"] = c.search.score_params.c_beta;
  j["granularity"] = std::string(to_string(c.search.granularity));
  j["depth_cap"] = c.search.depth_cap;
  j["descend_probability"] = c.search.descend_probability;
  j["seed"] = c.seed;
  j["oracle"] = c.oracle == OracleKind::kMock ? "mock" : "http";
  if (c.oracle == OracleKind::kHttp) j["model"] = c.http.model;
  j["baseline"] = c.baseline ? nlohmann::ordered_json(std::string(to_string(*c.baseline)))
                             : nlohmann::ordered_json(nullptr);
  return j;
}

}  // namespace

std::optional<Baseline> parse_baseline(std::string_view s) {
  if (s == "1shot") return Baseline::kOneShot;
  if (s == "1shot_cot") return Baseline::kOneShotCot;
  return std::nullopt;
}

std::string_view to_string(Baseline b) {
  return b == Baseline::kOneShot ? "1shot" : "1shot_cot";
}

MockWorld mock_world_for(const Question& q, std::string_view marker) {
  const std::uint64_t h = fnv1a(q.id + "\x1f" + q.text);
  std::vector<std::vector<std::string>> levels = kReasoningSteps;
  std::vector<std::size_t> planted;
  for (std::size_t l = 0; l < levels.size(); ++l) planted.push_back((h >> l) & 1U);

  std::vector<std::string> answers;
  const std::string prefix = std::string(marker) + " ";
  if (q.kind == DatasetKind::kMmlu) {
    for (std::size_t o = 0; o < 4; ++o) answers.push_back(prefix + option_letter(o));
    planted.push_back(q.gold_letter ? static_cast<std::size_t>(*q.gold_letter - 'A') : 0);
  } else {
    const auto& gold = q.gold_calls;
    answers.push_back(prefix + compact_calls(gold));
    auto renamed = gold;
    if (!renamed.empty()) renamed.front().tool_name += "_legacy";
    answers.push_back(prefix + compact_calls(renamed));
    auto altered = gold;
    if (!altered.empty() && !altered.front().params.empty()) {
      altered.front().params.front().second += " (approx)";
    } else if (!altered.empty()) {
      altered.front().params.emplace_back("verbose", "true");
    }
    answers.push_back(prefix + compact_calls(altered));
    auto short_list = gold;
    if (short_list.size() > 1) {
      short_list.pop_back();
    } else if (!short_list.empty()) {
      short_list.front().params.clear();
    }
    answers.push_back(prefix + compact_calls(short_list));
    // Rotate so the correct entry's position varies per question.
    const std::size_t shift = (h >> 8) % answers.size();
    std::rotate(answers.begin(), answers.begin() + static_cast<std::ptrdiff_t>(shift),
                answers.end());
    planted.push_back((answers.size() - shift) % answers.size());
  }
  levels.push_back(std::move(answers));
  return make_mock_world(std::move(levels), planted);
}

NodeState root_state_for(const Question& q, const PromptLibrary& prompts) {
  const auto [task, mode] = classify_task(q.kind);
  return make_root_state(q.text, prompts.examples_for(q.kind), task, mode);
}

Analysis analyze(const Tree& tree, std::string_view question, Oracle& selector,
                 const ScoreParams& params, Rng& rng) {
  Analysis out;
  out.leaf = best_leaf(tree, params);
  out.clustering = cluster_answers(tree, rng);
  std::vector<std::string> reps;
  for (NodeId r : out.clustering.representatives) {
    reps.push_back(*tree.node(r).state.simulated_answer);
  }
  const std::size_t pick = std::min(selector.select(reps, question), reps.size() - 1);
  out.cluster_node = out.clustering.representatives[pick];
  out.cluster_answer = reps[pick];
  if (out.leaf.answer == out.cluster_answer) {
    out.picked_answer = out.leaf.answer;
  } else {
    const std::vector<std::string> pair = {out.leaf.answer, out.cluster_answer};
    out.picked_answer = selector.select(pair, question) == 1 ? pair[1] : pair[0];
  }
  return out;
}

nlohmann::ordered_json RunReport::to_json(const BenchmarkConfig& config) const {
  nlohmann::ordered_json j;
  j["dataset"] = std::string(to_string(dataset));
  j["config"] = config_json(config);
  j["num_questions"] = records.size();
  j["failed"] = failed;
  j["metrics"] = metrics;
  auto recs = nlohmann::ordered_json::array();
  for (const auto& r : records) recs.push_back(r.to_json());
  j["records"] = recs;
  return j;
}

RunReport run_benchmark(const BenchmarkConfig& config, const PromptLibrary& prompts,
                        OracleFactory factory) {
  config.search.validate();
  if (!config.force && has_results(config.out)) {
    throw Error(ErrorKind::kIoError, config.out.string() +
                                         " already holds results; pass --force to overwrite");
  }
  std::filesystem::create_directories(config.out);

  if (!factory) {
    if (config.oracle == OracleKind::kMock) {
      factory = [](const Question& q, const NodeState&, std::uint64_t seed) {
        return std::make_unique<MockOracle>(mock_world_for(q), seed);
      };
    } else {
      const HttpConfig http = http_config_from_env(config.http);
      factory = [http, &prompts](const Question&, const NodeState& root, std::uint64_t) {
        return std::make_unique<HttpOracle>(http, prompts, root);
      };
    }
  }

  RunReport report;
  report.dataset = config.dataset;
  report.questions = load_dataset(config.dataset, config.data);
  report.records.resize(report.questions.size());

  auto run_one = [&](std::size_t i) {
    const Question& q = report.questions[i];
    QuestionRecord& rec = report.records[i];
    rec.id = q.id;
    const std::uint64_t qseed = mix_seed(config.seed + i);
    nlohmann::ordered_json trace_question = q.to_json();
    try {
      NodeState root = root_state_for(q, prompts);
      if (config.baseline) {
        root.inference_mode = *config.baseline == Baseline::kOneShot ? InferenceMode::kRecite
                                                                     : InferenceMode::kThink;
      }
      auto oracle = factory(q, root, mix_seed(qseed ^ 0x5E17ULL));
      TraceExtras extras;
      extras.fields.emplace_back("index", i);
      extras.fields.emplace_back("question", trace_question);
      std::string trace;
      if (config.baseline) {
        OracleRequest req;
        req.prompt = prompts.build_prompt(root, Purpose::kSimulate);
        req.temperature = kJudgeTemperature;
        req.max_tokens = config.search.max_tokens;
        req.continuation = Continuation::kFull;
        rec.baseline_answer = oracle->generate(req);
        rec.ok = true;
        extras.fields.emplace_back("analysis", rec.to_json());
        Tree empty(root_state_for(q, prompts));
        trace = write_trace(empty, {}, nullptr, extras);
      } else {
        SearchConfig sc = config.search;
        sc.rng_seed = qseed;
        SearchResult result = run_search(root, sc, *oracle, prompts);
        Rng analysis_rng(mix_seed(qseed + 1));
        const Analysis a =
            analyze(result.tree, q.text, *oracle, sc.score_params, analysis_rng);
        rec.ok = true;
        rec.leaf_node = a.leaf.node;
        rec.leaf_answer = a.leaf.answer;
        rec.cluster_node = a.cluster_node;
        rec.cluster_answer = a.cluster_answer;
        rec.picked_answer = a.picked_answer;
        rec.representative_nodes = a.clustering.representatives;
        for (NodeId r : a.clustering.representatives) {
          rec.representatives.push_back(*result.tree.node(r).state.simulated_answer);
        }
        extras.fields.emplace_back("analysis", rec.to_json());
        trace = write_trace(result.tree, result.log, &a.clustering, extras);
      }
      write_file_atomic(config.out / ("q_" + safe_file_id(q.id) + ".json"), trace);
    } catch (const std::exception& e) {
      rec = QuestionRecord{};
      rec.id = q.id;
      rec.ok = false;
      rec.error = e.what();
      TraceExtras extras;
      extras.fields.emplace_back("index", i);
      extras.fields.emplace_back("question", trace_question);
      extras.fields.emplace_back("analysis", rec.to_json());
      Tree empty(make_root_state(q.text, "", TaskType::kSA, InferenceMode::kThink));
      try {
        write_file_atomic(config.out / ("q_" + safe_file_id(q.id) + ".json"),
                          write_trace(empty, {}, nullptr, extras));
      } catch (const std::exception&) {
      }
    }
  };

  const std::size_t n = report.questions.size();
  const std::size_t workers = std::clamp<std::size_t>(config.workers, 1, std::max<std::size_t>(n, 1));
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) run_one(i);
    });
  }
  for (auto& t : pool) t.join();

  for (const auto& r : report.records) report.failed += r.ok ? 0 : 1;
  report.metrics = compute_metrics(config.dataset, report.records, report.questions);
  write_file_atomic(config.out / "report.json", report.to_json(config).dump(2) + "\n");
  return report;
}

nlohmann::ordered_json evaluate_traces(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw Error(ErrorKind::kIoError, dir.string() + " is not a directory");
  }
  std::vector<std::pair<std::size_t, std::filesystem::path>> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    const auto name = entry.path().filename().string();
    if (name.rfind("q_", 0) != 0 || entry.path().extension() != ".json") continue;
    files.emplace_back(0, entry.path());
  }
  std::vector<std::tuple<std::size_t, Question, QuestionRecord>> rows;
  for (const auto& [_, path] : files) {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(read_text(path));
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(ErrorKind::kParseError, path.string() + ": " + e.what());
    }
    if (!doc.contains("question") || !doc.contains("analysis")) {
      throw Error(ErrorKind::kParseError, path.string() + ": not a benchmark trace");
    }
    rows.emplace_back(doc.value("index", std::size_t{0}), Question::from_json(doc["question"]),
                      QuestionRecord::from_json(doc["analysis"]));
  }
  std::sort(rows.begin(), rows.end(),
            [](const auto& a, const auto& b) { return std::get<0>(a) < std::get<0>(b); });
  std::vector<Question> questions;
  std::vector<QuestionRecord> records;
  std::size_t failed = 0;
  for (auto& [_, q, r] : rows) {
    failed += r.ok ? 0 : 1;
    questions.push_back(std::move(q));
    records.push_back(std::move(r));
  }
  if (questions.empty()) throw Error(ErrorKind::kIoError, "no q_*.json traces in " + dir.string());
  const DatasetKind kind = questions.front().kind;
  nlohmann::ordered_json j;
  j["dataset"] = std::string(to_string(kind));
  j["num_questions"] = records.size();
  j["failed"] = failed;
  j["metrics"] = compute_metrics(kind, records, questions);
  return j;
}

}  // namespace selt
