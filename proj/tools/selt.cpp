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

// selt: command-line front end for the search engine and benchmark harness.
//
//   selt run --dataset mmlu --data q.csv --out runs/a [--oracle mock|http] ...
//   selt eval --traces runs/a
//   selt cluster --docs answers.txt

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "selt/clustering.hpp"
#include "selt/error.hpp"
#include "selt/harness.hpp"

#ifndef SELT_TEMPLATE_DIR
#define SELT_TEMPLATE_DIR "templates"
#endif

namespace {

int cmd_cluster(const std::string& docs_path, std::uint64_t seed) {
  std::ifstream in(docs_path);
  if (!in) {
    std::cerr << "selt: cannot read " << docs_path << "\n";
    return 2;
  }
  std::vector<std::string> docs;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) docs.push_back(line);
  }
  selt::Rng rng(seed);
  const auto result = selt::cluster_documents(docs, rng);
  nlohmann::ordered_json j;
  j["k"] = result.k;
  j["labels"] = result.labels;
  j["eigenvalues"] = result.eigenvalues;
  std::cout << j.dump() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Self-evaluation tree search for stepwise LLM reasoning"};
  app.require_subcommand(1);

  selt::BenchmarkConfig cfg;
  std::string dataset = "mmlu", scoring = "alpha_beta", granularity = "sentence";
  std::string oracle = "mock", baseline, templates = SELT_TEMPLATE_DIR;
  std::string data, out;
  std::size_t depth_cap = 0;
  double c_p = cfg.search.score_params.c_p, c_beta = cfg.search.score_params.c_beta;

  auto* run = app.add_subcommand("run", "Search every question of a dataset");
  run->add_option("--dataset", dataset, "mmlu or sealtools")
      ->check(CLI::IsMember({"mmlu", "sealtools"}));
  run->add_option("--data", data, "Dataset file")->required();
  run->add_option("--steps", cfg.search.steps, "Search iterations per question")
      ->capture_default_str();
  run->add_option("--scoring", scoring, "raw, alpha, beta or alpha_beta")
      ->check(CLI::IsMember({"raw", "alpha", "beta", "alpha_beta"}))
      ->capture_default_str();
  run->add_option("--granularity", granularity, "sentence or response")
      ->check(CLI::IsMember({"sentence", "response"}))
      ->capture_default_str();
  run->add_option("--depth-cap", depth_cap, "Maximum tree depth (default 10 / 4)");
  run->add_option("--c-p", c_p, "Exploration constant")->capture_default_str();
  run->add_option("--c-beta", c_beta, "Bayesian prior strength")->capture_default_str();
  run->add_option("--descend-probability", cfg.search.descend_probability)
      ->capture_default_str();
  run->add_option("--marker", cfg.search.answer_marker, "Answer marker")
      ->capture_default_str();
  run->add_option("--oracle", oracle, "mock or http")
      ->check(CLI::IsMember({"mock", "http"}))
      ->capture_default_str();
  run->add_option("--endpoint", cfg.http.endpoint, "Base URL (or SELT_ENDPOINT)");
  run->add_option("--model", cfg.http.model, "Model name sent to the endpoint");
  run->add_option("--seed", cfg.seed, "Master seed")->capture_default_str();
  run->add_option("--workers", cfg.workers, "Concurrent questions")->capture_default_str();
  run->add_option("--out", out, "Output directory")->required();
  run->add_option("--baseline", baseline, "Skip search: 1shot or 1shot_cot")
      ->check(CLI::IsMember({"1shot", "1shot_cot"}));
  run->add_flag("--force", cfg.force, "Overwrite existing results");
  run->add_option("--templates", templates, "Prompt template directory")
      ->capture_default_str();

  std::string traces;
  auto* eval = app.add_subcommand("eval", "Recompute metrics from a trace directory");
  eval->add_option("--traces", traces, "Directory written by `selt run`")->required();

  std::string docs;
  std::uint64_t cluster_seed = 0;
  auto* cluster = app.add_subcommand("cluster", "Cluster newline-delimited documents");
  cluster->add_option("--docs", docs, "One document per line")->required();
  cluster->add_option("--seed", cluster_seed, "k-means seed")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*cluster) return cmd_cluster(docs, cluster_seed);

    if (*eval) {
      std::cout << selt::evaluate_traces(traces).dump(2) << "\n";
      return 0;
    }

    cfg.dataset = *selt::parse_dataset_kind(dataset);
    cfg.data = data;
    cfg.out = out;
    cfg.templates = templates;
    cfg.search.score_params.variant = *selt::parse_score_variant(scoring);
    cfg.search.score_params.c_p = c_p;
    cfg.search.score_params.c_beta = c_beta;
    cfg.search.granularity = *selt::parse_granularity(granularity);
    cfg.search.depth_cap =
        depth_cap ? depth_cap : selt::default_depth_cap(cfg.search.granularity);
    cfg.oracle = oracle == "http" ? selt::OracleKind::kHttp : selt::OracleKind::kMock;
    if (!baseline.empty()) cfg.baseline = selt::parse_baseline(baseline);

    const auto prompts = selt::PromptLibrary::load(cfg.templates);
    if (prompts.size() == 0) {
      std::cerr << "selt: no templates found under " << cfg.templates << "\n";
      return 2;
    }
    for (const auto& u : prompts.unsupported()) {
      std::cerr << "selt: template unsupported: " << u << "\n";
    }

    const auto report = selt::run_benchmark(cfg, prompts);
    std::cout << report.metrics.dump(2) << "\n";
    if (report.failed > 0) {
      std::cerr << "selt: " << report.failed << " of " << report.records.size()
                << " questions failed\n";
    }
    return report.too_many_failures() ? 1 : 0;
  } catch (const selt::Error& e) {
    std::cerr << "selt: " << e.what() << "\n";
    return 2;
  }
}
