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

#include <cstdlib>
#include <iostream>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "selt/error.hpp"
#include "selt/oracle.hpp"

namespace selt {

namespace {

struct SplitUrl {
  std::string scheme_host_port;
  std::string path_prefix;
};

SplitUrl split_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  const auto host_start = scheme_end == std::string::npos ? 0 : scheme_end + 3;
  const auto path_start = url.find('/', host_start);
  SplitUrl out;
  out.scheme_host_port = url.substr(0, path_start);
  if (path_start != std::string::npos) out.path_prefix = url.substr(path_start);
  while (!out.path_prefix.empty() && out.path_prefix.back() == '/') {
    out.path_prefix.pop_back();
  }
  return out;
}

bool retryable(int status) { return status == 429 || status >= 500; }

}  // namespace

HttpConfig http_config_from_env(HttpConfig base) {
  if (base.endpoint.empty()) {
    if (const char* e = std::getenv("SELT_ENDPOINT")) base.endpoint = e;
  }
  if (base.api_key.empty()) {
    if (const char* k = std::getenv("SELT_API_KEY")) base.api_key = k;
  }
  return base;
}

HttpOracle::HttpOracle(HttpConfig config, const PromptLibrary& prompts,
                       NodeState question)
    : config_(std::move(config)), prompts_(prompts), question_(std::move(question)) {
  if (config_.endpoint.empty()) {
    throw Error(ErrorKind::kInvalidArgument,
                "HTTP oracle needs --endpoint or SELT_ENDPOINT");
  }
}

std::string HttpOracle::request_body(const OracleRequest& request) const {
  nlohmann::ordered_json body;
  body["model"] = config_.model;
  body["messages"] = nlohmann::ordered_json::array(
      {{{"role", "user"}, {"content", request.prompt}}});
  body["temperature"] = request.temperature;
  body["max_tokens"] = request.max_tokens;
  if (request.stop.empty()) {
    body["stop"] = nullptr;
  } else {
    body["stop"] = request.stop;
  }
  return body.dump();
}

std::string HttpOracle::post(const OracleRequest& request) {
  if (request.prompt.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "empty prompt");
  }
  const SplitUrl url = split_url(config_.endpoint);
  httplib::Client client(url.scheme_host_port);
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(config_.timeout);
  const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(
      config_.timeout - secs);
  client.set_connection_timeout(secs.count(), usecs.count());
  client.set_read_timeout(secs.count(), usecs.count());
  client.set_write_timeout(secs.count(), usecs.count());

  httplib::Headers headers;
  if (!config_.api_key.empty()) {
    headers.emplace("Authorization", "Bearer " + config_.api_key);
  }
  const std::string path = url.path_prefix + "/v1/chat/completions";
  const std::string body = request_body(request);

  std::string last_error;
  auto wait = config_.backoff;
  for (int attempt = 0; attempt <= config_.retries; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(wait);
      wait *= 2;
    }
    auto res = client.Post(path, headers, body, "application/json");
    if (!res) {
      last_error = "transport: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status != 200) {
      last_error = "HTTP " + std::to_string(res->status);
      if (retryable(res->status)) continue;
      break;
    }
    nlohmann::json reply;
    try {
      reply = nlohmann::json::parse(res->body);
      const auto& content = reply.at("choices").at(0).at("message").at("content");
      std::string text = content.is_string() ? content.get<std::string>() : "";
      if (text.find_first_not_of(" \t\r\n") == std::string::npos) {
        throw Error(ErrorKind::kOracleEmpty, "blank completion");
      }
      return text;
    } catch (const nlohmann::json::exception& e) {
      last_error = std::string("malformed reply: ") + e.what();
      break;
    }
  }
  throw Error(ErrorKind::kOracleUnavailable, last_error);
}

std::string HttpOracle::generate(const OracleRequest& request) {
  return post(request);
}

Score HttpOracle::evaluate(std::string_view answer,
                           std::span<const std::string> references) {
  if (answer.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "evaluate needs a non-empty answer");
  }
  NodeState state = question_;
  state.reasoning_path = {std::string(answer)};
  OracleRequest req;
  req.prompt = prompts_.build_prompt(state, Purpose::kEvaluate, references);
  req.temperature = kJudgeTemperature;
  req.max_tokens = 64;
  return Score(parse_score(post(req)) / 10.0);
}

std::size_t HttpOracle::select(std::span<const std::string> candidates,
                               std::string_view question) {
  if (candidates.size() <= 1) return 0;
  NodeState state = question_;
  state.reasoning_path.clear();
  if (question != state.question()) {
    state.context = std::make_shared<const PromptContext>(
        PromptContext{std::string(question), state.examples()});
  }
  OracleRequest req;
  req.prompt = prompts_.build_prompt(state, Purpose::kSelect, candidates);
  req.temperature = kJudgeTemperature;
  req.max_tokens = 64;
  const std::string reply = post(req);
  if (auto idx = parse_choice(reply, candidates.size())) return *idx;
  std::cerr << "[selt] warning: could not parse a choice from \""
            << reply.substr(0, 80) << "\"; using option A\n";
  return 0;
}

}  // namespace selt
