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

#include "selt/oracle.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <regex>
#include <set>
#include <sstream>

#include "selt/clustering.hpp"
#include "selt/error.hpp"

namespace selt {

Score::Score(double v) {
  if (std::isnan(v)) v = 0.0;
  value_ = std::clamp(v, 0.0, 1.0);
}

int parse_score(std::string_view text) {
  const std::string s(text);
  static const std::regex kOutOfTen(R"((\d+)\s*/\s*10(?!\d))");
  for (std::sregex_iterator it(s.begin(), s.end(), kOutOfTen), end; it != end; ++it) {
    const auto digits = (*it)[1].str();
    if (digits.size() <= 2) {
      const int v = std::stoi(digits);
      if (v <= 10) return v;
    }
  }
  static const std::regex kInteger(R"(\d+)");
  for (std::sregex_iterator it(s.begin(), s.end(), kInteger), end; it != end; ++it) {
    const auto digits = it->str();
    if (digits.size() > 2) continue;
    const int v = std::stoi(digits);
    if (v <= 10) return v;
  }
  throw Error(ErrorKind::kOracleScoreParse,
              "no integer 0-10 in \"" + std::string(text.substr(0, 80)) + "\"");
}

std::optional<std::size_t> parse_choice(std::string_view text, std::size_t n) {
  const std::string s(text);
  static const std::regex kParen(R"(\(([A-Z])\))");
  static const std::regex kBare(R"((^|[^A-Za-z])([A-Z])(?![A-Za-z]))");
  for (const auto* re : {&kParen, &kBare}) {
    for (std::sregex_iterator it(s.begin(), s.end(), *re), end; it != end; ++it) {
      const auto& m = *it;
      const char letter = m[m.size() - 1].str()[0];
      const auto idx = static_cast<std::size_t>(letter - 'A');
      if (idx < n) return idx;
    }
  }
  return std::nullopt;
}

double token_overlap(std::string_view a, std::string_view b) {
  const auto ta = tokenize(a);
  const auto tb = tokenize(b);
  const std::set<std::string> sa(ta.begin(), ta.end());
  const std::set<std::string> sb(tb.begin(), tb.end());
  if (sa.empty() && sb.empty()) return 1.0;
  std::size_t common = 0;
  for (const auto& t : sa) common += sb.count(t);
  const std::size_t uni = sa.size() + sb.size() - common;
  return static_cast<double>(common) / static_cast<double>(uni);
}

MockWorld make_mock_world(std::vector<std::vector<std::string>> levels,
                          std::span<const std::size_t> planted_choice) {
  if (levels.empty() || planted_choice.size() != levels.size()) {
    throw Error(ErrorKind::kInvalidArgument,
                "mock world needs one planted choice per level");
  }
  std::vector<std::string> planted;
  for (std::size_t l = 0; l < levels.size(); ++l) {
    if (planted_choice[l] >= levels[l].size()) {
      throw Error(ErrorKind::kInvalidArgument, "planted choice out of range");
    }
    planted.push_back(levels[l][planted_choice[l]]);
  }
  MockWorld w;
  w.planted_answer = join_path(planted);
  w.levels = std::move(levels);
  return w;
}

MockOracle::MockOracle(MockWorld world, std::uint64_t seed)
    : world_(std::move(world)), rng_(seed) {
  if (world_.levels.empty() ||
      std::any_of(world_.levels.begin(), world_.levels.end(),
                  [](const auto& l) { return l.empty(); })) {
    throw Error(ErrorKind::kInvalidArgument, "mock world levels must be non-empty");
  }
}

std::string MockOracle::draw(std::size_t level) {
  const auto& pool = world_.levels[std::min(level, world_.levels.size() - 1)];
  return pool[uniform_index(rng_, pool.size())];
}

std::string MockOracle::generate(const OracleRequest& request) {
  std::string out;
  if (request.continuation == Continuation::kStep) {
    out = draw(request.path.size());
  } else {
    // A full response covers every level; refining keeps each line of the
    // previous draft with probability 1/2.
    std::vector<std::string> prior;
    if (!request.path.empty()) {
      std::istringstream in(request.path.back());
      for (std::string line; std::getline(in, line);) prior.push_back(line);
    }
    std::vector<std::string> lines;
    for (std::size_t l = 0; l < world_.levels.size(); ++l) {
      const bool keep = l < prior.size() && uniform01(rng_) < 0.5;
      lines.push_back(keep ? prior[l] : draw(l));
    }
    out = join_path(lines);
  }
  calls_.push_back({"generate", request.prompt, {}, out});
  return out;
}

Score MockOracle::evaluate(std::string_view answer,
                           std::span<const std::string> references) {
  const Score s(world_.quality(answer));
  calls_.push_back({"evaluate", std::string(answer),
                    std::vector<std::string>(references.begin(), references.end()),
                    std::to_string(s.value())});
  return s;
}

std::size_t MockOracle::select(std::span<const std::string> candidates,
                               std::string_view question) {
  std::size_t best = 0;
  double best_q = -1.0;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const double q = world_.quality(candidates[i]);
    if (q > best_q) {
      best_q = q;
      best = i;
    }
  }
  calls_.push_back({"select", std::string(question),
                    std::vector<std::string>(candidates.begin(), candidates.end()),
                    std::to_string(best)});
  return best;
}

}  // namespace selt
