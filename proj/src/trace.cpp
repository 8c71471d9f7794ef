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

#include "selt/trace.hpp"

#include <cstdio>
#include <fstream>
#include <map>

#include "selt/error.hpp"

namespace selt {

namespace {

std::string quote(const std::string& s) { return nlohmann::json(s).dump(); }

}  // namespace

std::string format_fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string write_trace(const Tree& tree, std::span<const IterationLog> log,
                        const Clustering* final_clustering,
                        const TraceExtras& extras) {
  std::map<std::uint32_t, std::size_t> cluster_of;
  if (final_clustering) {
    for (std::size_t i = 0; i < final_clustering->members.size(); ++i) {
      cluster_of[final_clustering->members[i].value] = final_clustering->labels[i];
    }
  }

  std::string out = "{\n  \"root\": " + std::to_string(tree.root().value) +
                    ",\n  \"nodes\": [";
  for (std::uint32_t i = 0; i < tree.size(); ++i) {
    const Node& n = tree.nodes()[i];
    out += i == 0 ? "\n    " : ",\n    ";
    out += "{\"id\": " + std::to_string(i);
    out += ", \"parent\": " + (n.parent ? std::to_string(n.parent->value) : "null");
    out += ", \"step_text\": " + quote(n.step_text);
    out += ", \"answer\": " +
           (n.state.simulated_answer ? quote(*n.state.simulated_answer) : "null");
    out += ", \"visits\": " + std::to_string(n.visits);
    out += ", \"reward\": " + format_fixed6(n.reward);
    out += ", \"reward_list\": [";
    for (std::size_t r = 0; r < n.reward_list.size(); ++r) {
      if (r > 0) out += ", ";
      out += format_fixed6(n.reward_list[r]);
    }
    out += "], \"depth\": " + std::to_string(n.state.depth);
    out += ", \"terminal\": ";
    out += n.state.terminal ? "true" : "false";
    const auto c = cluster_of.find(i);
    out += ", \"cluster\": " + (c != cluster_of.end() ? std::to_string(c->second) : "null");
    out += "}";
  }
  out += tree.size() ? "\n  ],\n  \"iterations\": [" : "],\n  \"iterations\": [";
  for (std::size_t i = 0; i < log.size(); ++i) {
    const IterationLog& e = log[i];
    out += i == 0 ? "\n    " : ",\n    ";
    out += "{\"iter\": " + std::to_string(e.iter);
    out += ", \"selected_node\": " + std::to_string(e.selected_node.value);
    out += ", \"delta\": " + format_fixed6(e.delta);
    out += ", \"restarts\": " + std::to_string(e.restarts);
    out += ", \"num_clusters\": " + std::to_string(e.num_clusters) + "}";
  }
  out += log.empty() ? "]" : "\n  ]";
  for (const auto& [key, value] : extras.fields) {
    out += ",\n  " + quote(key) + ": " + value.dump();
  }
  out += "\n}\n";
  return out;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Error(ErrorKind::kIoError, "cannot open " + tmp.string());
    f << contents;
    if (!f.flush()) throw Error(ErrorKind::kIoError, "cannot write " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(ErrorKind::kIoError, "rename " + tmp.string() + ": " + ec.message());
}

}  // namespace selt
