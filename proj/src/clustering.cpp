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

#include "selt/clustering.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include "selt/error.hpp"
#include "selt/scoring.hpp"

namespace selt {

namespace {

// Eigenvalues and gaps closer than this are treated as equal.
constexpr double kEigenTolerance = 1e-10;

bool is_token_char(unsigned char c) { return c >= 0x80 || std::isalnum(c); }

double cosine_entry(const SparseVector& a, const SparseVector& b) {
  return std::clamp(sparse_dot(a, b), 0.0, 1.0);
}

double squared_distance(const Eigen::MatrixXd& points, Eigen::Index row,
                        const Eigen::MatrixXd& centers, Eigen::Index c) {
  return (points.row(row) - centers.row(c)).squaredNorm();
}

std::size_t nearest_center(const Eigen::MatrixXd& points, Eigen::Index row,
                           const Eigen::MatrixXd& centers, double& best_d) {
  std::size_t best = 0;
  best_d = std::numeric_limits<double>::infinity();
  for (Eigen::Index c = 0; c < centers.rows(); ++c) {
    const double d = squared_distance(points, row, centers, c);
    if (d < best_d) {
      best_d = d;
      best = static_cast<std::size_t>(c);
    }
  }
  return best;
}

Eigen::MatrixXd seed_plus_plus(const Eigen::MatrixXd& points, std::size_t k,
                               Rng& rng) {
  const Eigen::Index n = points.rows();
  Eigen::MatrixXd centers(static_cast<Eigen::Index>(k), points.cols());
  centers.row(0) = points.row(static_cast<Eigen::Index>(
      uniform_index(rng, static_cast<std::uint64_t>(n))));
  std::vector<double> d2(static_cast<std::size_t>(n),
                         std::numeric_limits<double>::infinity());
  for (std::size_t c = 1; c < k; ++c) {
    double total = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      auto& d = d2[static_cast<std::size_t>(i)];
      d = std::min(d, squared_distance(points, i, centers,
                                       static_cast<Eigen::Index>(c - 1)));
      total += d;
    }
    Eigen::Index pick = 0;
    if (total > 0.0) {
      const double target = uniform01(rng) * total;
      double acc = 0.0;
      pick = n - 1;
      for (Eigen::Index i = 0; i < n; ++i) {
        acc += d2[static_cast<std::size_t>(i)];
        if (acc > target && d2[static_cast<std::size_t>(i)] > 0.0) {
          pick = i;
          break;
        }
      }
    } else {
      pick = static_cast<Eigen::Index>(
          uniform_index(rng, static_cast<std::uint64_t>(n)));
    }
    centers.row(static_cast<Eigen::Index>(c)) = points.row(pick);
  }
  return centers;
}

KMeansResult lloyd(const Eigen::MatrixXd& points, Eigen::MatrixXd centers,
                   std::size_t max_iterations) {
  const Eigen::Index n = points.rows();
  const Eigen::Index k = centers.rows();
  KMeansResult result;
  result.labels.assign(static_cast<std::size_t>(n), 0);
  result.inertia = assign_nearest(points, centers, result.labels);

  for (std::size_t iter = 0; iter < max_iterations; ++iter) {
    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, points.cols());
    std::vector<std::size_t> counts(static_cast<std::size_t>(k), 0);
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto c = result.labels[static_cast<std::size_t>(i)];
      sums.row(static_cast<Eigen::Index>(c)) += points.row(i);
      ++counts[c];
    }
    for (Eigen::Index c = 0; c < k; ++c) {
      if (counts[static_cast<std::size_t>(c)] > 0) {
        centers.row(c) = sums.row(c) / static_cast<double>(counts[static_cast<std::size_t>(c)]);
        continue;
      }
      // Empty cluster: steal the point farthest from its current center.
      Eigen::Index far = 0;
      double far_d = -1.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        const double d = squared_distance(
            points, i, centers,
            static_cast<Eigen::Index>(result.labels[static_cast<std::size_t>(i)]));
        if (d > far_d) {
          far_d = d;
          far = i;
        }
      }
      centers.row(c) = points.row(far);
    }
    std::vector<std::size_t> next(static_cast<std::size_t>(n), 0);
    const double inertia = assign_nearest(points, centers, next);
    const bool stable = next == result.labels;
    result.labels = std::move(next);
    result.inertia = inertia;
    if (stable) break;
  }
  return result;
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string cur;
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (is_token_char(c)) {
      cur.push_back(static_cast<char>(std::tolower(c)));
    } else if (!cur.empty()) {
      tokens.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) tokens.push_back(std::move(cur));
  return tokens;
}

std::vector<SparseVector> tfidf_vectors(std::span<const std::string> docs) {
  if (docs.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "tfidf needs at least one document");
  }
  std::vector<std::map<std::string, double>> counts(docs.size());
  std::map<std::string, std::size_t> df;
  for (std::size_t d = 0; d < docs.size(); ++d) {
    for (auto& tok : tokenize(docs[d])) counts[d][tok] += 1.0;
    for (const auto& [tok, _] : counts[d]) ++df[tok];
  }
  if (df.empty()) {
    throw Error(ErrorKind::kEmptyVocabulary, "no document contains a token");
  }

  std::map<std::string, std::uint32_t> ids;
  std::vector<double> idf;
  const double n_docs = static_cast<double>(docs.size());
  for (const auto& [tok, freq] : df) {
    ids.emplace(tok, static_cast<std::uint32_t>(idf.size()));
    idf.push_back(std::log((1.0 + n_docs) / (1.0 + static_cast<double>(freq))) + 1.0);
  }

  std::vector<SparseVector> out(docs.size());
  for (std::size_t d = 0; d < docs.size(); ++d) {
    double norm2 = 0.0;
    for (const auto& [tok, tf] : counts[d]) {
      const auto id = ids.at(tok);
      const double w = tf * idf[id];
      out[d].entries.emplace_back(id, w);
      norm2 += w * w;
    }
    const double norm = std::sqrt(norm2);
    if (norm > 0.0) {
      for (auto& e : out[d].entries) e.second /= norm;
    }
  }
  return out;
}

double sparse_dot(const SparseVector& a, const SparseVector& b) {
  double sum = 0.0;
  auto ia = a.entries.begin();
  auto ib = b.entries.begin();
  while (ia != a.entries.end() && ib != b.entries.end()) {
    if (ia->first < ib->first) {
      ++ia;
    } else if (ib->first < ia->first) {
      ++ib;
    } else {
      sum += ia->second * ib->second;
      ++ia;
      ++ib;
    }
  }
  return sum;
}

SimilarityMatrix similarity_matrix_serial(std::span<const SparseVector> vectors) {
  const auto n = static_cast<Eigen::Index>(vectors.size());
  SimilarityMatrix s{Eigen::MatrixXd::Identity(n, n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double v = cosine_entry(vectors[static_cast<std::size_t>(i)],
                                    vectors[static_cast<std::size_t>(j)]);
      s.values(i, j) = v;
      s.values(j, i) = v;
    }
  }
  return s;
}

SimilarityMatrix similarity_matrix(std::span<const SparseVector> vectors) {
  const auto n = static_cast<Eigen::Index>(vectors.size());
  SimilarityMatrix s{Eigen::MatrixXd::Identity(n, n)};
  // Row i owns the upper-triangle cells (i, j > i) and their mirrors, so
  // no two iterations write the same entry.
#pragma omp parallel for schedule(dynamic, 4)
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double v = cosine_entry(vectors[static_cast<std::size_t>(i)],
                                    vectors[static_cast<std::size_t>(j)]);
      s.values(i, j) = v;
      s.values(j, i) = v;
    }
  }
  return s;
}

Eigen::MatrixXd laplacian(const SimilarityMatrix& s) {
  Eigen::MatrixXd a = s.values;
  a.diagonal().setZero();
  Eigen::MatrixXd l = -a;
  l.diagonal() = a.rowwise().sum();
  return l;
}

Spectrum laplacian_spectrum(const Eigen::MatrixXd& l) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(l);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::kEigenFailure, "symmetric eigensolver did not converge");
  }
  Spectrum out{solver.eigenvalues(), solver.eigenvectors()};
  for (Eigen::Index i = 0; i < out.eigenvalues.size(); ++i) {
    if (out.eigenvalues[i] < kEigenTolerance) out.eigenvalues[i] = 0.0;
  }
  return out;
}

std::size_t eigengap_count(std::span<const double> eigenvalues, std::size_t cap) {
  if (eigenvalues.size() <= 1) return 1;
  std::size_t k = 1;
  double best_gap = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < eigenvalues.size(); ++i) {
    const double gap = std::max(eigenvalues[i + 1], 0.0) - std::max(eigenvalues[i], 0.0);
    if (gap > best_gap + kEigenTolerance) {
      best_gap = gap;
      k = i + 1;
    }
  }
  return std::max<std::size_t>(1, std::min({k, cap, eigenvalues.size()}));
}

double assign_nearest_serial(const Eigen::MatrixXd& points,
                             const Eigen::MatrixXd& centers,
                             std::vector<std::size_t>& labels) {
  labels.resize(static_cast<std::size_t>(points.rows()));
  double inertia = 0.0;
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    double d = 0.0;
    labels[static_cast<std::size_t>(i)] = nearest_center(points, i, centers, d);
    inertia += d;
  }
  return inertia;
}

double assign_nearest(const Eigen::MatrixXd& points,
                      const Eigen::MatrixXd& centers,
                      std::vector<std::size_t>& labels) {
  const Eigen::Index n = points.rows();
  labels.resize(static_cast<std::size_t>(n));
  std::vector<double> dist(static_cast<std::size_t>(n), 0.0);
#pragma omp parallel for schedule(static)
  for (Eigen::Index i = 0; i < n; ++i) {
    labels[static_cast<std::size_t>(i)] =
        nearest_center(points, i, centers, dist[static_cast<std::size_t>(i)]);
  }
  // Summed in index order so the result is bit-identical to the serial path.
  double inertia = 0.0;
  for (double d : dist) inertia += d;
  return inertia;
}

KMeansResult kmeans(const Eigen::MatrixXd& points, std::size_t k, Rng& rng,
                    const KMeansOptions& options) {
  const auto n = static_cast<std::size_t>(points.rows());
  if (k == 0 || k > n) {
    throw Error(ErrorKind::kInvalidArgument,
                "k-means needs 1 <= k <= n (k=" + std::to_string(k) +
                    ", n=" + std::to_string(n) + ")");
  }
  KMeansResult best;
  best.inertia = std::numeric_limits<double>::infinity();
  const std::size_t restarts = std::max<std::size_t>(1, options.restarts);
  for (std::size_t r = 0; r < restarts; ++r) {
    KMeansResult run = lloyd(points, seed_plus_plus(points, k, rng),
                             options.max_iterations);
    if (run.inertia < best.inertia) best = std::move(run);
  }
  return best;
}

std::vector<std::size_t> spectral_cluster(const Spectrum& spectrum,
                                          std::size_t k, Rng& rng) {
  const auto n = static_cast<std::size_t>(spectrum.eigenvectors.rows());
  if (k == 0 || k > n) {
    throw Error(ErrorKind::kInvalidArgument, "spectral clustering needs 1 <= k <= n");
  }
  if (k == 1) return std::vector<std::size_t>(n, 0);
  const Eigen::MatrixXd embedding =
      spectrum.eigenvectors.leftCols(static_cast<Eigen::Index>(k));
  return kmeans(embedding, k, rng).labels;
}

std::vector<std::size_t> spectral_cluster(const SimilarityMatrix& s,
                                          std::size_t k, Rng& rng) {
  if (k == 1) return std::vector<std::size_t>(s.n(), 0);
  return spectral_cluster(laplacian_spectrum(laplacian(s)), k, rng);
}

DocumentClustering cluster_documents(std::span<const std::string> docs, Rng& rng) {
  DocumentClustering out;
  if (docs.size() <= 1) {
    out.labels.assign(docs.size(), 0);
    if (!docs.empty()) out.eigenvalues.push_back(0.0);
    return out;
  }
  const auto vectors = tfidf_vectors(docs);
  const Spectrum spectrum = laplacian_spectrum(laplacian(similarity_matrix(vectors)));
  out.eigenvalues.assign(spectrum.eigenvalues.begin(), spectrum.eigenvalues.end());
  out.k = eigengap_count(out.eigenvalues);
  out.labels = spectral_cluster(spectrum, out.k, rng);
  return out;
}

Clustering cluster_answers(const Tree& tree, Rng& rng) {
  Clustering out;
  std::vector<std::string> docs;
  for (std::uint32_t i = 0; i < tree.size(); ++i) {
    const auto& answer = tree.nodes()[i].state.simulated_answer;
    if (!answer) continue;
    out.members.push_back(NodeId{i});
    docs.push_back(*answer);
  }
  if (out.members.empty()) {
    throw Error(ErrorKind::kNoAnswer, "no node carries a simulated answer");
  }

  DocumentClustering dc;
  try {
    dc = cluster_documents(docs, rng);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::kEmptyVocabulary) throw;
    dc.k = 1;
    dc.labels.assign(docs.size(), 0);
  }
  out.k = dc.k;
  out.labels = std::move(dc.labels);
  out.eigenvalues = std::move(dc.eigenvalues);

  // k-means may leave a cluster index unused; compact labels so every
  // cluster is non-empty and labels stay dense.
  std::vector<std::size_t> remap(out.k, out.k);
  std::size_t next = 0;
  for (auto& label : out.labels) {
    if (remap[label] == out.k) remap[label] = next++;
    label = remap[label];
  }
  out.k = next;

  out.representatives.assign(out.k, NodeId{0});
  std::vector<bool> have(out.k, false);
  for (std::size_t i = 0; i < out.members.size(); ++i) {
    const std::size_t c = out.labels[i];
    const NodeId cand = out.members[i];
    if (!have[c]) {
      out.representatives[c] = cand;
      have[c] = true;
      continue;
    }
    const Node& a = tree.node(cand);
    const Node& b = tree.node(out.representatives[c]);
    // Unvisited members never outrank a visited one.
    if (a.visits == 0) continue;
    if (b.visits == 0) {
      out.representatives[c] = cand;
      continue;
    }
    const double ma = a.reward / static_cast<double>(a.visits);
    const double mb = b.reward / static_cast<double>(b.visits);
    if (ma > mb || (ma == mb && a.visits > b.visits)) {
      out.representatives[c] = cand;
    }
  }
  return out;
}

}  // namespace selt
