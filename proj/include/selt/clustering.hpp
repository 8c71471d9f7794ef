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

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "selt/random.hpp"
#include "selt/tree.hpp"

namespace selt {

inline constexpr std::size_t kMaxClusters = 5;

// Sorted by term id, L2-normalized (or empty for a document with no tokens).
struct SparseVector {
  std::vector<std::pair<std::uint32_t, double>> entries;
};

struct SimilarityMatrix {
  Eigen::MatrixXd values;  // symmetric, entries in [0, 1]

  std::size_t n() const { return static_cast<std::size_t>(values.rows()); }
};

struct Spectrum {
  Eigen::VectorXd eigenvalues;   // ascending, clamped at 0 from below
  Eigen::MatrixXd eigenvectors;  // column i pairs with eigenvalues[i]
};

struct KMeansOptions {
  std::size_t max_iterations = 100;
  std::size_t restarts = 10;
};

struct KMeansResult {
  std::vector<std::size_t> labels;
  double inertia = 0.0;
};

struct Clustering {
  std::size_t k = 0;
  std::vector<NodeId> members;             // answered nodes, ascending id
  std::vector<std::size_t> labels;         // labels[i] is the cluster of members[i]
  std::vector<NodeId> representatives;     // one per cluster
  std::vector<double> eigenvalues;         // ascending
};

// Lowercases, splits on non-alphanumerics, drops empty tokens.
std::vector<std::string> tokenize(std::string_view text);

// Raw-count tf times smoothed idf ln((1+N)/(1+df)) + 1, L2-normalized.
// Throws kEmptyVocabulary when no document has a token.
std::vector<SparseVector> tfidf_vectors(std::span<const std::string> docs);

double sparse_dot(const SparseVector& a, const SparseVector& b);

// Pairwise cosine similarity. The default entry point is OpenMP-parallel;
// the serial version is the reference it is tested against.
SimilarityMatrix similarity_matrix(std::span<const SparseVector> vectors);
SimilarityMatrix similarity_matrix_serial(std::span<const SparseVector> vectors);

// Unnormalized graph Laplacian D - A, with A = S minus its diagonal.
Eigen::MatrixXd laplacian(const SimilarityMatrix& s);

// Symmetric eigendecomposition; throws kEigenFailure if it does not converge.
Spectrum laplacian_spectrum(const Eigen::MatrixXd& l);

// Position of the largest gap between consecutive ascending eigenvalues,
// capped at `cap` and at the number of eigenvalues. First maximal gap wins.
std::size_t eigengap_count(std::span<const double> eigenvalues,
                           std::size_t cap = kMaxClusters);

// Nearest-center assignment for every row; returns the summed squared
// distance. Parallel and serial variants must agree exactly.
double assign_nearest(const Eigen::MatrixXd& points,
                      const Eigen::MatrixXd& centers,
                      std::vector<std::size_t>& labels);
double assign_nearest_serial(const Eigen::MatrixXd& points,
                             const Eigen::MatrixXd& centers,
                             std::vector<std::size_t>& labels);

// k-means++ seeding plus Lloyd iterations; best inertia over restarts.
KMeansResult kmeans(const Eigen::MatrixXd& points, std::size_t k, Rng& rng,
                    const KMeansOptions& options = {});

// Rows of the k smallest-eigenvalue eigenvectors, clustered with k-means.
std::vector<std::size_t> spectral_cluster(const SimilarityMatrix& s,
                                          std::size_t k, Rng& rng);
std::vector<std::size_t> spectral_cluster(const Spectrum& spectrum,
                                          std::size_t k, Rng& rng);

struct DocumentClustering {
  std::size_t k = 1;
  std::vector<std::size_t> labels;
  std::vector<double> eigenvalues;
};

// Full pipeline over raw texts: tfidf, similarity, Laplacian, eigengap,
// spectral clustering.
DocumentClustering cluster_documents(std::span<const std::string> docs, Rng& rng);

// Clusters every answered node of the tree and picks, per cluster, the
// member with the highest mean reward (ties: more visits, then lower id).
Clustering cluster_answers(const Tree& tree, Rng& rng);

}  // namespace selt
