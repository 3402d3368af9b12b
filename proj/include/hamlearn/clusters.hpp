// Copyright 2026 The hamlearn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef HAMLEARN_CLUSTERS_HPP
#define HAMLEARN_CLUSTERS_HPP

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "hamlearn/hamiltonian.hpp"

namespace hamlearn {

/// Qubit subsets are bitmasks (qubit q -> bit q).
using QubitSet = std::uint64_t;

std::vector<int> qubits_of(QubitSet set);

/// Maximal term supports: every support that is a subset of (or equal to)
/// another is dropped, keeping one representative per maximal set.
/// Deterministic output: sorted by (min qubit index, size, mask).
std::vector<QubitSet> build_clusters(const Hamiltonian& h);

/// Cluster graph with edges between clusters that intersect directly or via
/// a common third cluster, greedily colored in the deterministic cluster
/// order. Within a color class, clusters are pairwise disjoint and no third
/// cluster intersects two of them.
struct ClusterColoring {
  std::vector<QubitSet> clusters;               // deterministic order
  std::vector<std::pair<int, int>> edges;       // i < j index pairs
  std::vector<int> color_of;                    // per cluster, in [0, n_colors)
  int n_colors = 0;
  std::vector<std::vector<int>> classes;        // cluster indices per color

  QubitSet class_union(int color) const;
};

ClusterColoring build_cluster_graph_and_color(std::vector<QubitSet> clusters);

/// Per-color graph on the qubits outside the color's clusters; two free
/// qubits are adjacent iff some term covers both and also touches the
/// color's cluster union. n_colors is 0 when there are no free qubits.
struct QubitColoring {
  int color = 0;
  QubitSet free_qubits = 0;
  std::vector<std::pair<int, int>> edges;       // qubit index pairs
  std::vector<int> color_of_qubit;              // size n_qubits; -1 off the graph
  int n_colors = 0;
};

QubitColoring build_qubit_graph_and_color(const Hamiltonian& h, const ClusterColoring& coloring,
                                          int color);

/// Single-qubit measurement-axis assignment for one cluster: letters in
/// {X, Y, Z}, one per cluster qubit in ascending qubit order.
struct ClusterBasis {
  QubitSet cluster = 0;
  std::vector<Letter> letters;  // aligned with qubits_of(cluster)

  ClusterBasis() = default;
  ClusterBasis(QubitSet cluster, std::vector<Letter> letters);

  Letter letter_at(int qubit) const;
  int size() const { return static_cast<int>(letters.size()); }
};

/// All |cluster| letters equal to l.
ClusterBasis uniform_basis(QubitSet cluster, Letter l);

/// Coefficients of the terms of h that live inside the cluster and whose
/// letters match the basis on their whole support. Key: bit pattern over the
/// cluster qubits in ascending order (bit i = i-th qubit acts). The all-zero
/// pattern (identity) never appears.
std::map<std::uint32_t, double> diagonal_part(const Hamiltonian& h, QubitSet cluster,
                                              const ClusterBasis& basis);

}  // namespace hamlearn

#endif  // HAMLEARN_CLUSTERS_HPP
