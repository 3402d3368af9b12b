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

#include "hamlearn/clusters.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace hamlearn {

std::vector<int> qubits_of(QubitSet set) {
  std::vector<int> out;
  while (set) {
    out.push_back(std::countr_zero(set));
    set &= set - 1;
  }
  return out;
}

namespace {

bool subset_of(QubitSet a, QubitSet b) { return (a & ~b) == 0; }

// Deterministic vertex order used for both cluster output and greedy coloring.
void sort_clusters(std::vector<QubitSet>& v) {
  std::sort(v.begin(), v.end(), [](QubitSet a, QubitSet b) {
    const int qa = std::countr_zero(a), qb = std::countr_zero(b);
    if (qa != qb) return qa < qb;
    const int wa = std::popcount(a), wb = std::popcount(b);
    if (wa != wb) return wa < wb;
    return a < b;
  });
}

int greedy_color(int n_vertices, const std::vector<std::vector<int>>& adj,
                 std::vector<int>& color_of) {
  color_of.assign(static_cast<std::size_t>(n_vertices), -1);
  int n_colors = 0;
  std::vector<char> used;
  for (int v = 0; v < n_vertices; ++v) {
    used.assign(static_cast<std::size_t>(n_colors + 1), 0);
    for (int u : adj[static_cast<std::size_t>(v)]) {
      if (color_of[static_cast<std::size_t>(u)] >= 0) {
        used[static_cast<std::size_t>(color_of[static_cast<std::size_t>(u)])] = 1;
      }
    }
    int c = 0;
    while (used[static_cast<std::size_t>(c)]) ++c;
    color_of[static_cast<std::size_t>(v)] = c;
    n_colors = std::max(n_colors, c + 1);
  }
  return n_colors;
}

}  // namespace

std::vector<QubitSet> build_clusters(const Hamiltonian& h) {
  std::vector<QubitSet> supports;
  supports.reserve(h.size());
  for (const Term& t : h.terms()) supports.push_back(t.op.support_mask());
  std::sort(supports.begin(), supports.end());
  supports.erase(std::unique(supports.begin(), supports.end()), supports.end());

  std::vector<QubitSet> maximal;
  for (QubitSet s : supports) {
    bool strict_subset = false;
    for (QubitSet other : supports) {
      if (other != s && subset_of(s, other)) {
        strict_subset = true;
        break;
      }
    }
    if (!strict_subset) maximal.push_back(s);
  }
  sort_clusters(maximal);
  return maximal;
}

QubitSet ClusterColoring::class_union(int color) const {
  QubitSet u = 0;
  for (int i : classes[static_cast<std::size_t>(color)]) u |= clusters[static_cast<std::size_t>(i)];
  return u;
}

ClusterColoring build_cluster_graph_and_color(std::vector<QubitSet> clusters) {
  sort_clusters(clusters);
  const int n = static_cast<int>(clusters.size());
  ClusterColoring out;
  out.clusters = clusters;

  std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      bool edge = (clusters[static_cast<std::size_t>(i)] & clusters[static_cast<std::size_t>(j)]) != 0;
      if (!edge) {
        for (int k = 0; k < n && !edge; ++k) {
          if (k == i || k == j) continue;
          edge = (clusters[static_cast<std::size_t>(k)] & clusters[static_cast<std::size_t>(i)]) &&
                 (clusters[static_cast<std::size_t>(k)] & clusters[static_cast<std::size_t>(j)]);
        }
      }
      if (edge) {
        out.edges.emplace_back(i, j);
        adj[static_cast<std::size_t>(i)].push_back(j);
        adj[static_cast<std::size_t>(j)].push_back(i);
      }
    }
  }

  out.n_colors = greedy_color(n, adj, out.color_of);
  out.classes.assign(static_cast<std::size_t>(out.n_colors), {});
  for (int i = 0; i < n; ++i) {
    out.classes[static_cast<std::size_t>(out.color_of[static_cast<std::size_t>(i)])].push_back(i);
  }
  return out;
}

QubitColoring build_qubit_graph_and_color(const Hamiltonian& h, const ClusterColoring& coloring,
                                          int color) {
  if (color < 0 || color >= coloring.n_colors) {
    throw std::out_of_range("color index out of range");
  }
  QubitColoring out;
  out.color = color;
  const QubitSet constrained = coloring.class_union(color);
  const QubitSet all = (h.n_qubits() == 64) ? ~0ULL : ((1ULL << h.n_qubits()) - 1);
  out.free_qubits = all & ~constrained;
  out.color_of_qubit.assign(static_cast<std::size_t>(h.n_qubits()), -1);
  if (out.free_qubits == 0) return out;

  // Edge (a, a') iff some term covers both free qubits and touches the
  // constrained region.
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(h.n_qubits()));
  for (const Term& t : h.terms()) {
    const QubitSet supp = t.op.support_mask();
    if (!(supp & constrained)) continue;
    const auto free_in_supp = qubits_of(supp & out.free_qubits);
    for (std::size_t i = 0; i < free_in_supp.size(); ++i) {
      for (std::size_t j = i + 1; j < free_in_supp.size(); ++j) {
        out.edges.emplace_back(free_in_supp[i], free_in_supp[j]);
      }
    }
  }
  std::sort(out.edges.begin(), out.edges.end());
  out.edges.erase(std::unique(out.edges.begin(), out.edges.end()), out.edges.end());
  for (auto [a, b] : out.edges) {
    adj[static_cast<std::size_t>(a)].push_back(b);
    adj[static_cast<std::size_t>(b)].push_back(a);
  }

  // Greedy over free qubits in ascending index order.
  int n_colors = 0;
  std::vector<char> used;
  for (int q : qubits_of(out.free_qubits)) {
    used.assign(static_cast<std::size_t>(n_colors + 1), 0);
    for (int u : adj[static_cast<std::size_t>(q)]) {
      const int cu = out.color_of_qubit[static_cast<std::size_t>(u)];
      if (cu >= 0) used[static_cast<std::size_t>(cu)] = 1;
    }
    int c = 0;
    while (used[static_cast<std::size_t>(c)]) ++c;
    out.color_of_qubit[static_cast<std::size_t>(q)] = c;
    n_colors = std::max(n_colors, c + 1);
  }
  out.n_colors = n_colors;
  return out;
}

ClusterBasis::ClusterBasis(QubitSet cluster_, std::vector<Letter> letters_)
    : cluster(cluster_), letters(std::move(letters_)) {
  if (static_cast<int>(letters.size()) != std::popcount(cluster)) {
    throw std::invalid_argument("basis letter count does not match cluster size");
  }
  for (Letter l : letters) {
    if (l == Letter::I) throw std::invalid_argument("basis letters must be X, Y or Z");
  }
}

Letter ClusterBasis::letter_at(int qubit) const {
  const QubitSet bit = 1ULL << qubit;
  if (!(cluster & bit)) throw std::out_of_range("qubit not in cluster");
  const int pos = std::popcount(cluster & (bit - 1));
  return letters[static_cast<std::size_t>(pos)];
}

ClusterBasis uniform_basis(QubitSet cluster, Letter l) {
  return ClusterBasis(cluster, std::vector<Letter>(static_cast<std::size_t>(std::popcount(cluster)), l));
}

std::map<std::uint32_t, double> diagonal_part(const Hamiltonian& h, QubitSet cluster,
                                              const ClusterBasis& basis) {
  if (basis.cluster != cluster) {
    throw std::invalid_argument("basis cluster does not match");
  }
  const auto clusters = build_clusters(h);
  if (std::find(clusters.begin(), clusters.end(), cluster) == clusters.end()) {
    throw std::invalid_argument("set is not an interacting cluster of this Hamiltonian");
  }
  std::map<std::uint32_t, double> out;
  for (const Term& t : h.terms()) {
    const QubitSet supp = t.op.support_mask();
    if (!subset_of(supp, cluster)) continue;
    bool matches = true;
    std::uint32_t pattern = 0;
    for (int q : qubits_of(supp)) {
      if (t.op.letter(q) != basis.letter_at(q)) {
        matches = false;
        break;
      }
      const int pos = std::popcount(cluster & ((1ULL << q) - 1));
      pattern |= 1u << pos;
    }
    if (matches) out[pattern] += t.coeff;
  }
  return out;
}

}  // namespace hamlearn
