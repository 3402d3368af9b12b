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

#include "hamlearn/reshape.hpp"

#include <bit>
#include <stdexcept>

namespace hamlearn {

TwirlDistribution make_twirl(int n_qubits, int color, std::vector<ClusterBasis> bases) {
  TwirlDistribution d;
  d.n_qubits = n_qubits;
  d.color = color;
  d.cluster_bases = std::move(bases);
  for (const ClusterBasis& b : d.cluster_bases) {
    if (d.constrained & b.cluster) {
      throw std::invalid_argument("clusters of one color must be disjoint");
    }
    d.constrained |= b.cluster;
  }
  const QubitSet all = (n_qubits == 64) ? ~0ULL : ((1ULL << n_qubits) - 1);
  if (d.constrained & ~all) throw std::invalid_argument("cluster exceeds qubit range");
  d.free_qubits = all & ~d.constrained;
  return d;
}

PauliString sample_twirl_pauli(const TwirlDistribution& d, Rng& rng) {
  PauliString p(d.n_qubits);
  for (int q : qubits_of(d.free_qubits)) {
    p.set_letter(q, static_cast<Letter>(rng() & 3));
  }
  for (const ClusterBasis& b : d.cluster_bases) {
    for (int q : qubits_of(b.cluster)) {
      if (rng() & 1) p.set_letter(q, b.letter_at(q));
    }
  }
  return p;
}

Hamiltonian effective_hamiltonian(const Hamiltonian& h, const TwirlDistribution& d) {
  if (h.n_qubits() != d.n_qubits) {
    throw std::invalid_argument("Hamiltonian and distribution qubit counts differ");
  }
  std::vector<Term> kept;
  for (const Term& t : h.terms()) {
    const QubitSet supp = t.op.support_mask();
    const ClusterBasis* home = nullptr;
    for (const ClusterBasis& b : d.cluster_bases) {
      if ((supp & ~b.cluster) == 0) {
        home = &b;
        break;
      }
    }
    if (!home) continue;
    bool survives = true;
    for (int q : qubits_of(supp)) {
      if (t.op.letter(q) != home->letter_at(q)) {
        survives = false;
        break;
      }
    }
    if (survives) kept.push_back(t);
  }
  return Hamiltonian(h.n_qubits(), std::move(kept));
}

TrotterEnsemble build_trotter_ensemble(const Hamiltonian& h, const ClusterColoring& coloring,
                                       const QubitColoring& qcoloring,
                                       const std::vector<ClusterBasis>& bases,
                                       std::size_t size_cap) {
  if (qcoloring.color < 0 || qcoloring.color >= coloring.n_colors) {
    throw std::out_of_range("color index out of range");
  }
  const auto& cluster_ids = coloring.classes[static_cast<std::size_t>(qcoloring.color)];
  if (bases.size() != cluster_ids.size()) {
    throw std::invalid_argument("one basis per cluster of the color is required");
  }
  for (std::size_t i = 0; i < bases.size(); ++i) {
    if (bases[i].cluster != coloring.clusters[static_cast<std::size_t>(cluster_ids[i])]) {
      throw std::invalid_argument("basis clusters must match the color class order");
    }
  }

  const int n = h.n_qubits();
  int max_cluster = 0;
  for (const ClusterBasis& b : bases) max_cluster = std::max(max_cluster, b.size());

  const std::size_t p_count = std::size_t(1) << (2 * qcoloring.n_colors);
  const std::size_t q_count = bases.empty() ? 1 : (std::size_t(1) << max_cluster);
  if (p_count > size_cap || q_count > size_cap || p_count * q_count > size_cap) {
    throw std::domain_error("Trotter ensemble size exceeds cap");
  }

  // Decouplers: one letter per qubit-color class, stamped on every free qubit
  // of that class.
  std::vector<PauliString> decouplers;
  decouplers.reserve(p_count);
  const auto free_list = qubits_of(qcoloring.free_qubits);
  for (std::size_t pattern = 0; pattern < p_count; ++pattern) {
    PauliString p(n);
    for (int q : free_list) {
      const int qc = qcoloring.color_of_qubit[static_cast<std::size_t>(q)];
      const auto letter = static_cast<Letter>((pattern >> (2 * qc)) & 3);
      p.set_letter(q, letter);
    }
    decouplers.push_back(std::move(p));
  }

  // Diagonalizers: shared bit pattern across clusters; cluster qubit q takes
  // its basis letter iff the bit at its position (ascending order) is set.
  std::vector<PauliString> diagonalizers;
  diagonalizers.reserve(q_count);
  for (std::size_t bits = 0; bits < q_count; ++bits) {
    PauliString p(n);
    for (const ClusterBasis& b : bases) {
      int pos = 0;
      for (int q : qubits_of(b.cluster)) {
        if ((bits >> pos) & 1) p.set_letter(q, b.letter_at(q));
        ++pos;
      }
    }
    diagonalizers.push_back(std::move(p));
  }

  TrotterEnsemble e;
  e.decoupler_count = decouplers.size();
  e.diagonalizer_count = diagonalizers.size();
  e.words.reserve(decouplers.size() * diagonalizers.size());
  for (const PauliString& p : decouplers) {
    for (const PauliString& q : diagonalizers) {
      // Supports are disjoint (free vs cluster qubits), so the product is a
      // plain letter merge with no phase.
      PauliString w(n);
      for (int qu : qubits_of(p.support_mask())) w.set_letter(qu, p.letter(qu));
      for (int qu : qubits_of(q.support_mask())) w.set_letter(qu, q.letter(qu));
      e.words.push_back(std::move(w));
    }
  }
  return e;
}

std::vector<std::pair<PauliString, double>> trotter_step_schedule(const TrotterEnsemble& e,
                                                                  double tau) {
  if (tau <= 0) throw std::invalid_argument("tau must be positive");
  if (e.words.empty()) throw std::invalid_argument("empty ensemble");
  const double segment = tau / (2.0 * static_cast<double>(e.words.size()));
  std::vector<std::pair<PauliString, double>> out;
  out.reserve(2 * e.words.size());
  for (const PauliString& p : e.words) out.emplace_back(p, segment);
  for (auto it = e.words.rbegin(); it != e.words.rend(); ++it) out.emplace_back(*it, segment);
  return out;
}

}  // namespace hamlearn
