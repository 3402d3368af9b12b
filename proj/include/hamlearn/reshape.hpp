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

#ifndef HAMLEARN_RESHAPE_HPP
#define HAMLEARN_RESHAPE_HPP

#include <cstddef>
#include <utility>
#include <vector>

#include "hamlearn/clusters.hpp"
#include "hamlearn/rng.hpp"

namespace hamlearn {

/// Product distribution over N-qubit Pauli words for one color class:
/// free qubits draw uniformly from {I, X, Y, Z}; each cluster qubit draws
/// uniformly from {I, its basis letter}.
struct TwirlDistribution {
  int n_qubits = 0;
  int color = 0;
  std::vector<ClusterBasis> cluster_bases;  // one per cluster of the color
  QubitSet constrained = 0;                 // union of the color's clusters
  QubitSet free_qubits = 0;
};

TwirlDistribution make_twirl(int n_qubits, int color, std::vector<ClusterBasis> bases);

PauliString sample_twirl_pauli(const TwirlDistribution& d, Rng& rng);

/// Analytic expectation of P H P over the twirl: a term survives with
/// unchanged coefficient iff its support lies inside one of the color's
/// clusters and every supported letter equals the basis letter there.
Hamiltonian effective_hamiltonian(const Hamiltonian& h, const TwirlDistribution& d);

/// Deterministic Pauli word list implementing the same reshaping as the
/// twirl by uniform averaging, for the second-order product-formula backend.
/// decouplers: one word per pattern over the qubit-color classes (4^n_colors);
/// diagonalizers: one word per shared cluster bit pattern (2^max_cluster_size).
/// words = all pairwise products, ordered (decoupler-major).
struct TrotterEnsemble {
  std::vector<PauliString> words;  // size decoupler_count * diagonalizer_count
  std::size_t decoupler_count = 0;
  std::size_t diagonalizer_count = 0;
};

TrotterEnsemble build_trotter_ensemble(const Hamiltonian& h, const ClusterColoring& coloring,
                                       const QubitColoring& qcoloring,
                                       const std::vector<ClusterBasis>& bases,
                                       std::size_t size_cap = std::size_t(1) << 16);

/// Palindromic second-order segment list: forward pass then its reverse,
/// each segment of duration tau / (2 * words). Durations sum to tau.
std::vector<std::pair<PauliString, double>> trotter_step_schedule(const TrotterEnsemble& e,
                                                                  double tau);

}  // namespace hamlearn

#endif  // HAMLEARN_RESHAPE_HPP
