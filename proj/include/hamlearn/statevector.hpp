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

#ifndef HAMLEARN_STATEVECTOR_HPP
#define HAMLEARN_STATEVECTOR_HPP

#include <Eigen/Dense>
#include <complex>
#include <cstdint>

#include "hamlearn/pauli.hpp"
#include "hamlearn/rng.hpp"

namespace hamlearn {

/// Dense amplitudes over the computational basis; basis index bit q is the
/// value of qubit q.
struct StateVector {
  int n_qubits = 0;
  Eigen::VectorXcd amps;

  explicit StateVector(int n) : n_qubits(n), amps(Eigen::VectorXcd::Zero(1LL << n)) {}
  std::int64_t dim() const { return amps.size(); }
};

StateVector basis_state(int n_qubits, std::uint64_t bits);

/// In-place exact Pauli action: |b> -> i^{#Y} (-1)^{popcount(b & z)} |b ^ x>.
void apply_pauli(StateVector& s, const PauliString& p);

/// Same action applied to every column of a batch of states.
void apply_pauli(Eigen::Ref<Eigen::MatrixXcd> cols, const PauliString& p);

/// Applies p U p to every column, i.e. the x-permutation-conjugation plus
/// sign mask of U's input and output. Used to sandwich a cached propagator
/// between two identical Pauli layers without forming p explicitly twice.
void conjugate_columns_by_pauli(Eigen::Ref<Eigen::MatrixXcd> cols, const PauliString& p);

void apply_single_qubit_gate(StateVector& s, int qubit, const Eigen::Matrix2cd& u);
void apply_single_qubit_gate(Eigen::Ref<Eigen::MatrixXcd> cols, int n_qubits, int qubit,
                             const Eigen::Matrix2cd& u);

/// P * A * P for a dense square operator A over the full register.
Eigen::MatrixXcd conjugate_dense_by_pauli(const Eigen::MatrixXcd& a, const PauliString& p);

/// Samples a basis index from |amps|^2 by inverse CDF using one uniform draw.
std::uint64_t sample_basis_index(const Eigen::Ref<const Eigen::VectorXcd>& amps, double u01);

/// | ||s|| - 1 |.
double norm_error(const StateVector& s);

}  // namespace hamlearn

#endif  // HAMLEARN_STATEVECTOR_HPP
