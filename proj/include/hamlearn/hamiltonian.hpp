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

#ifndef HAMLEARN_HAMILTONIAN_HPP
#define HAMLEARN_HAMILTONIAN_HPP

#include <vector>

#include "hamlearn/pauli.hpp"

namespace hamlearn {

struct Term {
  PauliString op;
  double coeff;
};

struct HamiltonianStats {
  int locality_k = 0;       // max term support size
  int overlap_degree = 0;   // max number of other terms sharing support qubits
  int term_count = 0;
};

/// Pauli-sum Hamiltonian H = sum_a coeff_a * op_a with few-body terms and
/// bounded per-term overlap. Immutable after construction; the term list is
/// the known structure, the coefficients are what a learner estimates.
class Hamiltonian {
 public:
  /// Structural invariants enforced here: matching qubit counts, no identity
  /// term, no duplicate Pauli strings. An empty term list is allowed.
  Hamiltonian(int n_qubits, std::vector<Term> terms);

  int n_qubits() const { return n_qubits_; }
  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }

  /// Recomputes locality, overlap degree and term count from scratch.
  /// Throws if any |coeff| exceeds 1 (the model's normalization).
  HamiltonianStats validate() const;

  /// Index of the term with the given Pauli string, or -1.
  int find_term(const PauliString& op) const;

  /// Sum of |coeff| — an operator-norm upper bound used by the evolver.
  double coeff_l1() const;

 private:
  int n_qubits_;
  std::vector<Term> terms_;
};

}  // namespace hamlearn

#endif  // HAMLEARN_HAMILTONIAN_HPP
