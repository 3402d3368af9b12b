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

#include "hamlearn/hamiltonian.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <unordered_set>

namespace hamlearn {

Hamiltonian::Hamiltonian(int n_qubits, std::vector<Term> terms)
    : n_qubits_(n_qubits), terms_(std::move(terms)) {
  if (n_qubits < 1 || n_qubits > 64) {
    throw std::invalid_argument("Hamiltonian supports 1..64 qubits");
  }
  std::unordered_set<PauliString, PauliHash> seen;
  for (const Term& t : terms_) {
    if (t.op.n_qubits() != n_qubits_) {
      throw std::invalid_argument("term qubit count does not match Hamiltonian");
    }
    if (t.op.is_identity()) {
      throw std::invalid_argument("identity term is not allowed");
    }
    if (!seen.insert(t.op).second) {
      throw std::invalid_argument("duplicate term: " + t.op.text());
    }
    if (!std::isfinite(t.coeff)) {
      throw std::invalid_argument("non-finite coefficient");
    }
  }
}

HamiltonianStats Hamiltonian::validate() const {
  HamiltonianStats s;
  s.term_count = static_cast<int>(terms_.size());
  for (const Term& t : terms_) {
    if (std::abs(t.coeff) > 1.0) {
      throw std::domain_error("coefficient out of range: |" + std::to_string(t.coeff) + "| > 1");
    }
    s.locality_k = std::max(s.locality_k, t.op.weight());
  }
  for (std::size_t a = 0; a < terms_.size(); ++a) {
    int overlaps = 0;
    for (std::size_t b = 0; b < terms_.size(); ++b) {
      if (a == b) continue;
      if (terms_[a].op.support_mask() & terms_[b].op.support_mask()) ++overlaps;
    }
    s.overlap_degree = std::max(s.overlap_degree, overlaps);
  }
  return s;
}

int Hamiltonian::find_term(const PauliString& op) const {
  for (std::size_t a = 0; a < terms_.size(); ++a) {
    if (terms_[a].op == op) return static_cast<int>(a);
  }
  return -1;
}

double Hamiltonian::coeff_l1() const {
  double s = 0;
  for (const Term& t : terms_) s += std::abs(t.coeff);
  return s;
}

}  // namespace hamlearn
