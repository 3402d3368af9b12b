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

#include "hamlearn/instances.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

#include "hamlearn/rng.hpp"

namespace hamlearn {

namespace {

double draw_coeff(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

void check_range(double lo, double hi) {
  if (!(lo < hi) || lo < -1.0 || hi > 1.0) {
    throw std::invalid_argument("coefficient range must be a subinterval of [-1, 1]");
  }
}

}  // namespace

Hamiltonian heisenberg_chain(int n_qubits, std::uint64_t seed, double coeff_lo, double coeff_hi) {
  if (n_qubits < 2) throw std::invalid_argument("chain needs at least 2 qubits");
  check_range(coeff_lo, coeff_hi);
  // Coefficients are keyed per term rather than drawn sequentially, so chains
  // of different lengths with the same seed agree on their shared terms.
  auto term_coeff = [&](int kind, int q) {
    Rng rng = make_rng(seed, 0xc4a1000ULL + static_cast<std::uint64_t>(kind) * 256 + q);
    return draw_coeff(rng, coeff_lo, coeff_hi);
  };
  std::vector<Term> terms;
  int kind = 0;
  for (Letter l : {Letter::X, Letter::Y, Letter::Z}) {
    for (int q = 0; q + 1 < n_qubits; ++q) {
      PauliString op(n_qubits);
      op.set_letter(q, l);
      op.set_letter(q + 1, l);
      terms.push_back({op, term_coeff(kind, q)});
    }
    ++kind;
  }
  for (int q = 0; q < n_qubits; ++q) {
    terms.push_back({PauliString::single(n_qubits, q, Letter::Z), term_coeff(3, q)});
  }
  return Hamiltonian(n_qubits, std::move(terms));
}

Hamiltonian random_low_intersection(int n_qubits, std::uint64_t seed, int k, double coeff_lo,
                                    double coeff_hi) {
  if (n_qubits < 2) throw std::invalid_argument("instance needs at least 2 qubits");
  if (k != 2 && k != 3) throw std::invalid_argument("supported localities are 2 and 3");
  check_range(coeff_lo, coeff_hi);
  Rng rng = make_rng(seed, 0x10e5);

  // Random qubit tour partitioned into overlapping windows keeps the overlap
  // degree bounded while still producing irregular supports.
  std::vector<int> order(static_cast<std::size_t>(n_qubits));
  for (int q = 0; q < n_qubits; ++q) order[static_cast<std::size_t>(q)] = q;
  std::shuffle(order.begin(), order.end(), rng);

  static const Letter kXYZ[3] = {Letter::X, Letter::Y, Letter::Z};
  std::vector<Term> terms;
  std::unordered_set<PauliString, PauliHash> seen;
  auto add_term = [&](const std::vector<int>& qubits) {
    for (int attempt = 0; attempt < 16; ++attempt) {
      PauliString op(n_qubits);
      for (int q : qubits) op.set_letter(q, kXYZ[rng() % 3]);
      if (seen.insert(op).second) {
        terms.push_back({op, draw_coeff(rng, coeff_lo, coeff_hi)});
        return;
      }
    }
  };

  const int window = k;
  for (std::size_t start = 0; start + window <= order.size();
       start += static_cast<std::size_t>(window - 1)) {
    std::vector<int> qubits(order.begin() + static_cast<std::ptrdiff_t>(start),
                            order.begin() + static_cast<std::ptrdiff_t>(start + window));
    const int per_window = 2 + static_cast<int>(rng() % 2);
    for (int i = 0; i < per_window; ++i) add_term(qubits);
  }
  for (int q : order) {
    if (rng() % 2) add_term({q});
  }
  if (terms.empty()) add_term({order[0], order[1]});

  Hamiltonian h(n_qubits, std::move(terms));
  const HamiltonianStats stats = h.validate();
  if (stats.locality_k > k) throw std::logic_error("generator exceeded requested locality");
  return h;
}

Hamiltonian generate_instance(const std::string& kind, int n_qubits, std::uint64_t seed,
                              double coeff_lo, double coeff_hi) {
  if (kind == "heisenberg_chain") return heisenberg_chain(n_qubits, seed, coeff_lo, coeff_hi);
  if (kind == "random_low_intersection") {
    return random_low_intersection(n_qubits, seed, 2, coeff_lo, coeff_hi);
  }
  if (kind == "random_low_intersection_k3") {
    return random_low_intersection(n_qubits, seed, 3, coeff_lo, coeff_hi);
  }
  throw std::invalid_argument("unknown instance kind: " + kind);
}

}  // namespace hamlearn
