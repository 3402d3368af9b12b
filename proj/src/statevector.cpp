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

#include "hamlearn/statevector.hpp"

#include <bit>
#include <stdexcept>

namespace hamlearn {

namespace {

constexpr std::complex<double> kIPowers[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};

inline std::complex<double> pauli_phase(const PauliString& p, std::uint64_t b) {
  const int y_count = std::popcount(p.x_mask() & p.z_mask());
  const int sign = std::popcount(b & p.z_mask()) & 1;
  std::complex<double> ph = kIPowers[y_count & 3];
  return sign ? -ph : ph;
}

}  // namespace

StateVector basis_state(int n_qubits, std::uint64_t bits) {
  StateVector s(n_qubits);
  if (bits >= static_cast<std::uint64_t>(s.dim())) throw std::out_of_range("basis index");
  s.amps[static_cast<std::int64_t>(bits)] = 1.0;
  return s;
}

void apply_pauli(StateVector& s, const PauliString& p) {
  if (p.n_qubits() != s.n_qubits) throw std::invalid_argument("qubit count mismatch");
  Eigen::Map<Eigen::MatrixXcd> m(s.amps.data(), s.amps.size(), 1);
  apply_pauli(Eigen::Ref<Eigen::MatrixXcd>(m), p);
}

void apply_pauli(Eigen::Ref<Eigen::MatrixXcd> cols, const PauliString& p) {
  const std::uint64_t x = p.x_mask();
  const auto dim = static_cast<std::uint64_t>(cols.rows());
  const auto nc = cols.cols();
  if (x == 0) {
    for (std::uint64_t b = 0; b < dim; ++b) {
      const auto ph = pauli_phase(p, b);
      if (ph != std::complex<double>(1, 0)) cols.row(static_cast<std::int64_t>(b)) *= ph;
    }
    return;
  }
  for (std::uint64_t b = 0; b < dim; ++b) {
    const std::uint64_t t = b ^ x;
    if (t < b) continue;  // visit each swap pair once
    const auto pb = pauli_phase(p, b);
    const auto pt = pauli_phase(p, t);
    for (Eigen::Index c = 0; c < nc; ++c) {
      const auto vb = cols(static_cast<std::int64_t>(b), c);
      const auto vt = cols(static_cast<std::int64_t>(t), c);
      cols(static_cast<std::int64_t>(t), c) = pb * vb;
      cols(static_cast<std::int64_t>(b), c) = pt * vt;
    }
  }
}

void conjugate_columns_by_pauli(Eigen::Ref<Eigen::MatrixXcd> cols, const PauliString& p) {
  // p (p U p) p = U; applying the same Pauli before and after a unitary is
  // what a conjugated segment does to a state: U' psi = p U (p psi).
  apply_pauli(cols, p);
}

void apply_single_qubit_gate(StateVector& s, int qubit, const Eigen::Matrix2cd& u) {
  Eigen::Map<Eigen::MatrixXcd> m(s.amps.data(), s.amps.size(), 1);
  apply_single_qubit_gate(Eigen::Ref<Eigen::MatrixXcd>(m), s.n_qubits, qubit, u);
}

void apply_single_qubit_gate(Eigen::Ref<Eigen::MatrixXcd> cols, int n_qubits, int qubit,
                             const Eigen::Matrix2cd& u) {
  if (qubit < 0 || qubit >= n_qubits) throw std::out_of_range("qubit index");
  const std::uint64_t bit = 1ULL << qubit;
  const auto dim = static_cast<std::uint64_t>(cols.rows());
  const auto nc = cols.cols();
  for (std::uint64_t b = 0; b < dim; ++b) {
    if (b & bit) continue;
    const std::uint64_t b1 = b | bit;
    for (Eigen::Index c = 0; c < nc; ++c) {
      const auto v0 = cols(static_cast<std::int64_t>(b), c);
      const auto v1 = cols(static_cast<std::int64_t>(b1), c);
      cols(static_cast<std::int64_t>(b), c) = u(0, 0) * v0 + u(0, 1) * v1;
      cols(static_cast<std::int64_t>(b1), c) = u(1, 0) * v0 + u(1, 1) * v1;
    }
  }
}

Eigen::MatrixXcd conjugate_dense_by_pauli(const Eigen::MatrixXcd& a, const PauliString& p) {
  const std::uint64_t x = p.x_mask();
  const auto dim = static_cast<std::uint64_t>(a.rows());
  Eigen::MatrixXcd pa(a.rows(), a.cols());
  for (std::uint64_t r = 0; r < dim; ++r) {
    pa.row(static_cast<std::int64_t>(r)) =
        pauli_phase(p, r ^ x) * a.row(static_cast<std::int64_t>(r ^ x));
  }
  Eigen::MatrixXcd pap(a.rows(), a.cols());
  for (std::uint64_t c = 0; c < dim; ++c) {
    pap.col(static_cast<std::int64_t>(c)) =
        pauli_phase(p, c) * pa.col(static_cast<std::int64_t>(c ^ x));
  }
  return pap;
}

std::uint64_t sample_basis_index(const Eigen::Ref<const Eigen::VectorXcd>& amps, double u01) {
  const auto dim = static_cast<std::uint64_t>(amps.size());
  double acc = 0;
  for (std::uint64_t b = 0; b < dim; ++b) {
    acc += std::norm(amps[static_cast<std::int64_t>(b)]);
    if (u01 < acc) return b;
  }
  return dim - 1;  // u01 landed in the tail lost to rounding
}

double norm_error(const StateVector& s) { return std::abs(s.amps.norm() - 1.0); }

}  // namespace hamlearn
