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

#include "hamlearn/evolver.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace hamlearn {

namespace {

constexpr std::complex<double> kIPowers[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};

}  // namespace

Evolver::Evolver(const Hamiltonian& h, int dense_cap_qubits, int n_cap)
    : h_(h), dense_cap_qubits_(dense_cap_qubits), coeff_l1_(h.coeff_l1()) {
  if (h.n_qubits() > n_cap) {
    throw std::domain_error("system size exceeds the simulation cap");
  }
}

void Evolver::apply_h(const Eigen::Ref<const Eigen::MatrixXcd>& in, Eigen::MatrixXcd& out) const {
  out.setZero(in.rows(), in.cols());
  const auto dim = static_cast<std::uint64_t>(in.rows());
  for (const Term& t : h_.terms()) {
    const std::uint64_t x = t.op.x_mask();
    const std::uint64_t z = t.op.z_mask();
    const int y_count = std::popcount(x & z);
    const std::complex<double> base = kIPowers[y_count & 3] * t.coeff;
    for (std::uint64_t b = 0; b < dim; ++b) {
      const std::complex<double> ph = (std::popcount(b & z) & 1) ? -base : base;
      out.row(static_cast<std::int64_t>(b ^ x)) += ph * in.row(static_cast<std::int64_t>(b));
    }
  }
}

Eigen::MatrixXcd Evolver::dense_matrix() const {
  const std::int64_t dim = 1LL << h_.n_qubits();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (const Term& t : h_.terms()) {
    const std::uint64_t x = t.op.x_mask();
    const std::uint64_t z = t.op.z_mask();
    const int y_count = std::popcount(x & z);
    const std::complex<double> base = kIPowers[y_count & 3] * t.coeff;
    for (std::uint64_t b = 0; b < static_cast<std::uint64_t>(dim); ++b) {
      const std::complex<double> ph = (std::popcount(b & z) & 1) ? -base : base;
      m(static_cast<std::int64_t>(b ^ x), static_cast<std::int64_t>(b)) += ph;
    }
  }
  return m;
}

void Evolver::ensure_eig() const {
  if (eig_) return;
  eig_.emplace(dense_matrix());
  if (eig_->info() != Eigen::Success) throw std::runtime_error("eigendecomposition failed");
}

void Evolver::evolve(StateVector& s, double t) const {
  if (s.n_qubits != h_.n_qubits()) throw std::invalid_argument("qubit count mismatch");
  Eigen::Map<Eigen::MatrixXcd> m(s.amps.data(), s.amps.size(), 1);
  evolve(Eigen::Ref<Eigen::MatrixXcd>(m), t);
}

void Evolver::evolve(Eigen::Ref<Eigen::MatrixXcd> cols, double t) const {
  if (t == 0 || h_.terms().empty()) return;
  if (has_dense_path()) {
    ensure_eig();
    const auto& v = eig_->eigenvectors();
    Eigen::VectorXcd phases =
        (std::complex<double>(0, -t) * eig_->eigenvalues().array()).exp().matrix();
    Eigen::MatrixXcd tmp = v.adjoint() * cols;
    tmp.array().colwise() *= phases.array();
    cols = v * tmp;
  } else {
    taylor_evolve(cols, t);
  }
}

void Evolver::taylor_evolve(Eigen::Ref<Eigen::MatrixXcd> cols, double t) const {
  // Scale so each sub-step has ||H dt|| <= 0.5, then expand until the term
  // norm bound (l1 coefficient power over factorial) is below 1e-16.
  const int steps = std::max(1, static_cast<int>(std::ceil(coeff_l1_ * std::abs(t) / 0.5)));
  const double dt = t / steps;
  Eigen::MatrixXcd term(cols.rows(), cols.cols());
  Eigen::MatrixXcd next(cols.rows(), cols.cols());
  for (int s = 0; s < steps; ++s) {
    term = cols;
    double term_bound = 1.0;
    const double x = coeff_l1_ * std::abs(dt);
    for (int n = 1; n <= 40; ++n) {
      apply_h(term, next);
      term = (std::complex<double>(0, -dt) / double(n)) * next;
      cols += term;
      term_bound *= x / n;
      if (term_bound < 1e-16) break;
    }
  }
}

const Eigen::MatrixXcd& Evolver::propagator(double tau) const {
  if (!has_dense_path()) {
    throw std::domain_error("dense propagator unavailable above the dense cap");
  }
  for (auto it = prop_cache_.begin(); it != prop_cache_.end(); ++it) {
    if (it->first == tau) {
      prop_cache_.splice(prop_cache_.begin(), prop_cache_, it);
      return prop_cache_.front().second;
    }
  }
  ensure_eig();
  const auto& v = eig_->eigenvectors();
  Eigen::VectorXcd phases =
      (std::complex<double>(0, -tau) * eig_->eigenvalues().array()).exp().matrix();
  Eigen::MatrixXcd prop = v * phases.asDiagonal() * v.adjoint();
  prop_cache_.emplace_front(tau, std::move(prop));
  if (prop_cache_.size() > kPropCacheSize) prop_cache_.pop_back();
  return prop_cache_.front().second;
}

StateVector evolve_exact(const StateVector& s, const Hamiltonian& h, double t, int n_cap) {
  Evolver ev(h, 11, n_cap);
  StateVector out = s;
  ev.evolve(out, t);
  return out;
}

}  // namespace hamlearn
