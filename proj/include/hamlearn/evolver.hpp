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

#ifndef HAMLEARN_EVOLVER_HPP
#define HAMLEARN_EVOLVER_HPP

#include <Eigen/Dense>
#include <list>
#include <memory>
#include <optional>

#include "hamlearn/hamiltonian.hpp"
#include "hamlearn/statevector.hpp"

namespace hamlearn {

/// Exact e^{-iHt} application for one fixed Hamiltonian. Uses a cached
/// eigendecomposition when the dimension allows it and a scaled Taylor
/// expansion (error below 1e-12 per call) otherwise. Also hands out dense
/// propagators e^{-iH tau} for segment-based evolution, LRU-cached by tau.
class Evolver {
 public:
  /// dense_cap_qubits bounds the eigendecomposition / dense-propagator path;
  /// n_cap bounds the simulable system outright.
  explicit Evolver(const Hamiltonian& h, int dense_cap_qubits = 11, int n_cap = 14);

  const Hamiltonian& hamiltonian() const { return h_; }
  int n_qubits() const { return h_.n_qubits(); }
  bool has_dense_path() const { return n_qubits() <= dense_cap_qubits_; }

  void evolve(StateVector& s, double t) const;
  void evolve(Eigen::Ref<Eigen::MatrixXcd> cols, double t) const;

  /// Dense propagator e^{-iH tau}; only available on the dense path.
  const Eigen::MatrixXcd& propagator(double tau) const;

  /// out = H * in through the sparse term list.
  void apply_h(const Eigen::Ref<const Eigen::MatrixXcd>& in, Eigen::MatrixXcd& out) const;

  Eigen::MatrixXcd dense_matrix() const;

 private:
  void ensure_eig() const;
  void taylor_evolve(Eigen::Ref<Eigen::MatrixXcd> cols, double t) const;

  Hamiltonian h_;
  int dense_cap_qubits_;
  double coeff_l1_;

  mutable std::optional<Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>> eig_;
  mutable std::list<std::pair<double, Eigen::MatrixXcd>> prop_cache_;  // front = most recent
  static constexpr std::size_t kPropCacheSize = 12;
};

/// One-off exact evolution (builds a transient Evolver; prefer the class
/// when calling repeatedly with the same Hamiltonian).
StateVector evolve_exact(const StateVector& s, const Hamiltonian& h, double t, int n_cap = 14);

}  // namespace hamlearn

#endif  // HAMLEARN_EVOLVER_HPP
