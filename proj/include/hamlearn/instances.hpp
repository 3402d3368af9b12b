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

#ifndef HAMLEARN_INSTANCES_HPP
#define HAMLEARN_INSTANCES_HPP

#include <cstdint>
#include <string>

#include "hamlearn/hamiltonian.hpp"

namespace hamlearn {

/// Nearest-neighbour chain: XX + YY + ZZ on every adjacent pair plus a Z
/// field on every qubit, coefficients uniform in [coeff_lo, coeff_hi].
/// 3(N-1) + N terms.
Hamiltonian heisenberg_chain(int n_qubits, std::uint64_t seed, double coeff_lo = -1.0,
                             double coeff_hi = 1.0);

/// Random bounded-overlap instance with supports of size <= k (2 or 3) and
/// random letters; the overlap degree is verified after generation.
Hamiltonian random_low_intersection(int n_qubits, std::uint64_t seed, int k = 2,
                                    double coeff_lo = -1.0, double coeff_hi = 1.0);

/// Dispatch by kind name: "heisenberg_chain" | "random_low_intersection".
Hamiltonian generate_instance(const std::string& kind, int n_qubits, std::uint64_t seed,
                              double coeff_lo = -1.0, double coeff_hi = 1.0);

}  // namespace hamlearn

#endif  // HAMLEARN_INSTANCES_HPP
