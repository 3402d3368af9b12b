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

#ifndef HAMLEARN_PAULI_HPP
#define HAMLEARN_PAULI_HPP

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace hamlearn {

enum class Letter : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

char letter_char(Letter l);
Letter letter_from_char(char c);

/// Sparse N-qubit Pauli word stored as an (x, z) bitmask pair:
/// X -> x bit, Z -> z bit, Y -> both. Qubit q maps to bit q of each mask.
/// Phases are not tracked; only conjugation signs are ever needed here.
class PauliString {
 public:
  explicit PauliString(int n_qubits);

  /// Parses the canonical text form: one of I/X/Y/Z per qubit, qubit 0
  /// leftmost ('_' and '.' are accepted for identity).
  static PauliString from_text(std::string_view text);

  static PauliString single(int n_qubits, int qubit, Letter l);

  int n_qubits() const { return n_qubits_; }
  Letter letter(int qubit) const;
  void set_letter(int qubit, Letter l);

  bool is_identity() const { return (x_ | z_) == 0; }
  std::uint64_t support_mask() const { return x_ | z_; }
  std::vector<int> support() const;
  int weight() const;

  std::uint64_t x_mask() const { return x_; }
  std::uint64_t z_mask() const { return z_; }

  std::string text() const;

  bool operator==(const PauliString&) const = default;
  auto operator<=>(const PauliString&) const = default;

 private:
  int n_qubits_;
  std::uint64_t x_ = 0;
  std::uint64_t z_ = 0;
};

/// True iff p and q commute: the number of positions where both act
/// non-trivially with different letters is even.
bool commutes(const PauliString& p, const PauliString& q);

/// Returns (s, e) with p e p = s e, s in {+1, -1}. s = +1 iff commutes(p, e).
std::pair<int, PauliString> conjugate(const PauliString& p, const PauliString& e);

struct PauliHash {
  std::size_t operator()(const PauliString& p) const;
};

}  // namespace hamlearn

#endif  // HAMLEARN_PAULI_HPP
