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

#include "hamlearn/pauli.hpp"

#include <bit>
#include <stdexcept>

namespace hamlearn {

char letter_char(Letter l) {
  switch (l) {
    case Letter::I: return 'I';
    case Letter::X: return 'X';
    case Letter::Y: return 'Y';
    case Letter::Z: return 'Z';
  }
  throw std::logic_error("bad Letter");
}

Letter letter_from_char(char c) {
  switch (c) {
    case 'I': case '_': case '.': return Letter::I;
    case 'X': case 'x': return Letter::X;
    case 'Y': case 'y': return Letter::Y;
    case 'Z': case 'z': return Letter::Z;
  }
  throw std::invalid_argument(std::string("invalid Pauli letter '") + c + "'");
}

PauliString::PauliString(int n_qubits) : n_qubits_(n_qubits) {
  if (n_qubits < 1 || n_qubits > 64) {
    throw std::invalid_argument("PauliString supports 1..64 qubits");
  }
}

PauliString PauliString::from_text(std::string_view text) {
  PauliString p(static_cast<int>(text.size()));
  for (int q = 0; q < p.n_qubits_; ++q) {
    p.set_letter(q, letter_from_char(text[static_cast<std::size_t>(q)]));
  }
  return p;
}

PauliString PauliString::single(int n_qubits, int qubit, Letter l) {
  PauliString p(n_qubits);
  p.set_letter(qubit, l);
  return p;
}

Letter PauliString::letter(int qubit) const {
  if (qubit < 0 || qubit >= n_qubits_) throw std::out_of_range("qubit index");
  const std::uint64_t bit = 1ULL << qubit;
  const bool x = (x_ & bit) != 0;
  const bool z = (z_ & bit) != 0;
  if (x && z) return Letter::Y;
  if (x) return Letter::X;
  if (z) return Letter::Z;
  return Letter::I;
}

void PauliString::set_letter(int qubit, Letter l) {
  if (qubit < 0 || qubit >= n_qubits_) throw std::out_of_range("qubit index");
  const std::uint64_t bit = 1ULL << qubit;
  x_ &= ~bit;
  z_ &= ~bit;
  if (l == Letter::X || l == Letter::Y) x_ |= bit;
  if (l == Letter::Z || l == Letter::Y) z_ |= bit;
}

std::vector<int> PauliString::support() const {
  std::vector<int> out;
  std::uint64_t m = support_mask();
  while (m) {
    const int q = std::countr_zero(m);
    out.push_back(q);
    m &= m - 1;
  }
  return out;
}

int PauliString::weight() const { return std::popcount(support_mask()); }

std::string PauliString::text() const {
  std::string s(static_cast<std::size_t>(n_qubits_), 'I');
  for (int q = 0; q < n_qubits_; ++q) s[static_cast<std::size_t>(q)] = letter_char(letter(q));
  return s;
}

bool commutes(const PauliString& p, const PauliString& q) {
  if (p.n_qubits() != q.n_qubits()) {
    throw std::invalid_argument("commutes: mismatched qubit counts");
  }
  // Symplectic form: parity of |{positions where letters differ and both act}|.
  const int parity =
      (std::popcount(p.x_mask() & q.z_mask()) + std::popcount(p.z_mask() & q.x_mask())) & 1;
  return parity == 0;
}

std::pair<int, PauliString> conjugate(const PauliString& p, const PauliString& e) {
  const int sign = commutes(p, e) ? 1 : -1;
  return {sign, e};
}

std::size_t PauliHash::operator()(const PauliString& p) const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](std::uint64_t v) {
    h ^= v;
    h *= 0x100000001b3ULL;
  };
  mix(static_cast<std::uint64_t>(p.n_qubits()));
  mix(p.x_mask());
  mix(p.z_mask());
  return static_cast<std::size_t>(h);
}

}  // namespace hamlearn
