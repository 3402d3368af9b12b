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

#include <doctest.h>

#include "hamlearn/pauli.hpp"
#include "test_oracles.hpp"

using namespace hamlearn;

TEST_CASE("support of sparse strings") {
  CHECK(PauliString::from_text("XIZ").support() == std::vector<int>{0, 2});
  CHECK(PauliString::from_text("IIIII").support().empty());
  CHECK(PauliString::from_text("IYY").support() == std::vector<int>{1, 2});
  CHECK(PauliString::from_text("IYY").weight() == 2);
}

TEST_CASE("commutation examples") {
  CHECK_FALSE(commutes(PauliString::from_text("X"), PauliString::from_text("Z")));
  CHECK(commutes(PauliString::from_text("X"), PauliString::from_text("X")));
  // Two anticommuting positions make the pair commute overall.
  CHECK(commutes(PauliString::from_text("XZ"), PauliString::from_text("ZX")));
  CHECK_THROWS_AS(commutes(PauliString::from_text("X"), PauliString::from_text("XX")),
                  std::invalid_argument);
}

TEST_CASE("conjugation sign examples") {
  auto [s1, e1] = conjugate(PauliString::from_text("X"), PauliString::from_text("Y"));
  CHECK(s1 == -1);
  CHECK(e1 == PauliString::from_text("Y"));

  auto [s2, e2] = conjugate(PauliString::from_text("I"), PauliString::from_text("Z"));
  CHECK(s2 == 1);
  CHECK(e2 == PauliString::from_text("Z"));

  auto [s3, e3] = conjugate(PauliString::from_text("XZ"), PauliString::from_text("XX"));
  CHECK(s3 == -1);
  CHECK(e3 == PauliString::from_text("XX"));
}

TEST_CASE("conjugation is an involution and sign tracks commutation") {
  Rng rng = make_rng(42);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 4);
    const PauliString p = testing::random_pauli(n, rng);
    const PauliString e = testing::random_pauli(n, rng);
    auto [s, e1] = conjugate(p, e);
    auto [s2, e2] = conjugate(p, e1);
    CHECK(e2 == e);
    CHECK(s * s2 == 1);
    CHECK((s == 1) == commutes(p, e));
  }
}

TEST_CASE("conjugation sign matches the dense matrix oracle up to 4 qubits") {
  Rng rng = make_rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 4);
    const PauliString p = testing::random_pauli(n, rng);
    const PauliString e = testing::random_pauli(n, rng);
    const Eigen::MatrixXcd lhs =
        testing::dense_pauli(p) * testing::dense_pauli(e) * testing::dense_pauli(p);
    auto [sign, unchanged] = conjugate(p, e);
    const Eigen::MatrixXcd rhs = double(sign) * testing::dense_pauli(unchanged);
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() == doctest::Approx(0.0).epsilon(1e-12));
  }
}

TEST_CASE("text round trip and canonical form") {
  Rng rng = make_rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 8);
    const PauliString p = testing::random_pauli(n, rng);
    CHECK(PauliString::from_text(p.text()) == p);
  }
  CHECK(PauliString::from_text("_X.Z").text() == "IXIZ");
  CHECK_THROWS_AS(PauliString::from_text("XQ"), std::invalid_argument);
}

TEST_CASE("letter accessors") {
  PauliString p(4);
  p.set_letter(2, Letter::Y);
  CHECK(p.letter(2) == Letter::Y);
  CHECK(p.letter(0) == Letter::I);
  p.set_letter(2, Letter::I);
  CHECK(p.is_identity());
  CHECK_THROWS_AS(p.set_letter(9, Letter::X), std::out_of_range);
}
