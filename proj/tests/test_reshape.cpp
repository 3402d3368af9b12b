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

#include <map>

#include "hamlearn/instances.hpp"
#include "hamlearn/reshape.hpp"
#include "test_oracles.hpp"

using namespace hamlearn;

namespace {

QubitSet set_of(std::initializer_list<int> qubits) {
  QubitSet s = 0;
  for (int q : qubits) s |= 1ULL << q;
  return s;
}

TwirlDistribution chain_color0_twirl(const Hamiltonian& chain, Letter l) {
  const ClusterColoring col = build_cluster_graph_and_color(build_clusters(chain));
  std::vector<ClusterBasis> bases;
  for (int id : col.classes[0]) {
    bases.push_back(uniform_basis(col.clusters[static_cast<std::size_t>(id)], l));
  }
  return make_twirl(chain.n_qubits(), 0, bases);
}

}  // namespace

TEST_CASE("cluster qubits sample only the identity or their basis letter") {
  const TwirlDistribution d = make_twirl(1, 0, {uniform_basis(set_of({0}), Letter::X)});
  Rng rng = make_rng(1);
  int x_count = 0;
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    const PauliString p = sample_twirl_pauli(d, rng);
    const Letter l = p.letter(0);
    REQUIRE((l == Letter::I || l == Letter::X));
    x_count += l == Letter::X;
  }
  // ~Binomial(n, 1/2); 5 sigma = 250.
  CHECK(std::abs(x_count - n / 2) < 250);
}

TEST_CASE("free qubits sample all four letters uniformly") {
  TwirlDistribution d;
  d.n_qubits = 1;
  d.free_qubits = 1;
  Rng rng = make_rng(2);
  int counts[4] = {0, 0, 0, 0};
  const int n = 10000;
  for (int i = 0; i < n; ++i) counts[static_cast<int>(sample_twirl_pauli(d, rng).letter(0))]++;
  for (int c : counts) CHECK(std::abs(c - n / 4) < 5 * std::sqrt(n * 0.25 * 0.75));
}

TEST_CASE("with no free qubits the sample support stays inside the clusters") {
  const TwirlDistribution d = make_twirl(2, 0, {uniform_basis(set_of({0, 1}), Letter::Y)});
  CHECK(d.free_qubits == 0);
  Rng rng = make_rng(3);
  for (int i = 0; i < 200; ++i) {
    CHECK((sample_twirl_pauli(d, rng).support_mask() & ~d.constrained) == 0);
  }
}

TEST_CASE("single-qubit reshaping keeps only the matching letter") {
  const Hamiltonian h(1, {{PauliString::from_text("X"), 0.3},
                          {PauliString::from_text("Y"), -0.2},
                          {PauliString::from_text("Z"), 0.5}});
  const TwirlDistribution d = make_twirl(1, 0, {uniform_basis(set_of({0}), Letter::X)});
  const Hamiltonian eff = effective_hamiltonian(h, d);
  REQUIRE(eff.size() == 1);
  CHECK(eff.terms()[0].op == PauliString::from_text("X"));
  CHECK(eff.terms()[0].coeff == doctest::Approx(0.3));
}

TEST_CASE("chain reshaping decouples the color class and kills the rest") {
  const Hamiltonian chain = heisenberg_chain(6, 21);
  const TwirlDistribution d = chain_color0_twirl(chain, Letter::Z);
  const Hamiltonian eff = effective_hamiltonian(chain, d);
  // Survivors: per cluster {a, a+1} of color 0 the ZZ coupling and both
  // Z fields, at unchanged coefficients.
  std::map<std::string, double> expect;
  for (int a : {0, 3}) {
    std::string zz(6, 'I'), z1(6, 'I'), z2(6, 'I');
    zz[static_cast<std::size_t>(a)] = 'Z';
    zz[static_cast<std::size_t>(a + 1)] = 'Z';
    z1[static_cast<std::size_t>(a)] = 'Z';
    z2[static_cast<std::size_t>(a + 1)] = 'Z';
    for (const auto& text : {zz, z1, z2}) {
      expect[text] =
          chain.terms()[static_cast<std::size_t>(chain.find_term(PauliString::from_text(text)))]
              .coeff;
    }
  }
  REQUIRE(eff.size() == expect.size());
  for (const Term& t : eff.terms()) {
    REQUIRE(expect.count(t.op.text()) == 1);
    CHECK(t.coeff == doctest::Approx(expect[t.op.text()]));
  }
}

TEST_CASE("a fully free twirl leaves nothing") {
  const Hamiltonian chain = heisenberg_chain(4, 5);
  TwirlDistribution d;
  d.n_qubits = 4;
  d.free_qubits = 0xF;
  CHECK(effective_hamiltonian(chain, d).size() == 0);
}

TEST_CASE("reshaping is a projection and output terms commute pairwise") {
  const Hamiltonian chain = heisenberg_chain(8, 31);
  const TwirlDistribution d = chain_color0_twirl(chain, Letter::X);
  const Hamiltonian eff = effective_hamiltonian(chain, d);
  const Hamiltonian eff2 = effective_hamiltonian(eff, d);
  REQUIRE(eff.size() == eff2.size());
  for (std::size_t i = 0; i < eff.size(); ++i) {
    CHECK(eff.terms()[i].op == eff2.terms()[i].op);
    CHECK(eff.terms()[i].coeff == eff2.terms()[i].coeff);
    // Support condition: inside one of the color's clusters.
    bool inside = false;
    for (const ClusterBasis& b : d.cluster_bases) {
      inside = inside || (eff.terms()[i].op.support_mask() & ~b.cluster) == 0;
    }
    CHECK(inside);
    for (std::size_t j = 0; j < eff.size(); ++j) {
      CHECK(commutes(eff.terms()[i].op, eff.terms()[j].op));
    }
  }
}

TEST_CASE("Monte-Carlo twirl average matches the analytic survival rule") {
  const Hamiltonian chain = heisenberg_chain(5, 13);
  const TwirlDistribution d = chain_color0_twirl(chain, Letter::Y);
  const Hamiltonian eff = effective_hamiltonian(chain, d);
  const int n = 10000;
  for (const Term& t : chain.terms()) {
    // Conjugation never changes the string, so the term-wise average is the
    // empirical mean sign.
    double mean_sign = 0;
    Rng rng = make_rng(17, static_cast<std::uint64_t>(chain.find_term(t.op)));
    for (int i = 0; i < n; ++i) {
      mean_sign += commutes(sample_twirl_pauli(d, rng), t.op) ? 1.0 : -1.0;
    }
    mean_sign /= n;
    const bool survives = eff.find_term(t.op) >= 0;
    if (survives) {
      CHECK(mean_sign == doctest::Approx(1.0));
    } else {
      CHECK(std::abs(mean_sign) < 5.0 / std::sqrt(double(n)));
    }
  }
}

TEST_CASE("trotter ensemble sizes for a chain color class") {
  const Hamiltonian chain = heisenberg_chain(6, 2);
  const ClusterColoring col = build_cluster_graph_and_color(build_clusters(chain));
  const QubitColoring qc = build_qubit_graph_and_color(chain, col, 0);
  std::vector<ClusterBasis> bases;
  for (int id : col.classes[0]) {
    bases.push_back(uniform_basis(col.clusters[static_cast<std::size_t>(id)], Letter::Z));
  }
  const TrotterEnsemble e = build_trotter_ensemble(chain, col, qc, bases);
  CHECK(e.decoupler_count == 4);     // one qubit color, 4^1 patterns
  CHECK(e.diagonalizer_count == 4);  // shared two-bit pattern
  CHECK(e.words.size() == 16);

  // The four decouplers stamp one letter on every free qubit.
  std::map<std::string, int> seen;
  for (std::size_t i = 0; i < 4; ++i) {
    const PauliString& w = e.words[i * 4];  // diagonalizer pattern 0 there
    std::string letters;
    for (int q : qubits_of(qc.free_qubits)) letters.push_back(letter_char(w.letter(q)));
    seen[letters]++;
  }
  CHECK(seen.size() == 4);
  CHECK(seen.count("II") == 1);
  CHECK(seen.count("XX") == 1);
  CHECK(seen.count("YY") == 1);
  CHECK(seen.count("ZZ") == 1);
}

TEST_CASE("no free qubits: single decoupler") {
  const Hamiltonian h(2, {{PauliString::from_text("XX"), 0.2}});
  const ClusterColoring col = build_cluster_graph_and_color(build_clusters(h));
  const QubitColoring qc = build_qubit_graph_and_color(h, col, 0);
  const TrotterEnsemble e =
      build_trotter_ensemble(h, col, qc, {uniform_basis(set_of({0, 1}), Letter::X)});
  CHECK(e.decoupler_count == 1);
  CHECK(e.diagonalizer_count == 4);
}

TEST_CASE("uniform ensemble average equals the analytic reshaping on a chain") {
  const Hamiltonian chain = heisenberg_chain(6, 23);
  const ClusterColoring col = build_cluster_graph_and_color(build_clusters(chain));
  const QubitColoring qc = build_qubit_graph_and_color(chain, col, 0);
  std::vector<ClusterBasis> bases;
  for (int id : col.classes[0]) {
    bases.push_back(uniform_basis(col.clusters[static_cast<std::size_t>(id)], Letter::X));
  }
  const TrotterEnsemble e = build_trotter_ensemble(chain, col, qc, bases);
  const Hamiltonian eff = effective_hamiltonian(chain, make_twirl(6, 0, bases));
  for (const Term& t : chain.terms()) {
    double avg = 0;
    for (const PauliString& w : e.words) avg += commutes(w, t.op) ? 1.0 : -1.0;
    avg /= static_cast<double>(e.words.size());
    const int idx = eff.find_term(t.op);
    CHECK(avg == doctest::Approx(idx >= 0 ? 1.0 : 0.0));
  }
}

TEST_CASE("ensemble size cap is enforced") {
  const Hamiltonian chain = heisenberg_chain(6, 2);
  const ClusterColoring col = build_cluster_graph_and_color(build_clusters(chain));
  const QubitColoring qc = build_qubit_graph_and_color(chain, col, 0);
  std::vector<ClusterBasis> bases;
  for (int id : col.classes[0]) {
    bases.push_back(uniform_basis(col.clusters[static_cast<std::size_t>(id)], Letter::Z));
  }
  CHECK_THROWS_AS(build_trotter_ensemble(chain, col, qc, bases, 8), std::domain_error);
}

TEST_CASE("palindromic schedule with uniform durations") {
  TrotterEnsemble two;
  two.decoupler_count = 1;
  two.diagonalizer_count = 2;
  two.words = {PauliString::from_text("I"), PauliString::from_text("X")};
  const auto sched = trotter_step_schedule(two, 1.0);
  REQUIRE(sched.size() == 4);
  CHECK(sched[0].first == two.words[0]);
  CHECK(sched[1].first == two.words[1]);
  CHECK(sched[2].first == two.words[1]);
  CHECK(sched[3].first == two.words[0]);
  for (const auto& [w, dur] : sched) CHECK(dur == doctest::Approx(0.25));

  Rng rng = make_rng(9);
  for (int trial = 0; trial < 10; ++trial) {
    TrotterEnsemble e;
    const int n_words = 1 + static_cast<int>(rng() % 20);
    for (int i = 0; i < n_words; ++i) e.words.push_back(testing::random_pauli(3, rng));
    e.decoupler_count = static_cast<std::size_t>(n_words);
    e.diagonalizer_count = 1;
    const double tau = 0.1 + 0.9 * uniform01(rng);
    double total = 0;
    for (const auto& [w, dur] : trotter_step_schedule(e, tau)) total += dur;
    CHECK(total == doctest::Approx(tau));
  }

  TrotterEnsemble sixteen;
  sixteen.decoupler_count = 4;
  sixteen.diagonalizer_count = 4;
  for (int i = 0; i < 16; ++i) sixteen.words.push_back(PauliString(2));
  const auto s16 = trotter_step_schedule(sixteen, 0.8);
  CHECK(s16.size() == 32);
  CHECK(s16[0].second == doctest::Approx(0.025));
}
