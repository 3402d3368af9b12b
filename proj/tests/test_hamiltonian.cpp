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

#include "hamlearn/clusters.hpp"
#include "hamlearn/instances.hpp"
#include "test_oracles.hpp"

using namespace hamlearn;

namespace {

QubitSet set_of(std::initializer_list<int> qubits) {
  QubitSet s = 0;
  for (int q : qubits) s |= 1ULL << q;
  return s;
}

Hamiltonian two_qubit_full(double base) {
  // All 15 non-identity two-qubit strings with distinct small coefficients.
  std::vector<Term> terms;
  double c = base;
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      if (a == 0 && b == 0) continue;
      PauliString op(2);
      op.set_letter(0, static_cast<Letter>(a));
      op.set_letter(1, static_cast<Letter>(b));
      terms.push_back({op, c});
      c += 0.01;
    }
  }
  return Hamiltonian(2, std::move(terms));
}

// Lemma-style validity: within one color class, clusters are pairwise
// disjoint and no third cluster intersects two of them.
void check_coloring_valid(const ClusterColoring& col) {
  for (int c = 0; c < col.n_colors; ++c) {
    const auto& cls = col.classes[static_cast<std::size_t>(c)];
    for (std::size_t i = 0; i < cls.size(); ++i) {
      for (std::size_t j = i + 1; j < cls.size(); ++j) {
        const QubitSet a = col.clusters[static_cast<std::size_t>(cls[i])];
        const QubitSet b = col.clusters[static_cast<std::size_t>(cls[j])];
        CHECK((a & b) == 0);
        for (const QubitSet third : col.clusters) {
          if (third == a || third == b) continue;
          CHECK_FALSE(((third & a) != 0 && (third & b) != 0));
        }
      }
    }
  }
}

}  // namespace

TEST_CASE("validate recomputes structure stats") {
  const Hamiltonian chain = heisenberg_chain(4, 11);
  const HamiltonianStats s = chain.validate();
  CHECK(s.term_count == 13);  // 3*(N-1) + N
  CHECK(s.locality_k == 2);

  const Hamiltonian single(1, {{PauliString::from_text("X"), 0.5}});
  const HamiltonianStats s1 = single.validate();
  CHECK(s1.locality_k == 1);
  CHECK(s1.overlap_degree == 0);
  CHECK(s1.term_count == 1);

  const Hamiltonian pair_overlap(
      3, {{PauliString::from_text("XXI"), 0.1}, {PauliString::from_text("IZZ"), 0.2}});
  CHECK(pair_overlap.validate().overlap_degree == 1);
}

TEST_CASE("validate rejects out-of-range coefficients; construction rejects duplicates") {
  const Hamiltonian bad(1, {{PauliString::from_text("X"), 1.5}});
  CHECK_THROWS_AS(bad.validate(), std::domain_error);
  CHECK_THROWS_AS(Hamiltonian(2, {{PauliString::from_text("XX"), 0.1},
                                  {PauliString::from_text("XX"), 0.2}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(Hamiltonian(2, {{PauliString(2), 0.1}}), std::invalid_argument);
}

TEST_CASE("clusters are maximal supports") {
  const Hamiltonian chain = heisenberg_chain(4, 1);
  // Singleton Z supports are absorbed into the pair supports.
  CHECK(build_clusters(chain) ==
        std::vector<QubitSet>{set_of({0, 1}), set_of({1, 2}), set_of({2, 3})});

  const Hamiltonian single(1, {{PauliString::from_text("X"), 0.5}});
  CHECK(build_clusters(single) == std::vector<QubitSet>{set_of({0})});

  const Hamiltonian dup(2, {{PauliString::from_text("XX"), 0.1},
                            {PauliString::from_text("ZZ"), 0.2}});
  CHECK(build_clusters(dup) == std::vector<QubitSet>{set_of({0, 1})});
}

TEST_CASE("cluster graph: chain of 4 forms a triangle, three colors") {
  const ClusterColoring col = build_cluster_graph_and_color(build_clusters(heisenberg_chain(4, 1)));
  CHECK(col.edges.size() == 3);
  CHECK(col.n_colors == 3);
  check_coloring_valid(col);
}

TEST_CASE("cluster graph: long chain colors repeat with period 3") {
  const ClusterColoring col =
      build_cluster_graph_and_color(build_clusters(heisenberg_chain(10, 1)));
  CHECK(col.n_colors == 3);
  for (std::size_t i = 0; i < col.clusters.size(); ++i) {
    CHECK(col.color_of[i] == static_cast<int>(i % 3));
  }
  // {0,1} and {3,4} share a color: not adjacent, no common intersecting third.
  CHECK(col.color_of[0] == col.color_of[3]);
  check_coloring_valid(col);
}

TEST_CASE("cluster graph: single cluster needs one color") {
  const Hamiltonian h(2, {{PauliString::from_text("XX"), 0.3}});
  const ClusterColoring col = build_cluster_graph_and_color(build_clusters(h));
  CHECK(col.n_colors == 1);
  CHECK(col.edges.empty());
}

TEST_CASE("coloring validity holds on random instances") {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const Hamiltonian h = random_low_intersection(10, seed, (seed % 2) ? 2 : 3);
    const ClusterColoring col = build_cluster_graph_and_color(build_clusters(h));
    check_coloring_valid(col);
    CHECK(col.n_colors >= 1);
  }
}

TEST_CASE("qubit interaction graph for a chain color class is edge-free") {
  const Hamiltonian chain = heisenberg_chain(6, 5);
  const ClusterColoring col = build_cluster_graph_and_color(build_clusters(chain));
  const QubitColoring qc = build_qubit_graph_and_color(chain, col, 0);
  CHECK(qc.edges.empty());
  CHECK(qc.n_colors == 1);
  // k = 2 bound: (d+1)(k-2)+1 = 1.
  CHECK(qc.n_colors <= 1);
  CHECK(qc.free_qubits != 0);
}

TEST_CASE("qubit interaction graph with no free qubits is empty") {
  const Hamiltonian h(2, {{PauliString::from_text("XX"), 0.3}});
  const ClusterColoring col = build_cluster_graph_and_color(build_clusters(h));
  const QubitColoring qc = build_qubit_graph_and_color(h, col, 0);
  CHECK(qc.free_qubits == 0);
  CHECK(qc.n_colors == 0);
}

TEST_CASE("qubit coloring respects the degree bound on random instances") {
  for (std::uint64_t seed = 20; seed < 26; ++seed) {
    const Hamiltonian h = random_low_intersection(10, seed, 3);
    const HamiltonianStats s = h.validate();
    const ClusterColoring col = build_cluster_graph_and_color(build_clusters(h));
    for (int c = 0; c < col.n_colors; ++c) {
      const QubitColoring qc = build_qubit_graph_and_color(h, col, c);
      CHECK(qc.n_colors <= (s.overlap_degree + 1) * std::max(0, s.locality_k - 2) + 1);
      for (auto [a, b] : qc.edges) {
        CHECK(qc.color_of_qubit[static_cast<std::size_t>(a)] !=
              qc.color_of_qubit[static_cast<std::size_t>(b)]);
      }
    }
  }
}

TEST_CASE("diagonal part of the full two-qubit Hamiltonian in the XZ basis") {
  const Hamiltonian h = two_qubit_full(-0.07);
  const QubitSet c01 = set_of({0, 1});
  const ClusterBasis basis(c01, {Letter::X, Letter::Z});
  const auto diag = diagonal_part(h, c01, basis);
  // Surviving entries: X0 Z1, X0 I, I Z1 (bit 0 = qubit 0).
  REQUIRE(diag.size() == 3);
  const double l_xz = h.terms()[static_cast<std::size_t>(h.find_term(PauliString::from_text("XZ")))].coeff;
  const double l_xi = h.terms()[static_cast<std::size_t>(h.find_term(PauliString::from_text("XI")))].coeff;
  const double l_iz = h.terms()[static_cast<std::size_t>(h.find_term(PauliString::from_text("IZ")))].coeff;
  CHECK(diag.at(3) == doctest::Approx(l_xz));
  CHECK(diag.at(1) == doctest::Approx(l_xi));
  CHECK(diag.at(2) == doctest::Approx(l_iz));
}

TEST_CASE("diagonal part of a chain cluster in the ZZ basis") {
  const Hamiltonian chain = heisenberg_chain(4, 9);
  const QubitSet c01 = set_of({0, 1});
  const auto diag = diagonal_part(chain, c01, uniform_basis(c01, Letter::Z));
  REQUIRE(diag.size() == 3);
  CHECK(diag.at(3) ==
        doctest::Approx(chain.terms()[static_cast<std::size_t>(chain.find_term(PauliString::from_text("ZZII")))].coeff));
  CHECK(diag.at(1) ==
        doctest::Approx(chain.terms()[static_cast<std::size_t>(chain.find_term(PauliString::from_text("ZIII")))].coeff));
  CHECK(diag.at(2) ==
        doctest::Approx(chain.terms()[static_cast<std::size_t>(chain.find_term(PauliString::from_text("IZII")))].coeff));
}

TEST_CASE("diagonal part with no matching letters is empty") {
  const Hamiltonian chain = heisenberg_chain(4, 9);
  // The YY basis on {0,1} only matches the YY coupling; a basis with mixed
  // letters that no term uses comes back empty.
  const QubitSet c01 = set_of({0, 1});
  const auto diag = diagonal_part(chain, c01, ClusterBasis(c01, {Letter::X, Letter::Y}));
  CHECK(diag.empty());
}

TEST_CASE("diagonal part rejects non-clusters") {
  const Hamiltonian chain = heisenberg_chain(4, 9);
  const QubitSet not_cluster = set_of({0, 3});
  CHECK_THROWS_AS(diagonal_part(chain, not_cluster, uniform_basis(not_cluster, Letter::Z)),
                  std::invalid_argument);
}

TEST_CASE("bases jointly cover exactly the terms inside each cluster") {
  Rng rng = make_rng(77);
  for (std::uint64_t seed = 40; seed < 44; ++seed) {
    const Hamiltonian h = random_low_intersection(8, seed, 3);
    for (const QubitSet cluster : build_clusters(h)) {
      const int nb = static_cast<int>(qubits_of(cluster).size());
      if (nb > 3) continue;
      // Count how many bases expose each inside term.
      std::map<int, int> seen_count;
      int n_bases = 1;
      for (int i = 0; i < nb; ++i) n_bases *= 3;
      for (int code = 0; code < n_bases; ++code) {
        std::vector<Letter> letters;
        int c = code;
        for (int i = 0; i < nb; ++i) {
          letters.push_back(static_cast<Letter>(1 + c % 3));
          c /= 3;
        }
        const ClusterBasis basis(cluster, letters);
        for (const auto& [pattern, coeff] : diagonal_part(h, cluster, basis)) {
          PauliString op(h.n_qubits());
          const auto qubits = qubits_of(cluster);
          for (int i = 0; i < nb; ++i) {
            if ((pattern >> i) & 1) op.set_letter(qubits[static_cast<std::size_t>(i)], letters[static_cast<std::size_t>(i)]);
          }
          const int a = h.find_term(op);
          REQUIRE(a >= 0);
          CHECK(coeff == doctest::Approx(h.terms()[static_cast<std::size_t>(a)].coeff));
          seen_count[a] += 1;
        }
      }
      // Each inside term appears once per basis matching it: 3^(nb - weight).
      for (std::size_t a = 0; a < h.terms().size(); ++a) {
        const PauliString& op = h.terms()[a].op;
        if ((op.support_mask() & ~cluster) != 0) {
          CHECK(seen_count.count(static_cast<int>(a)) == 0);
          continue;
        }
        int expected = 1;
        for (int i = 0; i < nb - op.weight(); ++i) expected *= 3;
        CHECK(seen_count[static_cast<int>(a)] == expected);
      }
    }
  }
  (void)rng;
}
