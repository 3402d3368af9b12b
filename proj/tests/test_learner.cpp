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

#include <bit>
#include <cmath>
#include <numbers>

#include "hamlearn/instances.hpp"
#include "hamlearn/learner.hpp"
#include "test_oracles.hpp"

using namespace hamlearn;

namespace {

constexpr double kPi = std::numbers::pi;

QubitSet set_of(std::initializer_list<int> qubits) {
  QubitSet s = 0;
  for (int q : qubits) s |= 1ULL << q;
  return s;
}

std::vector<double> forward_spectrum(const std::vector<double>& lambdas_by_pattern) {
  // Independent forward transform: eigenvalue_xi = sum_b (-1)^{xi.b} lambda_b.
  const std::size_t dim = lambdas_by_pattern.size();
  std::vector<double> eig(dim, 0.0);
  for (std::size_t xi = 0; xi < dim; ++xi) {
    for (std::size_t b = 0; b < dim; ++b) {
      const int sign = (std::popcount(xi & b) & 1) ? -1 : 1;
      eig[xi] += sign * lambdas_by_pattern[b];
    }
  }
  return eig;
}

LearnOptions fast_options(Backend backend, double eps, double delta, std::uint64_t seed) {
  LearnOptions o;
  o.backend = backend;
  o.epsilon = eps;
  o.delta = delta;
  o.seed = seed;
  return o;
}

Hamiltonian full_two_qubit() {
  std::vector<Term> terms;
  double c = -0.35;
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      if (a == 0 && b == 0) continue;
      PauliString op(2);
      op.set_letter(0, static_cast<Letter>(a));
      op.set_letter(1, static_cast<Letter>(b));
      terms.push_back({op, c});
      c += 0.042;
    }
  }
  return Hamiltonian(2, std::move(terms));
}

}  // namespace

TEST_CASE("spanning tree shapes") {
  const SpTree one = build_spt(1);
  REQUIRE(one.edges.size() == 1);
  CHECK(one.edges[0].parent == 0);
  CHECK(one.edges[0].child == 1);

  const SpTree two = build_spt(2);
  REQUIRE(two.edges.size() == 3);
  CHECK(two.edges[0].parent == 0);  // (00, 10) in qubit-0-first reading
  CHECK(two.edges[0].child == 1);
  CHECK(two.edges[1].parent == 0);  // (00, 01)
  CHECK(two.edges[1].child == 2);
  CHECK(two.edges[2].parent == 2);  // (01, 11): lowest set bit cleared
  CHECK(two.edges[2].child == 3);

  const SpTree three = build_spt(3);
  REQUIRE(three.edges.size() == 7);
  for (const SpTreeEdge& e : three.edges) {
    CHECK(std::popcount(e.child) == std::popcount(e.parent) + 1);
    CHECK((e.parent & ~e.child) == 0);
  }
}

TEST_CASE("prep pair: single qubit in the Z basis is a plain superposition") {
  const QubitSet c = set_of({0});
  const PrepPair pair = build_prep_pair(c, uniform_basis(c, Letter::Z), 0, 1);
  StateVector s = basis_state(1, 0);
  for (const auto& [q, u] : pair.u.gates) apply_single_qubit_gate(s, q, u);
  CHECK(s.amps[0].real() == doctest::Approx(1 / std::sqrt(2.0)));
  CHECK(s.amps[1].real() == doctest::Approx(1 / std::sqrt(2.0)));
}

TEST_CASE("prep pair: non-differing X-basis qubit lands in the +1 eigenstate") {
  const QubitSet c = set_of({0, 1});
  const ClusterBasis basis(c, {Letter::X, Letter::X});
  // Patterns differ on qubit 0; qubit 1 has bit 0 -> the +1 eigenstate |+>.
  const PrepPair pair = build_prep_pair(c, basis, 0, 1);
  StateVector s = basis_state(2, 0);
  for (const auto& [q, u] : pair.u.gates) apply_single_qubit_gate(s, q, u);
  // <X_1> must be +1.
  StateVector t = s;
  apply_pauli(t, PauliString::from_text("IX"));
  CHECK((s.amps.adjoint() * t.amps)(0).real() == doctest::Approx(1.0));
}

TEST_CASE("prep pair rejects non-adjacent patterns") {
  const QubitSet c = set_of({0, 1});
  CHECK_THROWS_AS(build_prep_pair(c, uniform_basis(c, Letter::Z), 0, 3), std::invalid_argument);
}

TEST_CASE("cosine and sine return probabilities match the two-level formulas") {
  const Hamiltonian h = full_two_qubit();
  const QubitSet c = set_of({0, 1});
  const ClusterBasis basis(c, {Letter::X, Letter::Z});
  const auto diag = diagonal_part(h, c, basis);

  // Build the reshaped diagonal Hamiltonian explicitly and evolve under it.
  std::vector<Term> diag_terms;
  for (const auto& [pattern, coeff] : diag) {
    PauliString op(2);
    if (pattern & 1) op.set_letter(0, Letter::X);
    if (pattern & 2) op.set_letter(1, Letter::Z);
    diag_terms.push_back({op, coeff});
  }
  const Hamiltonian h_diag(2, std::move(diag_terms));

  auto eig = [&](std::uint32_t xi) {
    double v = 0;
    for (const auto& [b, lambda] : diag) v += (std::popcount(xi & b) & 1) ? -lambda : lambda;
    return v;
  };

  for (const auto& [parent, child] : {std::pair<std::uint32_t, std::uint32_t>{0, 1},
                                      {0, 2},
                                      {2, 3}}) {
    const PrepPair pair = build_prep_pair(c, basis, parent, child);
    StateVector s = basis_state(2, 0);
    for (const auto& [q, u] : pair.u.gates) apply_single_qubit_gate(s, q, u);
    const double t = 0.6;
    const StateVector evolved = evolve_exact(s, h_diag, t);
    const double delta_eps = eig(parent) - eig(child);

    StateVector cosine = evolved;
    for (const auto& [q, u] : pair.u.gates) {
      apply_single_qubit_gate(cosine, q, Eigen::Matrix2cd(u.adjoint()));
    }
    CHECK(std::norm(cosine.amps[0]) == doctest::Approx(0.5 * (1 + std::cos(delta_eps * t))));

    StateVector sine = evolved;
    for (const auto& [q, u] : pair.v.gates) {
      apply_single_qubit_gate(sine, q, Eigen::Matrix2cd(u.adjoint()));
    }
    CHECK(std::norm(sine.amps[0]) == doctest::Approx(0.5 * (1 + std::sin(delta_eps * t))));
  }
}

TEST_CASE("edge difference on a known single-qubit Hamiltonian") {
  const Hamiltonian truth(1, {{PauliString::from_text("Z"), 0.7}});
  SimulatedDevice device(truth, NoiseModel{}, 101);
  const LearnOptions opt = fast_options(Backend::qdrift, 0.1, 0.1, 5);
  const double diff = estimate_edge_difference(device, truth, set_of({0}),
                                               uniform_basis(set_of({0}), Letter::Z), 0, 1, 0.05,
                                               0.05, opt);
  CHECK(std::abs(diff - 1.4) <= 0.05);
}

TEST_CASE("edge difference of a silent Hamiltonian is zero") {
  const Hamiltonian truth(1, {{PauliString::from_text("Z"), 0.0}});
  SimulatedDevice device(truth, NoiseModel{}, 102);
  const LearnOptions opt = fast_options(Backend::trotter, 0.1, 0.1, 6);
  const double diff = estimate_edge_difference(device, truth, set_of({0}),
                                               uniform_basis(set_of({0}), Letter::Z), 0, 1, 0.05,
                                               0.05, opt);
  CHECK(std::abs(diff) <= 0.05);
}

TEST_CASE("all tree edges of a two-qubit instance match the forward transform") {
  const Hamiltonian truth = full_two_qubit();
  const QubitSet c = set_of({0, 1});
  const ClusterBasis basis(c, {Letter::X, Letter::Z});
  const auto diag = diagonal_part(truth, c, basis);
  auto eig = [&](std::uint32_t xi) {
    double v = 0;
    for (const auto& [b, lambda] : diag) v += (std::popcount(xi & b) & 1) ? -lambda : lambda;
    return v;
  };
  SimulatedDevice device(truth, NoiseModel{}, 103);
  const LearnOptions opt = fast_options(Backend::trotter, 0.1, 0.1, 7);
  for (const SpTreeEdge& e : build_spt(2).edges) {
    const double diff =
        estimate_edge_difference(device, truth, c, basis, e.parent, e.child, 0.05, 0.05, opt);
    CHECK(std::abs(diff - (eig(e.parent) - eig(e.child))) <= 0.05);
  }
}

TEST_CASE("spectrum accumulation sign convention and reconstruction") {
  const SpTree one = build_spt(1);
  const SpectrumTable t1 = accumulate_spectrum(one, {1.4});
  CHECK(t1.eigenvalue[0] == 0.0);
  CHECK(t1.eigenvalue[1] == doctest::Approx(-1.4));

  // Random 2-bit spectrum: differences along tree edges reconstruct the
  // eigenvalues up to the root gauge.
  Rng rng = make_rng(31);
  const SpTree two = build_spt(2);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> eig(4);
    for (double& v : eig) v = 2 * uniform01(rng) - 1;
    std::vector<double> diffs;
    for (const SpTreeEdge& e : two.edges) diffs.push_back(eig[e.parent] - eig[e.child]);
    const SpectrumTable table = accumulate_spectrum(two, diffs);
    for (std::size_t xi = 0; xi < 4; ++xi) {
      CHECK(table.eigenvalue[xi] == doctest::Approx(eig[xi] - eig[0]));
    }
  }

  const SpectrumTable zeros = accumulate_spectrum(two, {0, 0, 0});
  for (double v : zeros.eigenvalue) CHECK(v == 0.0);

  CHECK_THROWS_AS(accumulate_spectrum(two, {1.0, 2.0}), std::invalid_argument);
  CHECK_THROWS_AS(accumulate_spectrum(two, {1.0, std::nan(""), 0.0}), std::invalid_argument);
}

TEST_CASE("coefficient recovery inverts the forward transform") {
  // |C| = 1 with the gauge applied.
  const SpTree one = build_spt(1);
  const auto l1 = recover_coefficients(accumulate_spectrum(one, {1.4}));
  CHECK(l1[1] == doctest::Approx(0.7));

  // Random 3-bit coefficient vectors round-trip to 1e-12.
  Rng rng = make_rng(32);
  const SpTree three = build_spt(3);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> lambdas(8);
    lambdas[0] = 0.0;  // identity coefficient is not observable
    for (std::size_t b = 1; b < 8; ++b) lambdas[b] = 2 * uniform01(rng) - 1;
    const std::vector<double> eig = forward_spectrum(lambdas);
    std::vector<double> diffs;
    for (const SpTreeEdge& e : three.edges) diffs.push_back(eig[e.parent] - eig[e.child]);
    const auto recovered = recover_coefficients(accumulate_spectrum(three, diffs));
    for (std::size_t b = 1; b < 8; ++b) {
      CHECK(std::abs(recovered[b] - lambdas[b]) < 1e-12);
    }
  }

  const auto zeros = recover_coefficients(accumulate_spectrum(three, std::vector<double>(7, 0.0)));
  for (double v : zeros) CHECK(v == 0.0);
}

TEST_CASE("learn_all on a silent chain returns near-zero coefficients") {
  const Hamiltonian shape = heisenberg_chain(4, 1);
  std::vector<Term> terms;
  for (const Term& t : shape.terms()) terms.push_back({t.op, 0.0});
  const Hamiltonian truth(4, std::move(terms));
  SimulatedDevice device(truth, NoiseModel{}, 104);
  const LearnResult res = learn_all(device, truth, fast_options(Backend::trotter, 0.1, 0.1, 8));
  for (const CoefficientEstimate& e : res.estimates) {
    CHECK(std::abs(e.lambda_hat) <= 0.1);
  }
}

TEST_CASE("learn_all covers every term and reconciles duplicates") {
  const Hamiltonian truth = heisenberg_chain(5, 41);
  SimulatedDevice device(truth, NoiseModel{}, 105);
  const double eps = 0.15;
  const LearnResult res = learn_all(device, truth, fast_options(Backend::trotter, eps, 0.1, 9));
  bool saw_duplicate = false;
  for (std::size_t a = 0; a < truth.terms().size(); ++a) {
    const CoefficientEstimate& e = res.estimates[a];
    CHECK_FALSE(e.values.empty());
    CHECK(e.values[0] == e.lambda_hat);  // first pass wins
    CHECK(e.provenance.size() == e.values.size());
    saw_duplicate = saw_duplicate || e.values.size() > 1;
    for (double v : e.values) {
      CHECK(std::abs(v - e.lambda_hat) <= 2 * eps);
      CHECK(std::abs(v - truth.terms()[a].coeff) <= eps);
    }
  }
  // Chain field terms sit inside two clusters of different colors.
  CHECK(saw_duplicate);
}

TEST_CASE("ledger law: device time equals the ladder accounting") {
  const Hamiltonian truth = heisenberg_chain(4, 51);
  SimulatedDevice device(truth, NoiseModel{}, 106);
  const LearnResult res = learn_all(device, truth, fast_options(Backend::trotter, 0.15, 0.1, 10));
  CHECK(res.ledger.total_evolution_time ==
        doctest::Approx(res.rpe_time_accounting).epsilon(1e-9));
  CHECK(res.ledger.experiment_count > 0);
  CHECK(res.batch_count > 0);
}

TEST_CASE("learn_all is deterministic under fixed seeds") {
  const Hamiltonian truth = heisenberg_chain(4, 61);
  SimulatedDevice d1(truth, NoiseModel{}, 107);
  SimulatedDevice d2(truth, NoiseModel{}, 107);
  const LearnResult r1 = learn_all(d1, truth, fast_options(Backend::qdrift, 0.2, 0.2, 11));
  const LearnResult r2 = learn_all(d2, truth, fast_options(Backend::qdrift, 0.2, 0.2, 11));
  REQUIRE(r1.estimates.size() == r2.estimates.size());
  for (std::size_t a = 0; a < r1.estimates.size(); ++a) {
    CHECK(r1.estimates[a].lambda_hat == r2.estimates[a].lambda_hat);
  }
}

TEST_CASE("single-parameter learning reduces to three basis ladders") {
  const Hamiltonian truth(1, {{PauliString::from_text("X"), 0.62}});
  SimulatedDevice device(truth, NoiseModel{}, 108);
  const LearnOptions opt = fast_options(Backend::qdrift, 0.05, 0.05, 12);
  const LearnResult res = learn_all(device, truth, opt);
  CHECK(std::abs(res.estimates[0].lambda_hat - 0.62) <= 0.05);
  CHECK(res.batch_count == 3);  // one ladder per basis letter

  // One parameter at the same targets costs one ladder; the full schedule
  // runs all three bases, so the ledger carries a factor-3 overhead.
  SimulatedDevice single_device(truth, NoiseModel{}, 109);
  const double tau_prime = kPi / 8;
  ExperimentLedger before = single_device.ledger();
  estimate_edge_difference(single_device, truth, set_of({0}),
                           uniform_basis(set_of({0}), Letter::X), 0, 1, opt.epsilon, opt.delta,
                           opt);
  const double single_cost = single_device.ledger().total_evolution_time -
                             before.total_evolution_time;
  (void)tau_prime;
  CHECK(res.ledger.total_evolution_time == doctest::Approx(3 * single_cost).epsilon(0.01));
}

TEST_CASE("segment-count rules") {
  ReshapeConstants c;
  c.deviation_budget = 0.1;
  c.qdrift_rate = 0.5;
  c.trotter_rate = 0.4;
  CHECK(segment_count(Backend::qdrift, 2.0, c) == 20);
  CHECK(segment_count(Backend::trotter, 4.0, c) ==
        static_cast<long long>(std::ceil(0.4 * 8.0 / std::sqrt(0.1))));
  CHECK(segment_count(Backend::qdrift, 0.0, c) == 1);
}
