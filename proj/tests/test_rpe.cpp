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

#include <cmath>
#include <numbers>

#include "hamlearn/rpe.hpp"

using namespace hamlearn;

namespace {

constexpr double kPi = std::numbers::pi;

/// Closed-form Bernoulli oracle with an optional fixed additive perturbation
/// of the two probabilities; the perturbation magnitude is the l2 norm of
/// the (cos, sin) offsets, worst-case oriented perpendicular to the phase.
class FormulaOracle final : public PhaseOracle {
 public:
  FormulaOracle(double theta, double offset_magnitude = 0.0)
      : theta_(theta),
        offset_cos_(-offset_magnitude * std::sin(theta)),
        offset_sin_(offset_magnitude * std::cos(theta)) {}

  bool sample(long long multiple, Quadrature quad, Rng& rng) override {
    const double angle = static_cast<double>(multiple) * theta_;
    double p = quad == Quadrature::cosine ? 0.5 * (1 + std::cos(angle)) + offset_cos_
                                          : 0.5 * (1 + std::sin(angle)) + offset_sin_;
    p = std::clamp(p, 0.0, 1.0);
    return uniform01(rng) < p;
  }

 private:
  double theta_;
  double offset_cos_;
  double offset_sin_;
};

double run_trials(double theta, double offset, double target, double delta, int n_trials,
                  std::uint64_t seed, long long* total_multiple = nullptr) {
  int ok = 0;
  for (int trial = 0; trial < n_trials; ++trial) {
    FormulaOracle oracle(theta, offset);
    Rng rng = make_rng(seed, static_cast<std::uint64_t>(trial));
    const PhaseEstimate est = estimate_phase(oracle, target, delta, rng);
    ok += std::abs(est.theta - theta) <= target;
    if (total_multiple) *total_multiple += est.total_multiple;
  }
  return static_cast<double>(ok) / n_trials;
}

}  // namespace

TEST_CASE("zero phase is recovered") {
  FormulaOracle oracle(0.0);
  Rng rng = make_rng(1);
  const PhaseEstimate est = estimate_phase(oracle, 1e-3, 0.05, rng);
  CHECK(std::abs(est.theta) <= 1e-3);
  CHECK(est.total_multiple > 0);
}

TEST_CASE("noiseless success rate at pi/3") {
  CHECK(run_trials(kPi / 3, 0.0, 1e-3, 0.05, 200, 11) >= 0.95);
}

TEST_CASE("success rate survives a 0.30 adversarial offset") {
  CHECK(run_trials(kPi / 3, 0.30, 1e-3, 0.05, 200, 12) >= 0.95);
}

TEST_CASE("halving the target roughly doubles the evolution-time proxy") {
  long long coarse = 0, fine = 0;
  run_trials(0.4, 0.0, 2e-3, 0.05, 5, 13, &coarse);
  run_trials(0.4, 0.0, 1e-3, 0.05, 5, 13, &fine);
  const double ratio = static_cast<double>(fine) / static_cast<double>(coarse);
  CHECK(ratio >= 1.7);
  CHECK(ratio <= 2.6);
}

TEST_CASE("estimates stay in the principal range") {
  for (double theta : {-1.5, -0.3, 0.0, 0.7, 1.5}) {
    FormulaOracle oracle(theta);
    Rng rng = make_rng(14);
    const PhaseEstimate est = estimate_phase(oracle, 1e-2, 0.05, rng);
    CHECK(est.theta >= -kPi);
    CHECK(est.theta < kPi);
    CHECK(std::abs(est.theta - theta) <= 1e-2);
  }
}

TEST_CASE("target range is validated") {
  FormulaOracle oracle(0.1);
  Rng rng = make_rng(15);
  CHECK_THROWS_AS(estimate_phase(oracle, 0.0, 0.05, rng), std::invalid_argument);
  CHECK_THROWS_AS(estimate_phase(oracle, 4.0, 0.05, rng), std::invalid_argument);
  CHECK_THROWS_AS(estimate_phase(oracle, 0.1, 0.0, rng), std::invalid_argument);
}

TEST_CASE("median examples") {
  CHECK(median_amplify({0.1}) == doctest::Approx(0.1));
  CHECK(median_amplify({0.1, 0.1, 0.9}) == doctest::Approx(0.1));
  CHECK_THROWS_AS(median_amplify({}), std::invalid_argument);
  CHECK_THROWS_AS(median_amplify({0.1, 0.2}), std::invalid_argument);
}

TEST_CASE("median rejects a minority of adversarial estimates") {
  Rng rng = make_rng(16);
  const double truth = 0.42;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> est;
    for (int i = 0; i < 6; ++i) est.push_back(truth + 0.01 * (uniform01(rng) - 0.5));
    for (int i = 0; i < 3; ++i) est.push_back(truth + 1.5 * (uniform01(rng) - 0.5));
    CHECK(std::abs(median_amplify(est) - truth) < 0.02);
  }
}

TEST_CASE("lockstep ladder matches single-channel estimation statistically") {
  class TwoPhaseOracle final : public BatchPhaseOracle {
   public:
    explicit TwoPhaseOracle(std::uint64_t seed) : rng_(make_rng(seed)) {}
    int channels() const override { return 2; }
    std::vector<long long> sample_many(long long multiple, Quadrature quad, int n) override {
      std::vector<long long> out(2, 0);
      const double thetas[2] = {0.35, -0.9};
      for (int v = 0; v < 2; ++v) {
        for (int i = 0; i < n; ++i) {
          const double angle = static_cast<double>(multiple) * thetas[v];
          const double p = quad == Quadrature::cosine ? 0.5 * (1 + std::cos(angle))
                                                      : 0.5 * (1 + std::sin(angle));
          out[static_cast<std::size_t>(v)] += uniform01(rng_) < p;
        }
      }
      return out;
    }

   private:
    Rng rng_;
  };

  TwoPhaseOracle oracle(17);
  const auto est = estimate_phases_lockstep(oracle, 1e-3, 0.05);
  REQUIRE(est.size() == 2);
  CHECK(std::abs(est[0].theta - 0.35) <= 1e-3);
  CHECK(std::abs(est[1].theta + 0.9) <= 1e-3);
  CHECK(est[0].total_multiple == est[1].total_multiple);
}
