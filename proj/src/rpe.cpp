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

#include "hamlearn/rpe.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace hamlearn {

namespace {

constexpr double kPi = std::numbers::pi;

double wrap_angle(double a) {
  a = std::fmod(a + kPi, 2 * kPi);
  if (a < 0) a += 2 * kPi;
  return a - kPi;
}

void check_targets(double target_error, double delta) {
  if (!(target_error > 0) || !(target_error < kPi)) {
    throw std::invalid_argument("target_error must lie in (0, pi)");
  }
  if (!(delta > 0) || !(delta < 1)) {
    throw std::invalid_argument("delta must lie in (0, 1)");
  }
}

// Refine the running estimate with the stage measurement phi of (l * theta)
// mod 2pi: pick the candidate (phi + 2 pi m) / l closest to the previous
// estimate.
double refine(double prev, double phi, long long multiple) {
  if (multiple == 1) return wrap_angle(phi);
  const double spacing = 2 * kPi / static_cast<double>(multiple);
  const double base = phi / static_cast<double>(multiple);
  const double m = std::round((prev - base) / spacing);
  return base + m * spacing;
}

}  // namespace

long long PhaseOracle::sample_many(long long multiple, Quadrature quad, int n, Rng& rng) {
  long long successes = 0;
  for (int i = 0; i < n; ++i) successes += sample(multiple, quad, rng) ? 1 : 0;
  return successes;
}

int rpe_stage_count(double target_error) {
  return std::max(1, static_cast<int>(std::ceil(std::log2(kPi / target_error))));
}

int rpe_stage_shots(int stage, int stage_count, double delta, const RpeOptions& opt) {
  const double scale =
      std::max(0.25, std::log(1.0 / delta) / std::log(1.0 / opt.delta_ref));
  const double m = opt.shots_base * (1.0 + opt.shots_ramp * (stage_count - stage)) * scale;
  return std::max(2, static_cast<int>(std::ceil(m)));
}

PhaseEstimate estimate_phase(PhaseOracle& oracle, double target_error, double delta, Rng& rng,
                             const RpeOptions& opt) {
  check_targets(target_error, delta);
  PhaseEstimate est;
  est.target_error = target_error;
  est.delta = delta;
  const int stages = rpe_stage_count(target_error);
  double theta = 0;
  for (int j = 1; j <= stages; ++j) {
    const long long ell = 1LL << (j - 1);
    const int shots = rpe_stage_shots(j, stages, delta, opt);
    const long long c = oracle.sample_many(ell, Quadrature::cosine, shots, rng);
    const long long s = oracle.sample_many(ell, Quadrature::sine, shots, rng);
    est.total_multiple += 2LL * shots * ell;
    est.call_count += 2LL * shots;
    const double x = 2.0 * static_cast<double>(c) / shots - 1.0;
    const double y = 2.0 * static_cast<double>(s) / shots - 1.0;
    const double phi = std::atan2(y, x);
    theta = refine(theta, phi, ell);
  }
  est.theta = wrap_angle(theta);
  return est;
}

std::vector<PhaseEstimate> estimate_phases_lockstep(BatchPhaseOracle& oracle, double target_error,
                                                    double delta, const RpeOptions& opt) {
  check_targets(target_error, delta);
  const int n_channels = oracle.channels();
  const int stages = rpe_stage_count(target_error);
  std::vector<double> theta(static_cast<std::size_t>(n_channels), 0.0);
  std::vector<PhaseEstimate> out(static_cast<std::size_t>(n_channels));
  for (auto& e : out) {
    e.target_error = target_error;
    e.delta = delta;
  }
  for (int j = 1; j <= stages; ++j) {
    const long long ell = 1LL << (j - 1);
    const int shots = rpe_stage_shots(j, stages, delta, opt);
    const auto c = oracle.sample_many(ell, Quadrature::cosine, shots);
    const auto s = oracle.sample_many(ell, Quadrature::sine, shots);
    if (static_cast<int>(c.size()) != n_channels || static_cast<int>(s.size()) != n_channels) {
      throw std::runtime_error("batch oracle returned wrong channel count");
    }
    for (int v = 0; v < n_channels; ++v) {
      out[static_cast<std::size_t>(v)].total_multiple += 2LL * shots * ell;
      out[static_cast<std::size_t>(v)].call_count += 2LL * shots;
      const double x = 2.0 * static_cast<double>(c[static_cast<std::size_t>(v)]) / shots - 1.0;
      const double y = 2.0 * static_cast<double>(s[static_cast<std::size_t>(v)]) / shots - 1.0;
      theta[static_cast<std::size_t>(v)] =
          refine(theta[static_cast<std::size_t>(v)], std::atan2(y, x), ell);
    }
  }
  for (int v = 0; v < n_channels; ++v) {
    out[static_cast<std::size_t>(v)].theta = wrap_angle(theta[static_cast<std::size_t>(v)]);
  }
  return out;
}

double median_amplify(std::vector<double> estimates) {
  if (estimates.empty() || estimates.size() % 2 == 0) {
    throw std::invalid_argument("median_amplify needs an odd, non-empty sample");
  }
  double sx = 0, sy = 0;
  for (double t : estimates) {
    sx += std::cos(t);
    sy += std::sin(t);
  }
  const double center = std::atan2(sy, sx);
  for (double& t : estimates) t = center + wrap_angle(t - center);
  std::nth_element(estimates.begin(), estimates.begin() + estimates.size() / 2, estimates.end());
  return wrap_angle(estimates[estimates.size() / 2]);
}

}  // namespace hamlearn
