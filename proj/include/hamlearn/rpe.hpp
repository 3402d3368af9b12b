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

#ifndef HAMLEARN_RPE_HPP
#define HAMLEARN_RPE_HPP

#include <vector>

#include "hamlearn/device.hpp"
#include "hamlearn/rng.hpp"

namespace hamlearn {

/// Bernoulli source with success probability (1 + cos(l * theta)) / 2 or
/// (1 + sin(l * theta)) / 2, up to a bounded additive perturbation. Samples
/// must be independent across calls.
class PhaseOracle {
 public:
  virtual ~PhaseOracle() = default;
  virtual bool sample(long long multiple, Quadrature quad, Rng& rng) = 0;

  /// Number of successes over n independent samples; override when batching
  /// is cheaper than n single calls.
  virtual long long sample_many(long long multiple, Quadrature quad, int n, Rng& rng);
};

struct PhaseEstimate {
  double theta = 0.0;         // in [-pi, pi)
  double target_error = 0.0;
  double delta = 0.0;
  long long total_multiple = 0;  // sum of l over all samples; evolution-time proxy
  long long call_count = 0;      // individual samples drawn
};

/// Stage schedule: stages j = 1..J at multiples 2^(j-1) with
/// J = ceil(log2(pi / target_error)); per-stage shots
/// ceil(shots_base * (1 + shots_ramp * (J - j)) * ln(1/delta)/ln(1/delta_ref))
/// per quadrature. Earlier stages get more shots because a wrong branch
/// there costs a larger final error.
struct RpeOptions {
  int shots_base = 16;      // per-quadrature shots at the final stage
  double shots_ramp = 1.0;  // linear growth toward early stages
  double delta_ref = 0.05;  // delta at which shots_base applies unscaled
};

int rpe_stage_count(double target_error);
int rpe_stage_shots(int stage, int stage_count, double delta, const RpeOptions& opt);

/// Ladder estimate of theta, |theta| <= pi/2 guaranteed by the caller.
/// Succeeds with |theta_hat - theta| <= target_error w.p. >= 1 - delta while
/// every per-quadrature probability perturbation stays below 1/sqrt(8).
PhaseEstimate estimate_phase(PhaseOracle& oracle, double target_error, double delta, Rng& rng,
                             const RpeOptions& opt = {});

/// Circular-safe median of an odd number of angles known to lie within one
/// half-circle window. Throws on empty or even input.
double median_amplify(std::vector<double> estimates);

/// Several phases estimated in lockstep on a shared stage schedule; one call
/// per (stage, quadrature) serves every channel. This is how clusters of one
/// color share evolution schedules.
class BatchPhaseOracle {
 public:
  virtual ~BatchPhaseOracle() = default;
  virtual int channels() const = 0;
  virtual std::vector<long long> sample_many(long long multiple, Quadrature quad, int n) = 0;
};

std::vector<PhaseEstimate> estimate_phases_lockstep(BatchPhaseOracle& oracle, double target_error,
                                                    double delta, const RpeOptions& opt = {});

}  // namespace hamlearn

#endif  // HAMLEARN_RPE_HPP
