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

#ifndef HAMLEARN_STUDIES_HPP
#define HAMLEARN_STUDIES_HPP

#include <map>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "hamlearn/io.hpp"

namespace hamlearn {

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double stderr_slope = 0.0;
};

/// Least squares of log(y) against log(x); requires >= 4 positive points.
SlopeFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

struct StudyReport {
  std::string study;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::map<std::string, double> metrics;
  bool pass = false;
  std::string config_hash;
  std::string notes;
};

/// Reshaping error vs segment count at fixed (instance, cluster, time):
/// sweeps the r grid, fits the log-log slope, then sweeps system size at
/// fixed r to check the constant does not grow with N. The qdrift backend
/// averages over sampled Pauli sequences (count scaled with r to keep the
/// standard error below the shrinking signal); trotter is deterministic.
StudyReport deviation_study(const RunConfig& config);

/// Full learning runs across the epsilon grid; fits the slope of
/// log(total evolution time) against log(1/epsilon) and checks the
/// experiment count grows sub-polynomially.
StudyReport scaling_study(const RunConfig& config);

/// Learning success rate across measurement-depolarization strengths.
StudyReport spam_robustness_study(const RunConfig& config);

/// Distinguishing-experiment total-variation bound: exact two-level
/// computation checked against (1 - eta) * min(2 eps t, 1) over a grid,
/// with the evolution-time lower-bound reference value per row.
StudyReport tv_bound_check(const RunConfig& config);

StudyReport run_study(const std::string& name, const RunConfig& config);

std::string report_csv(const StudyReport& report);
nlohmann::json report_to_json(const StudyReport& report);

/// Exact reshaped-average observable for small systems: evolves the density
/// matrix through r segments of (twirl average) o (unitary conjugation) and
/// returns the all-zero probability after undoing the prep. Cross-checks the
/// Monte-Carlo path; cost grows as a dense 4^N transfer per segment.
double exact_twirled_observable(const Hamiltonian& h, const TwirlDistribution& d,
                                const PrepCircuit& prep, QubitSet cluster, double t, long long r);

}  // namespace hamlearn

#endif  // HAMLEARN_STUDIES_HPP
