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

#ifndef HAMLEARN_IO_HPP
#define HAMLEARN_IO_HPP

#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "hamlearn/device.hpp"
#include "hamlearn/hamiltonian.hpp"
#include "hamlearn/learner.hpp"

namespace hamlearn {

/// Wire schema: {"n_qubits": N, "terms": [{"pauli": "XXIZ...", "coeff": c}]}.
nlohmann::json hamiltonian_to_json(const Hamiltonian& h);
Hamiltonian hamiltonian_from_json(const nlohmann::json& j);

std::string hamiltonian_to_json_text(const Hamiltonian& h);
Hamiltonian hamiltonian_from_json_text(const std::string& text);

/// Run configuration shared by the learn entry point and the studies.
struct RunConfig {
  // Instance source: either an inline/loaded Hamiltonian or generator spec.
  std::string hamiltonian_file;      // path, or empty
  std::string generator_kind;        // used when no file/inline given
  int n_qubits = 6;
  double coeff_lo = -1.0;
  double coeff_hi = 1.0;

  Backend backend = Backend::qdrift;
  double epsilon = 0.05;
  double delta = 0.05;
  NoiseModel noise;
  std::uint64_t seed = 1;
  int n_cap = 14;
  RpeOptions rpe;
  ReshapeConstants reshape;

  // Study grids.
  std::vector<long long> r_grid = {8, 16, 32, 64, 128};
  std::vector<int> n_grid = {4, 6, 8, 10};
  std::vector<double> epsilon_grid = {0.1, 0.05, 0.025, 0.0125};
  std::vector<double> eta_grid = {0.0, 0.1, 0.25};
  double study_t = 1.0;
  int n_sequences = 200;
  int n_runs = 20;
  long long fixed_r = 32;

  // The Hamiltonian may instead be embedded in the config JSON.
  std::shared_ptr<Hamiltonian> inline_hamiltonian;
};

RunConfig run_config_from_json(const nlohmann::json& j);
RunConfig run_config_from_json_text(const std::string& text);
nlohmann::json run_config_to_json(const RunConfig& c);

/// Materializes the configured instance (file > inline > generator).
Hamiltonian load_instance(const RunConfig& c);

/// FNV-1a over the canonical config serialization; every report carries it.
std::string config_hash(const nlohmann::json& j);

nlohmann::json learn_result_to_json(const LearnResult& result, const Hamiltonian& truth);

}  // namespace hamlearn

#endif  // HAMLEARN_IO_HPP
