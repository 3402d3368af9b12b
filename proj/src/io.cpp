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

#include "hamlearn/io.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "hamlearn/instances.hpp"

namespace hamlearn {

using nlohmann::json;

json hamiltonian_to_json(const Hamiltonian& h) {
  json terms = json::array();
  for (const Term& t : h.terms()) {
    terms.push_back({{"pauli", t.op.text()}, {"coeff", t.coeff}});
  }
  return json{{"n_qubits", h.n_qubits()}, {"terms", std::move(terms)}};
}

Hamiltonian hamiltonian_from_json(const json& j) {
  if (!j.contains("n_qubits") || !j.contains("terms")) {
    throw std::invalid_argument("hamiltonian JSON needs n_qubits and terms");
  }
  const int n = j.at("n_qubits").get<int>();
  std::vector<Term> terms;
  for (const auto& tj : j.at("terms")) {
    const std::string text = tj.at("pauli").get<std::string>();
    if (static_cast<int>(text.size()) != n) {
      throw std::invalid_argument("pauli text length does not match n_qubits");
    }
    terms.push_back({PauliString::from_text(text), tj.at("coeff").get<double>()});
  }
  return Hamiltonian(n, std::move(terms));
}

std::string hamiltonian_to_json_text(const Hamiltonian& h) { return hamiltonian_to_json(h).dump(2); }

Hamiltonian hamiltonian_from_json_text(const std::string& text) {
  return hamiltonian_from_json(json::parse(text));
}

namespace {

template <typename T>
void maybe(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

RunConfig run_config_from_json(const json& j) {
  RunConfig c;
  if (j.contains("hamiltonian")) {
    const json& hj = j.at("hamiltonian");
    if (hj.is_string()) {
      c.hamiltonian_file = hj.get<std::string>();
    } else if (hj.contains("file")) {
      c.hamiltonian_file = hj.at("file").get<std::string>();
    } else if (hj.contains("terms")) {
      c.inline_hamiltonian = std::make_shared<Hamiltonian>(hamiltonian_from_json(hj));
    } else if (hj.contains("generator")) {
      const json& g = hj.at("generator");
      c.generator_kind = g.at("kind").get<std::string>();
      maybe(g, "n_qubits", c.n_qubits);
      if (g.contains("coeff_range")) {
        c.coeff_lo = g.at("coeff_range").at(0).get<double>();
        c.coeff_hi = g.at("coeff_range").at(1).get<double>();
      }
    }
  }
  if (j.contains("generator")) {
    const json& g = j.at("generator");
    c.generator_kind = g.at("kind").get<std::string>();
    maybe(g, "n_qubits", c.n_qubits);
    if (g.contains("coeff_range")) {
      c.coeff_lo = g.at("coeff_range").at(0).get<double>();
      c.coeff_hi = g.at("coeff_range").at(1).get<double>();
    }
  }
  if (j.contains("backend")) c.backend = backend_from_name(j.at("backend").get<std::string>());
  maybe(j, "epsilon", c.epsilon);
  maybe(j, "delta", c.delta);
  maybe(j, "seed", c.seed);
  maybe(j, "n_cap", c.n_cap);
  maybe(j, "n_qubits", c.n_qubits);
  if (j.contains("noise")) {
    maybe(j.at("noise"), "eta_prep", c.noise.eta_prep);
    maybe(j.at("noise"), "eta_meas", c.noise.eta_meas);
  }
  if (j.contains("rpe")) {
    maybe(j.at("rpe"), "shots_base", c.rpe.shots_base);
    maybe(j.at("rpe"), "shots_ramp", c.rpe.shots_ramp);
    maybe(j.at("rpe"), "delta_ref", c.rpe.delta_ref);
  }
  if (j.contains("reshape")) {
    maybe(j.at("reshape"), "deviation_budget", c.reshape.deviation_budget);
    maybe(j.at("reshape"), "qdrift_rate", c.reshape.qdrift_rate);
    maybe(j.at("reshape"), "trotter_rate", c.reshape.trotter_rate);
  }
  if (j.contains("study")) {
    const json& s = j.at("study");
    maybe(s, "r_grid", c.r_grid);
    maybe(s, "n_grid", c.n_grid);
    maybe(s, "epsilon_grid", c.epsilon_grid);
    maybe(s, "eta_grid", c.eta_grid);
    maybe(s, "t", c.study_t);
    maybe(s, "n_sequences", c.n_sequences);
    maybe(s, "runs", c.n_runs);
    maybe(s, "fixed_r", c.fixed_r);
  }
  if (c.noise.eta_prep < 0 || c.noise.eta_prep >= 0.5 || c.noise.eta_meas < 0 ||
      c.noise.eta_meas >= 0.5) {
    throw std::invalid_argument("noise probabilities must lie in [0, 0.5)");
  }
  if (!(c.epsilon > 0 && c.epsilon < 1 && c.delta > 0 && c.delta < 1)) {
    throw std::invalid_argument("epsilon and delta must lie in (0, 1)");
  }
  return c;
}

RunConfig run_config_from_json_text(const std::string& text) {
  return run_config_from_json(json::parse(text));
}

json run_config_to_json(const RunConfig& c) {
  json j;
  if (!c.hamiltonian_file.empty()) {
    j["hamiltonian"] = {{"file", c.hamiltonian_file}};
  } else if (c.inline_hamiltonian) {
    j["hamiltonian"] = hamiltonian_to_json(*c.inline_hamiltonian);
  } else if (!c.generator_kind.empty()) {
    j["generator"] = {{"kind", c.generator_kind},
                      {"n_qubits", c.n_qubits},
                      {"coeff_range", {c.coeff_lo, c.coeff_hi}}};
  }
  j["backend"] = backend_name(c.backend);
  j["epsilon"] = c.epsilon;
  j["delta"] = c.delta;
  j["seed"] = c.seed;
  j["n_cap"] = c.n_cap;
  j["noise"] = {{"eta_prep", c.noise.eta_prep}, {"eta_meas", c.noise.eta_meas}};
  j["rpe"] = {{"shots_base", c.rpe.shots_base},
              {"shots_ramp", c.rpe.shots_ramp},
              {"delta_ref", c.rpe.delta_ref}};
  j["reshape"] = {{"deviation_budget", c.reshape.deviation_budget},
                  {"qdrift_rate", c.reshape.qdrift_rate},
                  {"trotter_rate", c.reshape.trotter_rate}};
  j["study"] = {{"r_grid", c.r_grid},       {"n_grid", c.n_grid},
                {"epsilon_grid", c.epsilon_grid}, {"eta_grid", c.eta_grid},
                {"t", c.study_t},           {"n_sequences", c.n_sequences},
                {"runs", c.n_runs},         {"fixed_r", c.fixed_r}};
  return j;
}

Hamiltonian load_instance(const RunConfig& c) {
  if (!c.hamiltonian_file.empty()) {
    std::ifstream in(c.hamiltonian_file);
    if (!in) throw std::runtime_error("cannot open " + c.hamiltonian_file);
    json j;
    in >> j;
    return hamiltonian_from_json(j);
  }
  if (c.inline_hamiltonian) return *c.inline_hamiltonian;
  if (!c.generator_kind.empty()) {
    return generate_instance(c.generator_kind, c.n_qubits, c.seed, c.coeff_lo, c.coeff_hi);
  }
  throw std::invalid_argument("config provides no Hamiltonian source");
}

std::string config_hash(const json& j) {
  const std::string s = j.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

json learn_result_to_json(const LearnResult& result, const Hamiltonian& truth) {
  json estimates = json::array();
  double max_err = 0;
  for (std::size_t a = 0; a < result.estimates.size(); ++a) {
    const CoefficientEstimate& e = result.estimates[a];
    const double err = std::abs(e.lambda_hat - truth.terms()[a].coeff);
    max_err = std::max(max_err, err);
    json prov = json::array();
    for (const Provenance& p : e.provenance) {
      prov.push_back({{"color", p.color}, {"cluster", p.cluster_index}, {"basis", p.basis_letters}});
    }
    estimates.push_back({{"pauli", e.op.text()},
                         {"lambda_hat", e.lambda_hat},
                         {"lambda_true", truth.terms()[a].coeff},
                         {"abs_error", err},
                         {"values", e.values},
                         {"provenance", std::move(prov)}});
  }
  return json{{"estimates", std::move(estimates)},
              {"max_abs_error", max_err},
              {"ledger",
               {{"total_evolution_time", result.ledger.total_evolution_time},
                {"experiment_count", result.ledger.experiment_count},
                {"pauli_layer_count", result.ledger.pauli_layer_count},
                {"rpe_time_accounting", result.rpe_time_accounting},
                {"batch_count", result.batch_count}}}};
}

}  // namespace hamlearn
