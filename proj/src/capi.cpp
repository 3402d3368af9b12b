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

#include "hamlearn/hamlearn.h"

#include <cstdlib>
#include <cstring>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "hamlearn/instances.hpp"
#include "hamlearn/io.hpp"
#include "hamlearn/studies.hpp"

namespace {

thread_local std::string g_last_error;

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

int set_error(int code, const std::string& message) {
  g_last_error = message;
  return code;
}

template <typename Fn>
int guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const nlohmann::json::exception& e) {
    return set_error(HL_ERR_PARSE, e.what());
  } catch (const std::invalid_argument& e) {
    return set_error(HL_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::domain_error& e) {
    return set_error(HL_ERR_DOMAIN, e.what());
  } catch (const std::runtime_error& e) {
    return set_error(HL_ERR_IO, e.what());
  } catch (const std::exception& e) {
    return set_error(HL_ERR_INTERNAL, e.what());
  }
}

}  // namespace

struct hl_hamiltonian {
  hamlearn::Hamiltonian value;
};

extern "C" {

const char* hl_version(void) { return "0.1.0"; }

const char* hl_last_error(void) { return g_last_error.c_str(); }

void hl_string_free(char* s) { std::free(s); }

int hl_hamiltonian_parse_json(const char* json_text, hl_hamiltonian** out) {
  if (!json_text || !out) return set_error(HL_ERR_NULL_POINTER, "null argument");
  return guarded([&] {
    *out = new hl_hamiltonian{hamlearn::hamiltonian_from_json_text(json_text)};
    return HL_OK;
  });
}

int hl_hamiltonian_to_json(const hl_hamiltonian* h, char** json_out) {
  if (!h || !json_out) return set_error(HL_ERR_NULL_POINTER, "null argument");
  return guarded([&] {
    *json_out = dup_string(hamlearn::hamiltonian_to_json_text(h->value));
    return HL_OK;
  });
}

void hl_hamiltonian_free(hl_hamiltonian* h) { delete h; }

int hl_hamiltonian_generate(const char* kind, int n_qubits, uint64_t seed, double coeff_lo,
                            double coeff_hi, hl_hamiltonian** out) {
  if (!kind || !out) return set_error(HL_ERR_NULL_POINTER, "null argument");
  return guarded([&] {
    *out = new hl_hamiltonian{
        hamlearn::generate_instance(kind, n_qubits, seed, coeff_lo, coeff_hi)};
    return HL_OK;
  });
}

int hl_hamiltonian_stats(const hl_hamiltonian* h, int* locality_k, int* overlap_degree,
                         int* term_count) {
  if (!h) return set_error(HL_ERR_NULL_POINTER, "null argument");
  return guarded([&] {
    const hamlearn::HamiltonianStats s = h->value.validate();
    if (locality_k) *locality_k = s.locality_k;
    if (overlap_degree) *overlap_degree = s.overlap_degree;
    if (term_count) *term_count = s.term_count;
    return HL_OK;
  });
}

int hl_learn_run(const char* config_json, char** result_json_out) {
  if (!config_json || !result_json_out) return set_error(HL_ERR_NULL_POINTER, "null argument");
  return guarded([&] {
    const hamlearn::RunConfig config = hamlearn::run_config_from_json_text(config_json);
    const hamlearn::Hamiltonian truth = hamlearn::load_instance(config);

    hamlearn::SimulatedDevice::Options dev_opts;
    dev_opts.n_cap = config.n_cap;
    hamlearn::SimulatedDevice device(truth, config.noise, config.seed, dev_opts);

    hamlearn::LearnOptions opt;
    opt.backend = config.backend;
    opt.epsilon = config.epsilon;
    opt.delta = config.delta;
    opt.seed = config.seed;
    opt.rpe = config.rpe;
    opt.reshape = config.reshape;

    const hamlearn::LearnResult result = hamlearn::learn_all(device, truth, opt);
    nlohmann::json j = hamlearn::learn_result_to_json(result, truth);
    j["config_hash"] = hamlearn::config_hash(hamlearn::run_config_to_json(config));
    j["backend"] = hamlearn::backend_name(config.backend);
    *result_json_out = dup_string(j.dump(2));
    return HL_OK;
  });
}

int hl_study_run(const char* study, const char* config_json, char** report_json_out) {
  if (!study || !config_json || !report_json_out) {
    return set_error(HL_ERR_NULL_POINTER, "null argument");
  }
  return guarded([&] {
    const hamlearn::RunConfig config = hamlearn::run_config_from_json_text(config_json);
    const hamlearn::StudyReport report = hamlearn::run_study(study, config);
    nlohmann::json j = hamlearn::report_to_json(report);
    j["csv"] = hamlearn::report_csv(report);
    *report_json_out = dup_string(j.dump(2));
    return HL_OK;
  });
}

}  // extern "C"
