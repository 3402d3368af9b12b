/* Copyright 2026 The hamlearn Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface to the Hamiltonian-learning simulator. All functions return
 * HL_OK (0) on success or a negative error code; hl_last_error() describes
 * the most recent failure on the calling thread. Strings returned through
 * char** are heap-allocated and must be released with hl_string_free().
 */

#ifndef HAMLEARN_H
#define HAMLEARN_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#define HL_OK 0
#define HL_ERR_INVALID_ARGUMENT -1
#define HL_ERR_PARSE -2
#define HL_ERR_DOMAIN -3
#define HL_ERR_IO -4
#define HL_ERR_INTERNAL -5
#define HL_ERR_NULL_POINTER -6

typedef struct hl_hamiltonian hl_hamiltonian;

const char* hl_version(void);
const char* hl_last_error(void);
void hl_string_free(char* s);

/* Hamiltonian JSON schema:
 * {"n_qubits": N, "terms": [{"pauli": "XXIZ...", "coeff": 0.37}, ...]}
 * with one letter per qubit, qubit 0 leftmost. */
int hl_hamiltonian_parse_json(const char* json_text, hl_hamiltonian** out);
int hl_hamiltonian_to_json(const hl_hamiltonian* h, char** json_out);
void hl_hamiltonian_free(hl_hamiltonian* h);

/* kind: "heisenberg_chain" | "random_low_intersection" |
 * "random_low_intersection_k3". Coefficients uniform in [coeff_lo, coeff_hi]. */
int hl_hamiltonian_generate(const char* kind, int n_qubits, uint64_t seed, double coeff_lo,
                            double coeff_hi, hl_hamiltonian** out);

/* Recomputed structure stats; fails when a coefficient exceeds 1. */
int hl_hamiltonian_stats(const hl_hamiltonian* h, int* locality_k, int* overlap_degree,
                         int* term_count);

/* Runs the full learning pipeline described by the config JSON (instance
 * source, backend, epsilon, delta, noise, seed, rpe/reshape constants) and
 * returns a result manifest: per-term estimates with errors against the
 * configured truth, plus the evolution-time ledger. */
int hl_learn_run(const char* config_json, char** result_json_out);

/* study: "deviation" | "scaling" | "spam" | "tvbound". The report JSON
 * carries columns/rows (CSV-ready), metrics, pass flag and a config hash. */
int hl_study_run(const char* study, const char* config_json, char** report_json_out);

#ifdef __cplusplus
}
#endif

#endif /* HAMLEARN_H */
