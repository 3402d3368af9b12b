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

#ifndef HAMLEARN_LEARNER_HPP
#define HAMLEARN_LEARNER_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "hamlearn/device.hpp"
#include "hamlearn/rpe.hpp"

namespace hamlearn {

/// Spanning tree of the bit-pattern hypercube rooted at 0: the parent of a
/// pattern clears its lowest set bit, so the path from the root to any
/// pattern has length equal to its popcount.
struct SpTreeEdge {
  std::uint32_t parent;
  std::uint32_t child;
};

struct SpTree {
  int n_bits = 0;
  std::vector<SpTreeEdge> edges;  // 2^n_bits - 1 edges, children ascending
};

SpTree build_spt(int n_bits);

/// Prep circuits for the equal superposition of two basis-labelled product
/// states at Hamming distance 1: u prepares (|xi> + |xi'>)/sqrt(2), v the
/// variant with a relative i on |xi'>.
struct PrepPair {
  PrepCircuit u;
  PrepCircuit v;
};

PrepPair build_prep_pair(QubitSet cluster, const ClusterBasis& basis, std::uint32_t xi,
                         std::uint32_t xi_prime);

/// Root-gauged eigenvalue table for one (cluster, basis) pass.
struct SpectrumTable {
  int n_bits = 0;
  std::vector<double> eigenvalue;   // size 2^n_bits, eigenvalue[0] = 0
  std::vector<double> edge_diff;    // parent-minus-child, aligned with the tree
};

/// Chains the per-edge differences (eigenvalue[parent] - eigenvalue[child])
/// from the root outward. Throws if a difference is missing (NaN).
SpectrumTable accumulate_spectrum(const SpTree& tree, const std::vector<double>& parent_minus_child);

/// Inverse transform from eigenvalues to coefficients,
/// lambda_b = 2^{-n} sum_xi (-1)^{xi . b} eigenvalue_xi.
/// Entry 0 (the unobservable gauge) is forced to zero and never reported.
std::vector<double> recover_coefficients(const SpectrumTable& table);

struct Provenance {
  int color = 0;
  int cluster_index = 0;        // index into the coloring's cluster list
  std::string basis_letters;
};

struct CoefficientEstimate {
  PauliString op;
  double lambda_hat = 0.0;
  double epsilon = 0.0;
  double delta = 0.0;
  std::vector<double> values;          // one per pass that produced this term
  std::vector<Provenance> provenance;  // aligned with values

  explicit CoefficientEstimate(PauliString o) : op(std::move(o)) {}
};

/// Segment-count rules backing the two reshaping backends:
/// qdrift r = ceil(qdrift_rate * t^2 / deviation_budget),
/// trotter r = ceil(trotter_rate * t^1.5 / sqrt(deviation_budget)).
/// Rates are calibrated against the deviation study on chain instances
/// (measured ~1.7 and ~0.032 at t = 1) with safety factors, and kept
/// configurable.
struct ReshapeConstants {
  double deviation_budget = 0.1;
  double qdrift_rate = 3.0;
  double trotter_rate = 0.25;
};

long long segment_count(Backend backend, double t, const ReshapeConstants& c);

struct LearnOptions {
  Backend backend = Backend::qdrift;
  double epsilon = 0.05;
  double delta = 0.05;
  std::uint64_t seed = 0;  // learner-side draws (idle bases); device holds its own seed
  RpeOptions rpe;
  ReshapeConstants reshape;
};

struct LearnResult {
  std::vector<CoefficientEstimate> estimates;  // one per structure term, same order
  ExperimentLedger ledger;                     // device totals
  double rpe_time_accounting = 0.0;            // sum over ladders of tau' * (sum of multiples)
  long long batch_count = 0;
};

/// Runs the full color-by-color schedule against the device: per color,
/// per-cluster task sets {(basis, tree edge)} drain in parallel batches; one
/// batch is one shared phase-estimation ladder serving every cluster with a
/// pending task (idle clusters get a throwaway basis and are not measured).
/// Per-edge targets are epsilon/k and delta/k. Every structure term receives
/// at least one estimate; duplicates keep the first pass's value.
LearnResult learn_all(Device& device, const Hamiltonian& structure, const LearnOptions& options);

/// Single-edge convenience path used by tests: one cluster, one basis, one
/// tree edge, same machinery as a learn_all batch of size one.
double estimate_edge_difference(Device& device, const Hamiltonian& structure, QubitSet cluster,
                                const ClusterBasis& basis, std::uint32_t xi, std::uint32_t xi_prime,
                                double eps_edge, double delta_edge, const LearnOptions& options);

}  // namespace hamlearn

#endif  // HAMLEARN_LEARNER_HPP
