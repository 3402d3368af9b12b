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

#ifndef HAMLEARN_DEVICE_HPP
#define HAMLEARN_DEVICE_HPP

#include <cstdint>
#include <list>
#include <memory>
#include <vector>

#include "hamlearn/evolver.hpp"
#include "hamlearn/reshape.hpp"

namespace hamlearn {

enum class Backend { qdrift, trotter };
enum class Quadrature { cosine, sine };

Backend backend_from_name(const std::string& name);
const char* backend_name(Backend b);

/// Depolarizing state-preparation and measurement error strengths.
/// The phase-estimation stack stays correct while the combined additive
/// probability perturbation remains below 1/sqrt(8).
struct NoiseModel {
  double eta_prep = 0.0;
  double eta_meas = 0.0;

  void check() const;
};

/// Running totals across experiments. Evolution time counts only the
/// hidden-Hamiltonian segments; Pauli layers are free and tallied separately
/// (adjacent layers merged, so one shot with r segments counts r + 1).
struct ExperimentLedger {
  double total_evolution_time = 0.0;
  long long experiment_count = 0;
  long long pauli_layer_count = 0;

  void merge(const ExperimentLedger& other);
};

/// Product of single-qubit gates; the only state preparation the protocol
/// needs. Gates touch distinct qubits, so application order is irrelevant.
struct PrepCircuit {
  std::vector<std::pair<int, Eigen::Matrix2cd>> gates;
};

/// One cluster's role in a shot: prepare `prep` on the cluster, and after
/// evolution undo `unprep` and read the cluster's bits (success = all zero).
struct ClusterTask {
  int cluster_index = 0;  // position within the plan's basis list
  PrepCircuit prep;
  PrepCircuit unprep;
  QubitSet cluster = 0;
};

/// One simulated shot configuration: reshaped evolution of the hidden
/// Hamiltonian for time t in r segments, serving every listed task at once.
struct ExperimentPlan {
  Backend backend = Backend::qdrift;
  int color = 0;
  std::vector<ClusterBasis> bases;  // one per cluster of the color, class order
  std::vector<ClusterTask> tasks;
  double t = 0.0;
  long long r = 1;
  std::uint64_t stream = 0;  // RNG stream id; a fresh id per plan keeps shots independent
};

/// What the learner sees: an opaque experiment executor. A hardware-backed
/// implementation would satisfy the same contract.
class Device {
 public:
  virtual ~Device() = default;

  /// One shot; returns the measured bits per task (cluster qubits ascending).
  virtual std::vector<std::vector<std::uint8_t>> run_shot(const ExperimentPlan& plan) = 0;

  /// n independent shots; returns per-task counts of all-zero outcomes.
  virtual std::vector<long long> run_shots(const ExperimentPlan& plan, long long n_shots) = 0;

  virtual const ExperimentLedger& ledger() const = 0;
  virtual int n_qubits() const = 0;
};

/// How the device realizes randomized-reshaping shots. Fresh Pauli
/// sequences per shot make shots i.i.d. with outcome law equal to the
/// sequence-averaged channel, so the device may either simulate every
/// segment (per_shot) or sample outcomes from the exactly computed averaged
/// state (exact_average). The two are identical in distribution; the exact
/// path costs O(log r) instead of O(r) per configuration and falls back to
/// per_shot when its block decomposition would be too large.
enum class QdriftMode { exact_average, per_shot };

/// Dense state-vector implementation around a hidden Hamiltonian.
class SimulatedDevice final : public Device {
 public:
  struct Options {
    int dense_cap_qubits = 11;
    int n_cap = 14;
    std::size_t ensemble_cap = std::size_t(1) << 16;
    QdriftMode qdrift_mode = QdriftMode::exact_average;
    double exact_path_flop_cap = 4e9;  // per plan configuration
  };

  SimulatedDevice(Hamiltonian truth, NoiseModel noise, std::uint64_t seed);
  SimulatedDevice(Hamiltonian truth, NoiseModel noise, std::uint64_t seed, Options options);

  std::vector<std::vector<std::uint8_t>> run_shot(const ExperimentPlan& plan) override;
  std::vector<long long> run_shots(const ExperimentPlan& plan, long long n_shots) override;
  const ExperimentLedger& ledger() const override { return ledger_; }
  int n_qubits() const override { return evolver_.n_qubits(); }

  const ClusterColoring& coloring() const { return coloring_; }
  const Evolver& evolver() const { return evolver_; }
  const NoiseModel& noise() const { return noise_; }

 private:
  Eigen::MatrixXcd simulate_columns(const ExperimentPlan& plan, long long n_shots, Rng& rng);
  const Eigen::MatrixXcd& powered_trotter_operator(const ExperimentPlan& plan);
  void charge_ledger(const ExperimentPlan& plan, long long n_shots);
  bool exact_average_viable(const ExperimentPlan& plan) const;
  /// Transfer matrix of one averaged segment restricted to the strings
  /// supported on the color's cluster qubits (identity elsewhere); real,
  /// 4^nc x 4^nc, independent of the basis assignment. Cached per (color,
  /// tau).
  const Eigen::MatrixXd& cluster_transfer(const ExperimentPlan& plan, double tau);
  /// Joint outcome distribution over the color's cluster qubits (ascending
  /// order) for one shot under the sequence-averaged evolution, after the
  /// tasks' unprep circuits; exact up to roundoff.
  Eigen::VectorXd averaged_outcome_distribution(const ExperimentPlan& plan,
                                                std::vector<int>& cluster_qubits);

  Evolver evolver_;
  NoiseModel noise_;
  std::uint64_t seed_;
  Options options_;
  ClusterColoring coloring_;
  std::vector<QubitColoring> qubit_colorings_;  // per color
  ExperimentLedger ledger_;

  struct PoweredEntry {
    std::string key;
    Eigen::MatrixXcd op;
  };
  std::list<PoweredEntry> powered_cache_;
  static constexpr std::size_t kPoweredCacheSize = 6;

  struct TransferEntry {
    std::string key;
    Eigen::MatrixXd transfer;
  };
  std::list<TransferEntry> transfer_cache_;
  static constexpr std::size_t kTransferCacheSize = 16;
};

/// Spec-level single-state operations (also used by the device fallbacks).

/// r segments; each draws a fresh twirl Pauli, conjugates the exact
/// segment evolution by it. Ledger (optional) is charged t only.
StateVector qdrift_evolve(const StateVector& s, const Evolver& ev, const TwirlDistribution& d,
                          double t, long long r, Rng& rng, ExperimentLedger* ledger = nullptr);

/// r repetitions of the palindromic second-order schedule at tau = t / r.
StateVector trotter_evolve(const StateVector& s, const Evolver& ev, const TrotterEnsemble& e,
                           double t, long long r, ExperimentLedger* ledger = nullptr);

/// Undoes the prep circuit on the cluster, samples the cluster bits from the
/// exact joint distribution, then applies measurement depolarization: with
/// probability eta_meas the outcome is replaced by uniform bits. The caller's
/// state is not modified.
std::vector<std::uint8_t> measure_cluster(const StateVector& s, QubitSet cluster,
                                          const PrepCircuit& prep, const NoiseModel& noise,
                                          Rng& rng);

}  // namespace hamlearn

#endif  // HAMLEARN_DEVICE_HPP
