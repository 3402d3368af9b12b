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

#include "hamlearn/device.hpp"

#include <bit>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace hamlearn {

Backend backend_from_name(const std::string& name) {
  if (name == "qdrift") return Backend::qdrift;
  if (name == "trotter") return Backend::trotter;
  throw std::invalid_argument("unknown backend: " + name);
}

const char* backend_name(Backend b) { return b == Backend::qdrift ? "qdrift" : "trotter"; }

void NoiseModel::check() const {
  if (eta_prep < 0 || eta_prep > 1 || eta_meas < 0 || eta_meas > 1) {
    throw std::invalid_argument("depolarization probabilities must lie in [0, 1]");
  }
}

void ExperimentLedger::merge(const ExperimentLedger& other) {
  total_evolution_time += other.total_evolution_time;
  experiment_count += other.experiment_count;
  pauli_layer_count += other.pauli_layer_count;
}

namespace {

constexpr std::complex<double> kIPowers[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};

// Exact Pauli action on one column: |b> -> i^{#Y} (-1)^{popcount(b&z)} |b^x>.
void apply_mask_col(Eigen::MatrixXcd& cols, Eigen::Index c, std::uint64_t x, std::uint64_t z) {
  const auto dim = static_cast<std::uint64_t>(cols.rows());
  const std::complex<double> base = kIPowers[std::popcount(x & z) & 3];
  if (x == 0) {
    for (std::uint64_t b = 0; b < dim; ++b) {
      cols(static_cast<std::int64_t>(b), c) *= (std::popcount(b & z) & 1) ? -base : base;
    }
    return;
  }
  for (std::uint64_t b = 0; b < dim; ++b) {
    const std::uint64_t t = b ^ x;
    if (t < b) continue;
    const std::complex<double> pb = (std::popcount(b & z) & 1) ? -base : base;
    const std::complex<double> pt = (std::popcount(t & z) & 1) ? -base : base;
    const auto vb = cols(static_cast<std::int64_t>(b), c);
    const auto vt = cols(static_cast<std::int64_t>(t), c);
    cols(static_cast<std::int64_t>(t), c) = pb * vb;
    cols(static_cast<std::int64_t>(b), c) = pt * vt;
  }
}

// Twirl sampling masks precomputed so one shot segment needs three RNG words.
struct TwirlMasks {
  std::uint64_t free_mask = 0;
  std::uint64_t letter_x = 0;  // cluster qubits whose basis letter has an X part
  std::uint64_t letter_z = 0;

  static TwirlMasks from(const TwirlDistribution& d) {
    TwirlMasks m;
    m.free_mask = d.free_qubits;
    for (const ClusterBasis& b : d.cluster_bases) {
      for (int q : qubits_of(b.cluster)) {
        const Letter l = b.letter_at(q);
        if (l == Letter::X || l == Letter::Y) m.letter_x |= 1ULL << q;
        if (l == Letter::Z || l == Letter::Y) m.letter_z |= 1ULL << q;
      }
    }
    return m;
  }

  // Free qubits take two independent uniform bits (one of the four letters);
  // each cluster qubit flips its basis letter on with one bit.
  std::pair<std::uint64_t, std::uint64_t> draw(Rng& rng) const {
    const std::uint64_t u = rng(), v = rng(), w = rng();
    return {(u & free_mask) | (w & letter_x), (v & free_mask) | (w & letter_z)};
  }
};

Eigen::MatrixXcd matrix_power(Eigen::MatrixXcd base, long long e) {
  Eigen::MatrixXcd result = Eigen::MatrixXcd::Identity(base.rows(), base.cols());
  while (e > 0) {
    if (e & 1) result = (base * result).eval();
    e >>= 1;
    if (e) base = (base * base).eval();
  }
  return result;
}

void apply_circuit(Eigen::Ref<Eigen::MatrixXcd> cols, int n_qubits, const PrepCircuit& circuit,
                   bool inverse) {
  for (const auto& [q, u] : circuit.gates) {
    apply_single_qubit_gate(cols, n_qubits, q, inverse ? Eigen::Matrix2cd(u.adjoint()) : u);
  }
}

std::vector<std::uint8_t> extract_bits(std::uint64_t index, QubitSet cluster) {
  std::vector<std::uint8_t> bits;
  for (int q : qubits_of(cluster)) bits.push_back(static_cast<std::uint8_t>((index >> q) & 1));
  return bits;
}

void validate_plan(const ExperimentPlan& plan, const ClusterColoring& coloring, int n_qubits,
                   std::size_t ensemble_cap) {
  (void)ensemble_cap;
  if (plan.t < 0) throw std::invalid_argument("negative evolution time");
  if (plan.r < 1) throw std::invalid_argument("segment count must be at least 1");
  if (plan.color < 0 || plan.color >= coloring.n_colors) {
    throw std::invalid_argument("plan color out of range");
  }
  const auto& cls = coloring.classes[static_cast<std::size_t>(plan.color)];
  if (plan.bases.size() != cls.size()) {
    throw std::invalid_argument("plan needs one basis per cluster of its color");
  }
  for (std::size_t i = 0; i < cls.size(); ++i) {
    if (plan.bases[i].cluster != coloring.clusters[static_cast<std::size_t>(cls[i])]) {
      throw std::invalid_argument("plan basis clusters out of order");
    }
  }
  for (const ClusterTask& task : plan.tasks) {
    if (task.cluster_index < 0 || task.cluster_index >= static_cast<int>(plan.bases.size())) {
      throw std::invalid_argument("task cluster index out of range");
    }
    if (task.cluster != plan.bases[static_cast<std::size_t>(task.cluster_index)].cluster) {
      throw std::invalid_argument("task cluster does not match its basis");
    }
  }
  if (n_qubits > 64) throw std::invalid_argument("unsupported system size");
}

}  // namespace

SimulatedDevice::SimulatedDevice(Hamiltonian truth, NoiseModel noise, std::uint64_t seed)
    : SimulatedDevice(std::move(truth), noise, seed, Options{}) {}

SimulatedDevice::SimulatedDevice(Hamiltonian truth, NoiseModel noise, std::uint64_t seed,
                                 Options options)
    : evolver_(truth, options.dense_cap_qubits, options.n_cap),
      noise_(noise),
      seed_(seed),
      options_(options),
      coloring_(build_cluster_graph_and_color(build_clusters(truth))) {
  noise_.check();
  qubit_colorings_.reserve(static_cast<std::size_t>(coloring_.n_colors));
  for (int c = 0; c < coloring_.n_colors; ++c) {
    qubit_colorings_.push_back(build_qubit_graph_and_color(evolver_.hamiltonian(), coloring_, c));
  }
}

const Eigen::MatrixXcd& SimulatedDevice::powered_trotter_operator(const ExperimentPlan& plan) {
  std::ostringstream key;
  key << plan.color << '|' << plan.t << '|' << plan.r;
  for (const ClusterBasis& b : plan.bases) {
    for (Letter l : b.letters) key << letter_char(l);
    key << ',';
  }
  const std::string k = key.str();
  for (auto it = powered_cache_.begin(); it != powered_cache_.end(); ++it) {
    if (it->key == k) {
      powered_cache_.splice(powered_cache_.begin(), powered_cache_, it);
      return powered_cache_.front().op;
    }
  }

  const TrotterEnsemble ensemble =
      build_trotter_ensemble(evolver_.hamiltonian(), coloring_,
                             qubit_colorings_[static_cast<std::size_t>(plan.color)], plan.bases,
                             options_.ensemble_cap);
  const double tau = plan.t / static_cast<double>(plan.r);
  const auto schedule = trotter_step_schedule(ensemble, tau);
  const Eigen::MatrixXcd& seg = evolver_.propagator(schedule.front().second);
  Eigen::MatrixXcd step = Eigen::MatrixXcd::Identity(seg.rows(), seg.cols());
  for (const auto& [word, dur] : schedule) {
    (void)dur;  // uniform by construction
    step = (conjugate_dense_by_pauli(seg, word) * step).eval();
  }
  Eigen::MatrixXcd total = matrix_power(std::move(step), plan.r);
  powered_cache_.push_front({k, std::move(total)});
  if (powered_cache_.size() > kPoweredCacheSize) powered_cache_.pop_back();
  return powered_cache_.front().op;
}

Eigen::MatrixXcd SimulatedDevice::simulate_columns(const ExperimentPlan& plan, long long n_shots,
                                                   Rng& rng) {
  validate_plan(plan, coloring_, n_qubits(), options_.ensemble_cap);
  const int n = n_qubits();
  const std::int64_t dim = 1LL << n;

  // Shared ideal preparation: per-task circuits on their clusters, residual
  // qubits in |0>.
  Eigen::VectorXcd base = Eigen::VectorXcd::Zero(dim);
  base[0] = 1.0;
  {
    Eigen::Map<Eigen::MatrixXcd> m(base.data(), dim, 1);
    for (const ClusterTask& task : plan.tasks) {
      apply_circuit(Eigen::Ref<Eigen::MatrixXcd>(m), n, task.prep, false);
    }
  }

  Eigen::MatrixXcd cols = base.replicate(1, static_cast<Eigen::Index>(n_shots));
  if (noise_.eta_prep > 0) {
    for (Eigen::Index c = 0; c < cols.cols(); ++c) {
      if (uniform01(rng) < noise_.eta_prep) {
        cols.col(c).setZero();
        cols(static_cast<std::int64_t>(rng() & static_cast<std::uint64_t>(dim - 1)), c) = 1.0;
      }
    }
  }

  if (plan.t > 0) {
    if (plan.backend == Backend::qdrift) {
      const TwirlDistribution d = make_twirl(n, plan.color, plan.bases);
      const TwirlMasks masks = TwirlMasks::from(d);
      const double tau = plan.t / static_cast<double>(plan.r);
      Eigen::MatrixXcd next(cols.rows(), cols.cols());
      const bool dense = evolver_.has_dense_path();
      const Eigen::MatrixXcd* prop = dense ? &evolver_.propagator(tau) : nullptr;
      std::vector<std::pair<std::uint64_t, std::uint64_t>> shot_masks(
          static_cast<std::size_t>(n_shots));
      for (long long seg = 0; seg < plan.r; ++seg) {
        for (auto& sm : shot_masks) sm = masks.draw(rng);
        for (Eigen::Index c = 0; c < cols.cols(); ++c) {
          apply_mask_col(cols, c, shot_masks[static_cast<std::size_t>(c)].first,
                         shot_masks[static_cast<std::size_t>(c)].second);
        }
        if (dense) {
          next.noalias() = (*prop) * cols;
          cols.swap(next);
        } else {
          evolver_.evolve(cols, tau);
        }
        for (Eigen::Index c = 0; c < cols.cols(); ++c) {
          apply_mask_col(cols, c, shot_masks[static_cast<std::size_t>(c)].first,
                         shot_masks[static_cast<std::size_t>(c)].second);
        }
      }
    } else {
      if (evolver_.has_dense_path()) {
        const Eigen::MatrixXcd& total = powered_trotter_operator(plan);
        cols = (total * cols).eval();
      } else {
        const TrotterEnsemble ensemble = build_trotter_ensemble(
            evolver_.hamiltonian(), coloring_,
            qubit_colorings_[static_cast<std::size_t>(plan.color)], plan.bases,
            options_.ensemble_cap);
        const auto schedule = trotter_step_schedule(ensemble, plan.t / double(plan.r));
        for (long long rep = 0; rep < plan.r; ++rep) {
          for (const auto& [word, dur] : schedule) {
            apply_pauli(cols, word);
            evolver_.evolve(cols, dur);
            apply_pauli(cols, word);
          }
        }
      }
    }
  }

  for (const ClusterTask& task : plan.tasks) {
    apply_circuit(cols, n, task.unprep, true);
  }
  return cols;
}

bool SimulatedDevice::exact_average_viable(const ExperimentPlan& plan) const {
  if (options_.qdrift_mode != QdriftMode::exact_average) return false;
  if (plan.backend != Backend::qdrift) return false;
  if (!evolver_.has_dense_path()) return false;
  int nc = 0;
  for (const ClusterBasis& b : plan.bases) nc += std::popcount(b.cluster);
  const int nf = n_qubits() - nc;
  // 2^{nf + nc} blocks of dimension 2^{nc}; one pass over E^2 per entry.
  const double cost = std::pow(2.0, nf + 3 * nc) * std::pow(4.0, n_qubits()) * 10.0;
  return cost <= options_.exact_path_flop_cap;
}

namespace {

Eigen::MatrixXd real_matrix_power(Eigen::MatrixXd base, long long e) {
  Eigen::MatrixXd result = Eigen::MatrixXd::Identity(base.rows(), base.cols());
  while (e > 0) {
    if (e & 1) result = (base * result).eval();
    e >>= 1;
    if (e) base = (base * base).eval();
  }
  return result;
}

}  // namespace

namespace {

struct PauliCode {
  std::uint64_t x = 0;
  std::uint64_t z = 0;
  std::complex<double> unit{1.0, 0.0};  // i^{#Y}
};

// Pauli string over the listed qubits, letter index 2 bits per position.
PauliCode code_of(const std::vector<int>& qubits, std::uint64_t letters) {
  PauliCode c;
  int y_count = 0;
  for (std::size_t i = 0; i < qubits.size(); ++i) {
    const auto l = static_cast<Letter>((letters >> (2 * i)) & 3);
    const std::uint64_t bit = 1ULL << qubits[i];
    if (l == Letter::X || l == Letter::Y) c.x |= bit;
    if (l == Letter::Z || l == Letter::Y) c.z |= bit;
    y_count += l == Letter::Y;
  }
  constexpr std::complex<double> kI[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  c.unit = kI[y_count & 3];
  return c;
}

}  // namespace

const Eigen::MatrixXd& SimulatedDevice::cluster_transfer(const ExperimentPlan& plan, double tau) {
  std::ostringstream key;
  key.precision(17);
  key << plan.color << '|' << tau;
  const std::string k = key.str();
  for (auto it = transfer_cache_.begin(); it != transfer_cache_.end(); ++it) {
    if (it->key == k) {
      transfer_cache_.splice(transfer_cache_.begin(), transfer_cache_, it);
      return transfer_cache_.front().transfer;
    }
  }

  std::vector<int> cluster_qubits;
  for (const ClusterBasis& b : plan.bases) {
    for (int q : qubits_of(b.cluster)) cluster_qubits.push_back(q);
  }
  std::sort(cluster_qubits.begin(), cluster_qubits.end());
  const int nc = static_cast<int>(cluster_qubits.size());
  const std::size_t n_strings = std::size_t(1) << (2 * nc);
  const std::int64_t dim = 1LL << n_qubits();
  const Eigen::MatrixXcd& e = evolver_.propagator(tau);

  // T(a, b) = tr(sigma_a E sigma_b E^dag) / dim over strings supported on
  // the cluster qubits. For each b, one product M_b = E * Etilde_b^T gives
  // every a through a sign-weighted shifted diagonal:
  //   tr = sum_row phase_a(row) M_b(row, row ^ x_a).
  std::vector<PauliCode> codes(n_strings);
  for (std::size_t s = 0; s < n_strings; ++s) codes[s] = code_of(cluster_qubits, s);

  Eigen::MatrixXd transfer(n_strings, n_strings);
  Eigen::MatrixXcd etilde(dim, dim), m(dim, dim);
  for (std::size_t b = 0; b < n_strings; ++b) {
    const std::uint64_t xb = codes[b].x, zb = codes[b].z;
    for (std::int64_t col = 0; col < dim; ++col) {
      const auto shifted = static_cast<std::int64_t>(static_cast<std::uint64_t>(col) ^ xb);
      const double sign = (std::popcount(static_cast<std::uint64_t>(shifted) & zb) & 1) ? -1.0 : 1.0;
      etilde.col(col) = (codes[b].unit * sign) * e.col(shifted).conjugate();
    }
    m.noalias() = e * etilde.transpose();
    for (std::size_t a = 0; a < n_strings; ++a) {
      const std::uint64_t xa = codes[a].x, za = codes[a].z;
      std::complex<double> acc = 0;
      for (std::int64_t row = 0; row < dim; ++row) {
        const double sign = (std::popcount(static_cast<std::uint64_t>(row) & za) & 1) ? -1.0 : 1.0;
        acc += sign * m(row, static_cast<std::int64_t>(static_cast<std::uint64_t>(row) ^ xa));
      }
      transfer(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
          (codes[a].unit * acc).real() / static_cast<double>(dim);
    }
  }

  transfer_cache_.push_front({k, std::move(transfer)});
  if (transfer_cache_.size() > kTransferCacheSize) transfer_cache_.pop_back();
  return transfer_cache_.front().transfer;
}

Eigen::VectorXd SimulatedDevice::averaged_outcome_distribution(const ExperimentPlan& plan,
                                                               std::vector<int>& cluster_qubits) {
  cluster_qubits.clear();
  std::vector<Letter> gamma_by_pos;
  for (const ClusterBasis& b : plan.bases) {
    for (int q : qubits_of(b.cluster)) cluster_qubits.push_back(q);
  }
  std::sort(cluster_qubits.begin(), cluster_qubits.end());
  for (int q : cluster_qubits) {
    for (const ClusterBasis& b : plan.bases) {
      if (b.cluster & (1ULL << q)) gamma_by_pos.push_back(b.letter_at(q));
    }
  }
  const int nc = static_cast<int>(cluster_qubits.size());
  const std::size_t n_strings = std::size_t(1) << (2 * nc);
  const std::int64_t dim = 1LL << n_qubits();
  const std::int64_t cdim = 1LL << nc;

  // Ideal prepared pure state over the full register.
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(dim);
  psi[0] = 1.0;
  {
    Eigen::Map<Eigen::MatrixXcd> mp(psi.data(), dim, 1);
    for (const ClusterTask& task : plan.tasks) {
      apply_circuit(Eigen::Ref<Eigen::MatrixXcd>(mp), n_qubits(), task.prep, false);
    }
  }

  // Initial Pauli coefficients of the cluster marginal: c_a = <psi|sigma_a|psi>
  // with sigma|b> = unit * sign(b) |b ^ x>.
  Eigen::VectorXd coeff(n_strings);
  std::vector<PauliCode> codes(n_strings);
  for (std::size_t s = 0; s < n_strings; ++s) {
    codes[s] = code_of(cluster_qubits, s);
    std::complex<double> val = 0;
    for (std::int64_t b = 0; b < dim; ++b) {
      const double sign = (std::popcount(static_cast<std::uint64_t>(b) & codes[s].z) & 1) ? -1.0 : 1.0;
      val += psi[b] * sign *
             std::conj(psi[static_cast<std::int64_t>(static_cast<std::uint64_t>(b) ^ codes[s].x)]);
    }
    coeff[static_cast<Eigen::Index>(s)] = (codes[s].unit * val).real();
  }

  if (plan.t > 0) {
    const double tau = plan.t / static_cast<double>(plan.r);
    const Eigen::MatrixXd& transfer = cluster_transfer(plan, tau);
    // The twirl freezes each qubit's two-letter sign class, so the averaged
    // segment acts block-diagonally over class patterns; power each block.
    // letters within class (klass, choice) per position, as 2-bit codes
    auto letter_code = [&](int pos, int klass, int choice) -> std::uint64_t {
      const Letter g = gamma_by_pos[static_cast<std::size_t>(pos)];
      if (klass == 0) return choice == 0 ? 0 : static_cast<std::uint64_t>(g);
      std::uint64_t rest[2];
      int at = 0;
      for (Letter l : {Letter::X, Letter::Y, Letter::Z}) {
        if (l != g) rest[at++] = static_cast<std::uint64_t>(l);
      }
      return rest[choice];
    };
    Eigen::VectorXd evolved(n_strings);
    Eigen::MatrixXd block(cdim, cdim);
    Eigen::VectorXd sub(cdim);
    std::vector<std::size_t> members(static_cast<std::size_t>(cdim));
    for (std::int64_t klass = 0; klass < cdim; ++klass) {
      for (std::int64_t choice = 0; choice < cdim; ++choice) {
        std::uint64_t s = 0;
        for (int pos = 0; pos < nc; ++pos) {
          s |= letter_code(pos, (klass >> pos) & 1, (choice >> pos) & 1) << (2 * pos);
        }
        members[static_cast<std::size_t>(choice)] = s;
        sub[choice] = coeff[static_cast<Eigen::Index>(s)];
      }
      for (std::int64_t a = 0; a < cdim; ++a) {
        for (std::int64_t b = 0; b < cdim; ++b) {
          block(a, b) = transfer(static_cast<Eigen::Index>(members[static_cast<std::size_t>(a)]),
                                 static_cast<Eigen::Index>(members[static_cast<std::size_t>(b)]));
        }
      }
      sub = real_matrix_power(block, plan.r) * sub;
      for (std::int64_t choice = 0; choice < cdim; ++choice) {
        evolved[static_cast<Eigen::Index>(members[static_cast<std::size_t>(choice)])] = sub[choice];
      }
    }
    coeff = evolved;
  }

  // Reconstruct the cluster marginal (qubit i of the marginal = i-th
  // cluster qubit), fold prep depolarization, undo the prep circuits.
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(cdim, cdim);
  for (std::size_t s = 0; s < n_strings; ++s) {
    const double c = coeff[static_cast<Eigen::Index>(s)] / static_cast<double>(cdim);
    if (std::abs(c) < 1e-15) continue;
    // Local x/z masks over marginal bit positions.
    std::uint64_t lx = 0, lz = 0;
    for (int pos = 0; pos < nc; ++pos) {
      const auto l = static_cast<Letter>((s >> (2 * pos)) & 3);
      if (l == Letter::X || l == Letter::Y) lx |= 1ULL << pos;
      if (l == Letter::Z || l == Letter::Y) lz |= 1ULL << pos;
    }
    for (std::int64_t b = 0; b < cdim; ++b) {
      const double sign = (std::popcount(static_cast<std::uint64_t>(b) & lz) & 1) ? -1.0 : 1.0;
      rho(static_cast<std::int64_t>(static_cast<std::uint64_t>(b) ^ lx), b) +=
          c * codes[s].unit * sign;
    }
  }
  if (noise_.eta_prep > 0) {
    rho *= (1.0 - noise_.eta_prep);
    rho.diagonal().array() += noise_.eta_prep / static_cast<double>(cdim);
  }
  for (const ClusterTask& task : plan.tasks) {
    for (const auto& [q, u] : task.unprep.gates) {
      const int pos = static_cast<int>(
          std::lower_bound(cluster_qubits.begin(), cluster_qubits.end(), q) -
          cluster_qubits.begin());
      const Eigen::Matrix2cd a = u.adjoint();
      apply_single_qubit_gate(rho, nc, pos, a);  // rho <- A rho
      rho.adjointInPlace();
      apply_single_qubit_gate(rho, nc, pos, a);
      rho.adjointInPlace();  // rho <- A rho A^dag
    }
  }
  Eigen::VectorXd probs = rho.diagonal().real().cwiseMax(0.0);
  const double total = probs.sum();
  if (total > 0) probs /= total;
  return probs;
}

std::vector<long long> SimulatedDevice::run_shots(const ExperimentPlan& plan, long long n_shots) {
  Rng rng = make_rng(seed_, plan.stream);
  std::vector<long long> successes(plan.tasks.size(), 0);
  if (exact_average_viable(plan)) {
    validate_plan(plan, coloring_, n_qubits(), options_.ensemble_cap);
    std::vector<int> cluster_qubits;
    const Eigen::VectorXd probs = averaged_outcome_distribution(plan, cluster_qubits);
    // Physical-qubit bit pattern per marginal index, once.
    std::vector<std::uint64_t> physical(static_cast<std::size_t>(probs.size()), 0);
    for (std::size_t m = 0; m < physical.size(); ++m) {
      for (std::size_t i = 0; i < cluster_qubits.size(); ++i) {
        if ((m >> i) & 1) physical[m] |= 1ULL << cluster_qubits[i];
      }
    }
    for (long long shot = 0; shot < n_shots; ++shot) {
      const double u = uniform01(rng);
      double acc = 0;
      std::size_t index = physical.size() - 1;
      for (std::size_t b = 0; b < physical.size(); ++b) {
        acc += probs[static_cast<Eigen::Index>(b)];
        if (u < acc) {
          index = b;
          break;
        }
      }
      for (std::size_t ti = 0; ti < plan.tasks.size(); ++ti) {
        const QubitSet cluster = plan.tasks[ti].cluster;
        std::uint64_t cluster_bits = physical[index] & cluster;
        if (noise_.eta_meas > 0 && uniform01(rng) < noise_.eta_meas) {
          cluster_bits = rng() & cluster;
        }
        if (cluster_bits == 0) ++successes[ti];
      }
    }
    charge_ledger(plan, n_shots);
    return successes;
  }

  Eigen::MatrixXcd cols = simulate_columns(plan, n_shots, rng);
  for (Eigen::Index c = 0; c < cols.cols(); ++c) {
    const std::uint64_t index = sample_basis_index(cols.col(c), uniform01(rng));
    for (std::size_t ti = 0; ti < plan.tasks.size(); ++ti) {
      const QubitSet cluster = plan.tasks[ti].cluster;
      std::uint64_t cluster_bits = index & cluster;
      if (noise_.eta_meas > 0 && uniform01(rng) < noise_.eta_meas) {
        cluster_bits = rng() & cluster;
      }
      if (cluster_bits == 0) ++successes[ti];
    }
  }
  charge_ledger(plan, n_shots);
  return successes;
}

std::vector<std::vector<std::uint8_t>> SimulatedDevice::run_shot(const ExperimentPlan& plan) {
  Rng rng = make_rng(seed_, plan.stream);
  std::uint64_t index;
  if (exact_average_viable(plan)) {
    validate_plan(plan, coloring_, n_qubits(), options_.ensemble_cap);
    std::vector<int> cluster_qubits;
    const Eigen::VectorXd probs = averaged_outcome_distribution(plan, cluster_qubits);
    const double u = uniform01(rng);
    double acc = 0;
    std::size_t m = static_cast<std::size_t>(probs.size()) - 1;
    for (std::size_t b = 0; b < static_cast<std::size_t>(probs.size()); ++b) {
      acc += probs[static_cast<Eigen::Index>(b)];
      if (u < acc) {
        m = b;
        break;
      }
    }
    index = 0;
    for (std::size_t i = 0; i < cluster_qubits.size(); ++i) {
      if ((m >> i) & 1) index |= 1ULL << cluster_qubits[i];
    }
  } else {
    Eigen::MatrixXcd cols = simulate_columns(plan, 1, rng);
    index = sample_basis_index(cols.col(0), uniform01(rng));
  }
  std::vector<std::vector<std::uint8_t>> out;
  out.reserve(plan.tasks.size());
  for (const ClusterTask& task : plan.tasks) {
    std::uint64_t cluster_bits = index & task.cluster;
    if (noise_.eta_meas > 0 && uniform01(rng) < noise_.eta_meas) {
      cluster_bits = rng() & task.cluster;
    }
    out.push_back(extract_bits(cluster_bits, task.cluster));
  }
  charge_ledger(plan, 1);
  return out;
}

void SimulatedDevice::charge_ledger(const ExperimentPlan& plan, long long n_shots) {
  ledger_.total_evolution_time += static_cast<double>(n_shots) * plan.t;
  ledger_.experiment_count += n_shots;
  if (plan.backend == Backend::qdrift) {
    // Adjacent Pauli layers merge, so r segments cost r + 1 layers.
    ledger_.pauli_layer_count += n_shots * (plan.r + 1);
  } else {
    // Palindrome of 2*|words| conjugation pairs per step, merged at step seams.
    int max_cluster = 0;
    for (const ClusterBasis& b : plan.bases) max_cluster = std::max(max_cluster, b.size());
    const long long words =
        static_cast<long long>(
            std::size_t(1)
            << (2 * qubit_colorings_[static_cast<std::size_t>(plan.color)].n_colors)) *
        (plan.bases.empty() ? 1 : (1LL << max_cluster));
    ledger_.pauli_layer_count += n_shots * (2 * words * plan.r + 1);
  }
}

StateVector qdrift_evolve(const StateVector& s, const Evolver& ev, const TwirlDistribution& d,
                          double t, long long r, Rng& rng, ExperimentLedger* ledger) {
  if (r < 1) throw std::invalid_argument("segment count must be at least 1");
  StateVector out = s;
  const double tau = t / static_cast<double>(r);
  for (long long j = 0; j < r; ++j) {
    const PauliString p = sample_twirl_pauli(d, rng);
    apply_pauli(out, p);
    ev.evolve(out, tau);
    apply_pauli(out, p);
  }
  if (ledger) {
    ledger->total_evolution_time += t;
    ledger->experiment_count += 1;
    ledger->pauli_layer_count += r + 1;
  }
  return out;
}

StateVector trotter_evolve(const StateVector& s, const Evolver& ev, const TrotterEnsemble& e,
                           double t, long long r, ExperimentLedger* ledger) {
  if (r < 1) throw std::invalid_argument("segment count must be at least 1");
  StateVector out = s;
  const auto schedule = trotter_step_schedule(e, t / static_cast<double>(r));
  for (long long rep = 0; rep < r; ++rep) {
    for (const auto& [word, dur] : schedule) {
      apply_pauli(out, word);
      ev.evolve(out, dur);
      apply_pauli(out, word);
    }
  }
  if (ledger) {
    ledger->total_evolution_time += t;
    ledger->experiment_count += 1;
    ledger->pauli_layer_count += 2 * static_cast<long long>(e.words.size()) * r + 1;
  }
  return out;
}

std::vector<std::uint8_t> measure_cluster(const StateVector& s, QubitSet cluster,
                                          const PrepCircuit& prep, const NoiseModel& noise,
                                          Rng& rng) {
  noise.check();
  StateVector work = s;
  {
    Eigen::Map<Eigen::MatrixXcd> m(work.amps.data(), work.amps.size(), 1);
    apply_circuit(Eigen::Ref<Eigen::MatrixXcd>(m), work.n_qubits, prep, true);
  }
  // Marginal over the cluster qubits.
  const auto cluster_qubits = qubits_of(cluster);
  const std::size_t k = cluster_qubits.size();
  std::vector<double> marginal(std::size_t(1) << k, 0.0);
  const auto dim = static_cast<std::uint64_t>(work.dim());
  for (std::uint64_t b = 0; b < dim; ++b) {
    std::size_t pattern = 0;
    for (std::size_t i = 0; i < k; ++i) {
      if ((b >> cluster_qubits[i]) & 1) pattern |= std::size_t(1) << i;
    }
    marginal[pattern] += std::norm(work.amps[static_cast<std::int64_t>(b)]);
  }
  double u = uniform01(rng);
  std::size_t outcome = marginal.size() - 1;
  double acc = 0;
  for (std::size_t p = 0; p < marginal.size(); ++p) {
    acc += marginal[p];
    if (u < acc) {
      outcome = p;
      break;
    }
  }
  if (noise.eta_meas > 0 && uniform01(rng) < noise.eta_meas) {
    outcome = static_cast<std::size_t>(rng()) & (marginal.size() - 1);
  }
  std::vector<std::uint8_t> bits(k);
  for (std::size_t i = 0; i < k; ++i) bits[i] = static_cast<std::uint8_t>((outcome >> i) & 1);
  return bits;
}

}  // namespace hamlearn
