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

#include "hamlearn/learner.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <unordered_map>

namespace hamlearn {

namespace {

constexpr double kPi = std::numbers::pi;
const double kNaN = std::numeric_limits<double>::quiet_NaN();

Eigen::Matrix2cd basis_rotation(Letter l) {
  using namespace std::complex_literals;
  Eigen::Matrix2cd m;
  const double s = 1.0 / std::sqrt(2.0);
  switch (l) {
    case Letter::Z:
      m << 1, 0, 0, 1;
      break;
    case Letter::X:  // Hadamard
      m << s, s, s, -s;
      break;
    case Letter::Y:  // S * Hadamard
      m << s, s, 1i * s, -1i * s;
      break;
    default:
      throw std::invalid_argument("basis letters must be X, Y or Z");
  }
  return m;
}

Eigen::Matrix2cd x_gate() {
  Eigen::Matrix2cd m;
  m << 0, 1, 1, 0;
  return m;
}

Eigen::Matrix2cd superposition_gate(bool with_phase, int xi_bit) {
  using namespace std::complex_literals;
  const double s = 1.0 / std::sqrt(2.0);
  Eigen::Matrix2cd m;
  if (!with_phase) {
    m << s, s, s, -s;  // H; (|xi_bit> + |1-xi_bit>)/sqrt(2) either way
    return m;
  }
  if (xi_bit == 0) {
    m << s, s, 1i * s, -1i * s;  // S H: |0> + i|1>
  } else {
    m << s, s, -1i * s, 1i * s;  // S^dag H up to global phase: |1> + i|0>
  }
  return m;
}

ClusterBasis decode_basis(QubitSet cluster, int code) {
  const int nb = std::popcount(cluster);
  std::vector<Letter> letters(static_cast<std::size_t>(nb));
  static const Letter kXYZ[3] = {Letter::X, Letter::Y, Letter::Z};
  for (int i = 0; i < nb; ++i) {
    letters[static_cast<std::size_t>(i)] = kXYZ[code % 3];
    code /= 3;
  }
  return ClusterBasis(cluster, std::move(letters));
}

std::string basis_text(const ClusterBasis& b) {
  std::string s;
  for (Letter l : b.letters) s.push_back(letter_char(l));
  return s;
}

int pow3(int n) {
  int p = 1;
  while (n-- > 0) p *= 3;
  return p;
}

/// Shared-schedule adapter: one sample_many call issues one plan whose shots
/// serve every active cluster at once.
class DeviceBatchOracle final : public BatchPhaseOracle {
 public:
  struct Active {
    int cluster_index;  // position within the color class
    QubitSet cluster;
    PrepPair pair;
  };

  DeviceBatchOracle(Device& device, Backend backend, int color,
                    std::vector<ClusterBasis> bases, std::vector<Active> active, double tau_prime,
                    const ReshapeConstants& consts, std::uint64_t& stream_counter)
      : device_(device),
        backend_(backend),
        color_(color),
        bases_(std::move(bases)),
        active_(std::move(active)),
        tau_prime_(tau_prime),
        consts_(consts),
        stream_counter_(stream_counter) {}

  int channels() const override { return static_cast<int>(active_.size()); }

  std::vector<long long> sample_many(long long multiple, Quadrature quad, int n) override {
    ExperimentPlan plan;
    plan.backend = backend_;
    plan.color = color_;
    plan.bases = bases_;
    plan.t = static_cast<double>(multiple) * tau_prime_;
    plan.r = segment_count(backend_, plan.t, consts_);
    plan.stream = stream_counter_++;
    for (const Active& a : active_) {
      ClusterTask task;
      task.cluster_index = a.cluster_index;
      task.cluster = a.cluster;
      task.prep = a.pair.u;
      task.unprep = quad == Quadrature::cosine ? a.pair.u : a.pair.v;
      plan.tasks.push_back(std::move(task));
    }
    return device_.run_shots(plan, n);
  }

 private:
  Device& device_;
  Backend backend_;
  int color_;
  std::vector<ClusterBasis> bases_;
  std::vector<Active> active_;
  double tau_prime_;
  const ReshapeConstants& consts_;
  std::uint64_t& stream_counter_;
};

}  // namespace

SpTree build_spt(int n_bits) {
  if (n_bits < 1 || n_bits > 20) throw std::invalid_argument("cluster size out of range");
  SpTree t;
  t.n_bits = n_bits;
  const std::uint32_t count = 1u << n_bits;
  t.edges.reserve(count - 1);
  for (std::uint32_t child = 1; child < count; ++child) {
    t.edges.push_back({child & (child - 1), child});
  }
  return t;
}

PrepPair build_prep_pair(QubitSet cluster, const ClusterBasis& basis, std::uint32_t xi,
                         std::uint32_t xi_prime) {
  if (basis.cluster != cluster) throw std::invalid_argument("basis cluster mismatch");
  const auto qubits = qubits_of(cluster);
  const std::uint32_t all = (qubits.size() >= 32) ? ~0u : ((1u << qubits.size()) - 1);
  if ((xi | xi_prime) & ~all) throw std::invalid_argument("bit pattern exceeds cluster");
  const std::uint32_t diff = xi ^ xi_prime;
  if (std::popcount(diff) != 1) {
    throw std::invalid_argument("patterns must differ in exactly one bit");
  }
  const int diff_pos = std::countr_zero(diff);

  PrepPair out;
  for (std::size_t i = 0; i < qubits.size(); ++i) {
    const int q = qubits[i];
    const Eigen::Matrix2cd rot = basis_rotation(basis.letters[i]);
    if (static_cast<int>(i) == diff_pos) {
      const int xi_bit = (xi >> i) & 1;
      out.u.gates.emplace_back(q, Eigen::Matrix2cd(rot * superposition_gate(false, xi_bit)));
      out.v.gates.emplace_back(q, Eigen::Matrix2cd(rot * superposition_gate(true, xi_bit)));
    } else {
      Eigen::Matrix2cd g = rot;
      if ((xi >> i) & 1) g = Eigen::Matrix2cd(rot * x_gate());
      out.u.gates.emplace_back(q, g);
      out.v.gates.emplace_back(q, g);
    }
  }
  return out;
}

SpectrumTable accumulate_spectrum(const SpTree& tree,
                                  const std::vector<double>& parent_minus_child) {
  if (parent_minus_child.size() != tree.edges.size()) {
    throw std::invalid_argument("one difference per tree edge is required");
  }
  SpectrumTable table;
  table.n_bits = tree.n_bits;
  table.edge_diff = parent_minus_child;
  table.eigenvalue.assign(std::size_t(1) << tree.n_bits, 0.0);
  // Children are enumerated in ascending order, so parents are always ready.
  for (std::size_t e = 0; e < tree.edges.size(); ++e) {
    const double d = parent_minus_child[e];
    if (std::isnan(d)) throw std::invalid_argument("missing edge difference");
    table.eigenvalue[tree.edges[e].child] = table.eigenvalue[tree.edges[e].parent] - d;
  }
  return table;
}

std::vector<double> recover_coefficients(const SpectrumTable& table) {
  std::vector<double> v = table.eigenvalue;
  if (v.size() != (std::size_t(1) << table.n_bits)) {
    throw std::invalid_argument("incomplete spectrum table");
  }
  // In-place Walsh-Hadamard butterfly.
  for (std::size_t half = 1; half < v.size(); half <<= 1) {
    for (std::size_t block = 0; block < v.size(); block += 2 * half) {
      for (std::size_t i = block; i < block + half; ++i) {
        const double a = v[i], b = v[i + half];
        v[i] = a + b;
        v[i + half] = a - b;
      }
    }
  }
  const double scale = 1.0 / static_cast<double>(v.size());
  for (double& x : v) x *= scale;
  v[0] = 0.0;  // gauge: the identity coefficient is unobservable
  return v;
}

long long segment_count(Backend backend, double t, const ReshapeConstants& c) {
  if (t <= 0) return 1;
  double r = backend == Backend::qdrift
                 ? c.qdrift_rate * t * t / c.deviation_budget
                 : c.trotter_rate * std::pow(t, 1.5) / std::sqrt(c.deviation_budget);
  return std::max(1LL, static_cast<long long>(std::ceil(r)));
}

LearnResult learn_all(Device& device, const Hamiltonian& structure, const LearnOptions& options) {
  if (!(options.epsilon > 0) || !(options.epsilon < 1) || !(options.delta > 0) ||
      !(options.delta < 1)) {
    throw std::invalid_argument("epsilon and delta must lie in (0, 1)");
  }
  const HamiltonianStats stats = structure.validate();
  const int k = std::max(1, stats.locality_k);
  const double eps_edge = options.epsilon / k;
  const double delta_edge = options.delta / k;

  const auto clusters = build_clusters(structure);
  const ClusterColoring coloring = build_cluster_graph_and_color(clusters);

  std::unordered_map<PauliString, int, PauliHash> term_index;
  for (std::size_t a = 0; a < structure.terms().size(); ++a) {
    term_index.emplace(structure.terms()[a].op, static_cast<int>(a));
  }

  LearnResult result;
  result.estimates.reserve(structure.size());
  for (const Term& t : structure.terms()) result.estimates.emplace_back(t.op);

  const ExperimentLedger ledger_start = device.ledger();
  std::uint64_t stream_counter = 1;
  Rng idle_rng = make_rng(options.seed, 0x1d1eULL);

  for (int color = 0; color < coloring.n_colors; ++color) {
    const auto& members = coloring.classes[static_cast<std::size_t>(color)];
    const std::size_t n_members = members.size();

    struct PendingTask {
      int basis_code;
      std::size_t edge_index;
    };
    std::vector<std::vector<PendingTask>> queues(n_members);
    std::vector<SpTree> trees(n_members);
    // Results per (member, basis): parent-minus-child differences per edge.
    std::vector<std::vector<std::vector<double>>> diffs(n_members);

    for (std::size_t m = 0; m < n_members; ++m) {
      const QubitSet cl = coloring.clusters[static_cast<std::size_t>(members[m])];
      const int nb = std::popcount(cl);
      trees[m] = build_spt(nb);
      const int n_bases = pow3(nb);
      diffs[m].assign(static_cast<std::size_t>(n_bases),
                      std::vector<double>(trees[m].edges.size(), kNaN));
      for (int g = 0; g < n_bases; ++g) {
        for (std::size_t e = 0; e < trees[m].edges.size(); ++e) queues[m].push_back({g, e});
      }
    }

    std::vector<std::size_t> next(n_members, 0);
    auto any_pending = [&] {
      for (std::size_t m = 0; m < n_members; ++m) {
        if (next[m] < queues[m].size()) return true;
      }
      return false;
    };

    while (any_pending()) {
      std::vector<ClusterBasis> bases(n_members);
      std::vector<DeviceBatchOracle::Active> active;
      std::vector<std::pair<std::size_t, PendingTask>> picked;  // member -> task
      int max_active_size = 1;
      for (std::size_t m = 0; m < n_members; ++m) {
        const QubitSet cl = coloring.clusters[static_cast<std::size_t>(members[m])];
        const int nb = std::popcount(cl);
        if (next[m] < queues[m].size()) {
          const PendingTask task = queues[m][next[m]++];
          bases[m] = decode_basis(cl, task.basis_code);
          const SpTreeEdge edge = trees[m].edges[task.edge_index];
          DeviceBatchOracle::Active a;
          a.cluster_index = static_cast<int>(m);
          a.cluster = cl;
          a.pair = build_prep_pair(cl, bases[m], edge.parent, edge.child);
          active.push_back(std::move(a));
          picked.emplace_back(m, task);
          max_active_size = std::max(max_active_size, nb);
        } else {
          // Idle cluster: throwaway basis, not measured.
          bases[m] = decode_basis(cl, static_cast<int>(idle_rng() % pow3(nb)));
        }
      }

      const double tau_prime = kPi / std::pow(2.0, max_active_size + 2);
      const double theta_target = eps_edge * tau_prime;
      DeviceBatchOracle oracle(device, options.backend, color, bases, std::move(active), tau_prime,
                               options.reshape, stream_counter);
      const auto phases =
          estimate_phases_lockstep(oracle, theta_target, delta_edge, options.rpe);
      for (std::size_t i = 0; i < picked.size(); ++i) {
        const auto& [m, task] = picked[i];
        diffs[m][static_cast<std::size_t>(task.basis_code)][task.edge_index] =
            phases[i].theta / tau_prime;
      }
      if (!phases.empty()) {
        result.rpe_time_accounting += tau_prime * static_cast<double>(phases[0].total_multiple);
      }
      ++result.batch_count;
    }

    // All passes for this color are complete; invert each one.
    for (std::size_t m = 0; m < n_members; ++m) {
      const QubitSet cl = coloring.clusters[static_cast<std::size_t>(members[m])];
      const auto cluster_qubits = qubits_of(cl);
      const int nb = static_cast<int>(cluster_qubits.size());
      for (int g = 0; g < pow3(nb); ++g) {
        const ClusterBasis basis = decode_basis(cl, g);
        const SpectrumTable table = accumulate_spectrum(trees[m], diffs[m][static_cast<std::size_t>(g)]);
        const std::vector<double> lambdas = recover_coefficients(table);
        for (std::uint32_t b = 1; b < lambdas.size(); ++b) {
          PauliString op(structure.n_qubits());
          for (int i = 0; i < nb; ++i) {
            if ((b >> i) & 1) {
              op.set_letter(cluster_qubits[static_cast<std::size_t>(i)],
                            basis.letters[static_cast<std::size_t>(i)]);
            }
          }
          const auto it = term_index.find(op);
          if (it == term_index.end()) continue;  // zero coefficient outside the known set
          CoefficientEstimate& est = result.estimates[static_cast<std::size_t>(it->second)];
          if (est.values.empty()) {
            est.lambda_hat = lambdas[b];
            est.epsilon = options.epsilon;
            est.delta = options.delta;
          }
          est.values.push_back(lambdas[b]);
          est.provenance.push_back({color, members[m], basis_text(basis)});
        }
      }
    }
  }

  for (const CoefficientEstimate& est : result.estimates) {
    if (est.values.empty()) {
      throw std::logic_error("term not covered by any pass: " + est.op.text());
    }
  }

  const ExperimentLedger end = device.ledger();
  result.ledger.total_evolution_time = end.total_evolution_time - ledger_start.total_evolution_time;
  result.ledger.experiment_count = end.experiment_count - ledger_start.experiment_count;
  result.ledger.pauli_layer_count = end.pauli_layer_count - ledger_start.pauli_layer_count;
  return result;
}

double estimate_edge_difference(Device& device, const Hamiltonian& structure, QubitSet cluster,
                                const ClusterBasis& basis, std::uint32_t xi, std::uint32_t xi_prime,
                                double eps_edge, double delta_edge, const LearnOptions& options) {
  const auto clusters = build_clusters(structure);
  const ClusterColoring coloring = build_cluster_graph_and_color(clusters);
  int cluster_id = -1;
  for (std::size_t i = 0; i < coloring.clusters.size(); ++i) {
    if (coloring.clusters[i] == cluster) cluster_id = static_cast<int>(i);
  }
  if (cluster_id < 0) throw std::invalid_argument("not an interacting cluster of the structure");
  const int color = coloring.color_of[static_cast<std::size_t>(cluster_id)];
  const auto& members = coloring.classes[static_cast<std::size_t>(color)];

  Rng idle_rng = make_rng(options.seed, 0x1d1eULL);
  std::vector<ClusterBasis> bases(members.size());
  std::vector<DeviceBatchOracle::Active> active;
  for (std::size_t m = 0; m < members.size(); ++m) {
    const QubitSet cl = coloring.clusters[static_cast<std::size_t>(members[m])];
    if (members[m] == cluster_id) {
      bases[m] = basis;
      DeviceBatchOracle::Active a;
      a.cluster_index = static_cast<int>(m);
      a.cluster = cl;
      a.pair = build_prep_pair(cl, basis, xi, xi_prime);
      active.push_back(std::move(a));
    } else {
      bases[m] = decode_basis(cl, static_cast<int>(idle_rng() % pow3(std::popcount(cl))));
    }
  }

  const double tau_prime = kPi / std::pow(2.0, std::popcount(cluster) + 2);
  std::uint64_t stream_counter = mix_seed(options.seed, 0xed6eULL);
  DeviceBatchOracle oracle(device, options.backend, color, bases, std::move(active), tau_prime,
                           options.reshape, stream_counter);
  const auto phases =
      estimate_phases_lockstep(oracle, eps_edge * tau_prime, delta_edge, options.rpe);
  return phases[0].theta / tau_prime;
}

}  // namespace hamlearn
