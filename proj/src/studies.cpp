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

#include "hamlearn/studies.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "hamlearn/instances.hpp"

namespace hamlearn {

using nlohmann::json;

namespace {

constexpr double kPi = std::numbers::pi;

RunConfig with_default_chain(RunConfig c) {
  if (c.hamiltonian_file.empty() && !c.inline_hamiltonian && c.generator_kind.empty()) {
    c.generator_kind = "heisenberg_chain";
  }
  return c;
}

double forward_eigenvalue(const std::map<std::uint32_t, double>& diag, std::uint32_t xi) {
  double e = 0;
  for (const auto& [b, lambda] : diag) {
    e += (std::popcount(xi & b) & 1) ? -lambda : lambda;
  }
  return e;
}

/// All-zero probability on the cluster after undoing the prep circuit.
double success_probability(const StateVector& s, const PrepCircuit& prep, QubitSet cluster) {
  StateVector work = s;
  for (const auto& [q, u] : prep.gates) {
    apply_single_qubit_gate(work, q, Eigen::Matrix2cd(u.adjoint()));
  }
  double p = 0;
  const auto dim = static_cast<std::uint64_t>(work.dim());
  for (std::uint64_t b = 0; b < dim; ++b) {
    if ((b & cluster) == 0) p += std::norm(work.amps[static_cast<std::int64_t>(b)]);
  }
  return p;
}

struct DeviationScenario {
  Hamiltonian h;
  ClusterColoring coloring;
  QubitColoring qcoloring;
  std::vector<ClusterBasis> bases;  // all clusters of color 0, uniform Z
  QubitSet cluster = 0;             // measured cluster: first of color 0
  PrepPair pair;
  StateVector prep_state;
  double delta_eps = 0;  // eigenvalue gap of the probed edge

  explicit DeviationScenario(Hamiltonian ham)
      : h(std::move(ham)),
        coloring(build_cluster_graph_and_color(build_clusters(h))),
        qcoloring(build_qubit_graph_and_color(h, coloring, 0)),
        prep_state(h.n_qubits()) {
    const auto& members = coloring.classes[0];
    for (int id : members) {
      bases.push_back(uniform_basis(coloring.clusters[static_cast<std::size_t>(id)], Letter::Z));
    }
    cluster = coloring.clusters[static_cast<std::size_t>(members[0])];
    pair = build_prep_pair(cluster, bases[0], 0, 1);
    prep_state = basis_state(h.n_qubits(), 0);
    for (const auto& [q, u] : pair.u.gates) apply_single_qubit_gate(prep_state, q, u);

    const auto diag = diagonal_part(h, cluster, bases[0]);
    delta_eps = forward_eigenvalue(diag, 0) - forward_eigenvalue(diag, 1);
  }

  double ideal(double t) const { return 0.5 * (1.0 + std::cos(delta_eps * t)); }
};

struct MeanResult {
  double mean = 0;
  double stderr_mean = 0;
};

MeanResult qdrift_mean_success(const DeviationScenario& sc, const Evolver& ev, double t,
                               long long r, int n_sequences, std::uint64_t seed) {
  const TwirlDistribution d = make_twirl(sc.h.n_qubits(), 0, sc.bases);
  Rng rng = make_rng(seed, 0xdef1);
  double sum = 0, sum_sq = 0;
  for (int i = 0; i < n_sequences; ++i) {
    const StateVector out = qdrift_evolve(sc.prep_state, ev, d, t, r, rng);
    const double p = success_probability(out, sc.pair.u, sc.cluster);
    sum += p;
    sum_sq += p * p;
  }
  MeanResult m;
  m.mean = sum / n_sequences;
  const double var = std::max(0.0, sum_sq / n_sequences - m.mean * m.mean);
  m.stderr_mean = std::sqrt(var / std::max(1, n_sequences - 1));
  return m;
}

double trotter_success(const DeviationScenario& sc, const Evolver& ev, double t, long long r) {
  const TrotterEnsemble e = build_trotter_ensemble(sc.h, sc.coloring, sc.qcoloring, sc.bases);
  const StateVector out = trotter_evolve(sc.prep_state, ev, e, t, r);
  return success_probability(out, sc.pair.u, sc.cluster);
}

struct LearnOutcome {
  LearnResult result;
  double max_err = 0;
  bool success = false;
};

LearnOutcome run_one_learn(const Hamiltonian& truth, const RunConfig& config, double epsilon,
                           NoiseModel noise, std::uint64_t run_salt) {
  SimulatedDevice device(truth, noise, mix_seed(config.seed, run_salt));
  LearnOptions opt;
  opt.backend = config.backend;
  opt.epsilon = epsilon;
  opt.delta = config.delta;
  opt.seed = mix_seed(config.seed, run_salt ^ 0x5eedULL);
  opt.rpe = config.rpe;
  opt.reshape = config.reshape;
  LearnOutcome out{learn_all(device, truth, opt), 0, false};
  for (std::size_t a = 0; a < truth.terms().size(); ++a) {
    out.max_err = std::max(out.max_err,
                           std::abs(out.result.estimates[a].lambda_hat - truth.terms()[a].coeff));
  }
  out.success = out.max_err <= epsilon;
  return out;
}

}  // namespace

SlopeFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 4) {
    throw std::invalid_argument("slope fit needs at least 4 points");
  }
  const auto n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0) || !(y[i] > 0)) throw std::invalid_argument("slope fit needs positive data");
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double denom = n * sxx - sx * sx;
  if (std::abs(denom) < 1e-12) throw std::domain_error("degenerate abscissa for slope fit");
  SlopeFit f;
  f.slope = (n * sxy - sx * sy) / denom;
  f.intercept = (sy - f.slope * sx) / n;
  double ss_res = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double pred = f.intercept + f.slope * std::log(x[i]);
    const double res = std::log(y[i]) - pred;
    ss_res += res * res;
  }
  f.stderr_slope = std::sqrt(ss_res / std::max(1.0, n - 2) / (sxx - sx * sx / n));
  return f;
}

StudyReport deviation_study(const RunConfig& raw) {
  const RunConfig config = with_default_chain(raw);
  StudyReport rep;
  rep.study = "deviation";
  rep.columns = {"r", "deviation", "stderr", "samples"};
  rep.config_hash = config_hash(run_config_to_json(config));

  DeviationScenario sc(load_instance(config));
  Evolver ev(sc.h, 11, config.n_cap);
  const double t = config.study_t;
  const bool qdrift = config.backend == Backend::qdrift;

  std::vector<double> rs, devs;
  for (long long r : config.r_grid) {
    double dev, se;
    int samples;
    if (qdrift) {
      // More sequences at larger r: the signal shrinks as 1/r while the
      // per-sequence spread shrinks only as 1/sqrt(r).
      samples = static_cast<int>(config.n_sequences *
                                 std::max<long long>(1, r / std::max<long long>(1, config.r_grid.front())));
      const MeanResult m = qdrift_mean_success(sc, ev, t, r, samples, mix_seed(config.seed, 7 + r));
      dev = std::abs(m.mean - sc.ideal(t));
      se = m.stderr_mean;
    } else {
      samples = 1;
      dev = std::abs(trotter_success(sc, ev, t, r) - sc.ideal(t));
      se = 0;
    }
    rep.rows.push_back({static_cast<double>(r), dev, se, static_cast<double>(samples)});
    rs.push_back(static_cast<double>(r));
    devs.push_back(std::max(dev, 1e-15));
  }
  const SlopeFit fit = fit_loglog(rs, devs);
  rep.metrics["slope"] = fit.slope;
  rep.metrics["slope_stderr"] = fit.stderr_slope;

  bool pass;
  if (qdrift) {
    pass = fit.slope >= -1.2 && fit.slope <= -0.8;
    // System-size sweep at fixed r; shared term coefficients keep the probed
    // patch identical, so only genuine size effects can move the deviation.
    double dev_min = 1e300, dev_max = 0;
    for (int n : config.n_grid) {
      DeviationScenario scn(heisenberg_chain(n, config.seed, config.coeff_lo, config.coeff_hi));
      Evolver evn(scn.h, 11, config.n_cap);
      const int samples = static_cast<int>(
          config.n_sequences *
          std::max<long long>(1, config.fixed_r / std::max<long long>(1, config.r_grid.front())));
      const MeanResult m =
          qdrift_mean_success(scn, evn, t, config.fixed_r, samples, mix_seed(config.seed, 77 + n));
      const double dev = std::abs(m.mean - scn.ideal(t));
      rep.metrics["deviation_n" + std::to_string(n)] = dev;
      dev_min = std::min(dev_min, dev);
      dev_max = std::max(dev_max, dev);
    }
    rep.metrics["n_sweep_ratio"] = dev_max / std::max(dev_min, 1e-15);
    pass = pass && rep.metrics["n_sweep_ratio"] < 2.0;
  } else {
    pass = fit.slope >= -2.2 && fit.slope <= -1.8;
  }
  rep.pass = pass;
  return rep;
}

StudyReport scaling_study(const RunConfig& raw) {
  const RunConfig config = with_default_chain(raw);
  StudyReport rep;
  rep.study = "scaling";
  rep.columns = {"epsilon", "total_evolution_time", "experiments", "max_abs_error", "success"};
  rep.config_hash = config_hash(run_config_to_json(config));
  if (config.epsilon_grid.size() < 4) throw std::invalid_argument("epsilon grid needs >= 4 points");

  const Hamiltonian truth = load_instance(config);
  std::vector<double> inv_eps, times;
  double exp_first = 0, exp_last = 0;
  for (std::size_t i = 0; i < config.epsilon_grid.size(); ++i) {
    const double eps = config.epsilon_grid[i];
    const LearnOutcome out = run_one_learn(truth, config, eps, config.noise, 1000 + i);
    const double T = out.result.ledger.total_evolution_time;
    const auto experiments = static_cast<double>(out.result.ledger.experiment_count);
    rep.rows.push_back({eps, T, experiments, out.max_err, out.success ? 1.0 : 0.0});
    inv_eps.push_back(1.0 / eps);
    times.push_back(T);
    if (i == 0) exp_first = experiments;
    exp_last = experiments;
  }
  const SlopeFit fit = fit_loglog(inv_eps, times);
  rep.metrics["slope"] = fit.slope;
  rep.metrics["slope_stderr"] = fit.stderr_slope;
  rep.metrics["experiment_ratio"] = exp_last / std::max(1.0, exp_first);
  rep.pass = fit.slope >= 0.8 && fit.slope <= 1.2 && rep.metrics["experiment_ratio"] <= 4.0;
  return rep;
}

StudyReport spam_robustness_study(const RunConfig& raw) {
  const RunConfig config = with_default_chain(raw);
  StudyReport rep;
  rep.study = "spam";
  rep.columns = {"eta_meas", "success_rate", "runs", "mean_max_error"};
  rep.config_hash = config_hash(run_config_to_json(config));

  const double sigma2 = 2.0 * std::sqrt(config.delta * (1 - config.delta) / config.n_runs);
  bool pass = true;
  for (double eta : config.eta_grid) {
    int successes = 0;
    double err_sum = 0;
    for (int run = 0; run < config.n_runs; ++run) {
      const Hamiltonian truth =
          heisenberg_chain(config.n_qubits, mix_seed(config.seed, 3000 + run), config.coeff_lo,
                           config.coeff_hi);
      NoiseModel noise = config.noise;
      noise.eta_meas = eta;
      const LearnOutcome out =
          run_one_learn(truth, config, config.epsilon, noise, 4000 + run * 131 + int(1000 * eta));
      successes += out.success ? 1 : 0;
      err_sum += out.max_err;
    }
    const double rate = static_cast<double>(successes) / config.n_runs;
    rep.rows.push_back({eta, rate, static_cast<double>(config.n_runs), err_sum / config.n_runs});
    // The robustness claim covers the region below the additive-error
    // threshold; larger eta rows are reported without gating.
    if (eta <= 0.34) pass = pass && rate >= 1.0 - config.delta - sigma2;
  }
  rep.pass = pass;
  return rep;
}

StudyReport tv_bound_check(const RunConfig& config) {
  StudyReport rep;
  rep.study = "tvbound";
  rep.columns = {"epsilon", "t", "eta", "tv", "bound", "reference_T"};
  rep.config_hash = config_hash(run_config_to_json(config));
  rep.notes =
      "two-level distinguishing experiment: prep |+>, evolve, measure on the "
      "equator (phase-sensitive basis), depolarized readout";

  const std::vector<double> eps_list = {0.02, 0.05, 0.1, 0.15, 0.2};
  const std::vector<double> t_list = {0.0, 0.5, 1.0, 2.0, 4.0};
  const std::vector<double> eta_list = {0.05, 0.1, 0.25, 0.45};

  using namespace std::complex_literals;
  int violations = 0;
  for (double eps : eps_list) {
    for (double t : t_list) {
      for (double eta : eta_list) {
        // psi_pm = e^{-i (+-eps) t Z} |+>, then project onto the Y eigenbasis.
        Eigen::Vector2cd plus;
        plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
        Eigen::Vector2cd psi_p, psi_m;
        psi_p << std::exp(-1i * eps * t) * plus(0), std::exp(1i * eps * t) * plus(1);
        psi_m << std::exp(1i * eps * t) * plus(0), std::exp(-1i * eps * t) * plus(1);
        Eigen::Vector2cd y_up, y_dn;
        y_up << 1.0 / std::sqrt(2.0), 1i / std::sqrt(2.0);
        y_dn << 1.0 / std::sqrt(2.0), -1i / std::sqrt(2.0);
        auto prob = [&](const Eigen::Vector2cd& basis, const Eigen::Vector2cd& psi) {
          const double ideal = std::norm(basis.dot(psi));
          return (1 - eta) * ideal + eta * 0.5;
        };
        const double tv = 0.5 * (std::abs(prob(y_up, psi_p) - prob(y_up, psi_m)) +
                                 std::abs(prob(y_dn, psi_p) - prob(y_dn, psi_m)));
        const double bound = (1 - eta) * std::min(2 * eps * t, 1.0);
        const double ref_t =
            std::log(1.0 / (2 * config.delta)) / (2 * eps * std::log(1.0 / eta));
        if (tv > bound + 1e-12) ++violations;
        rep.rows.push_back({eps, t, eta, tv, bound, ref_t});
      }
    }
  }
  rep.metrics["violations"] = violations;
  rep.metrics["grid_points"] = static_cast<double>(rep.rows.size());
  rep.pass = violations == 0;
  return rep;
}

StudyReport run_study(const std::string& name, const RunConfig& config) {
  if (name == "deviation") return deviation_study(config);
  if (name == "scaling") return scaling_study(config);
  if (name == "spam") return spam_robustness_study(config);
  if (name == "tvbound") return tv_bound_check(config);
  throw std::invalid_argument("unknown study: " + name);
}

std::string report_csv(const StudyReport& report) {
  std::ostringstream out;
  for (std::size_t i = 0; i < report.columns.size(); ++i) {
    if (i) out << ',';
    out << report.columns[i];
  }
  out << '\n';
  out.precision(12);
  for (const auto& row : report.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      out << row[i];
    }
    out << '\n';
  }
  return out.str();
}

json report_to_json(const StudyReport& report) {
  return json{{"study", report.study},     {"columns", report.columns},
              {"rows", report.rows},       {"metrics", report.metrics},
              {"pass", report.pass},       {"config_hash", report.config_hash},
              {"notes", report.notes}};
}

double exact_twirled_observable(const Hamiltonian& h, const TwirlDistribution& d,
                                const PrepCircuit& prep, QubitSet cluster, double t, long long r) {
  const int n = h.n_qubits();
  if (n > 5) {
    throw std::domain_error("exact averaged-channel oracle is limited to small systems");
  }
  Evolver ev(h, 11);
  const std::int64_t dim = 1LL << n;
  const std::size_t n_strings = std::size_t(1) << (2 * n);

  // One segment of the averaged channel, in the Pauli coefficient basis:
  // E_P[Ad(P) Ad(U) Ad(P)] has matrix W .* T with T the transfer matrix of
  // U = e^{-iH tau} and W(a,b) the per-qubit product of E[s_P(a) s_P(b)],
  // the sign mask of the sandwiching twirl.
  auto string_of = [&](std::size_t code) {
    PauliString p(n);
    for (int q = 0; q < n; ++q) p.set_letter(q, static_cast<Letter>((code >> (2 * q)) & 3));
    return p;
  };
  auto dense_of = [&](const PauliString& p) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
    constexpr std::complex<double> kI[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    const std::uint64_t x = p.x_mask(), z = p.z_mask();
    const std::complex<double> base = kI[std::popcount(x & z) & 3];
    for (std::uint64_t b = 0; b < static_cast<std::uint64_t>(dim); ++b) {
      m(static_cast<std::int64_t>(b ^ x), static_cast<std::int64_t>(b)) =
          (std::popcount(b & z) & 1) ? -base : base;
    }
    return m;
  };

  std::vector<PauliString> strings;
  strings.reserve(n_strings);
  for (std::size_t a = 0; a < n_strings; ++a) strings.push_back(string_of(a));

  // Per-qubit mask factors: for equal letters always 1; otherwise 0 when the
  // site is twirled over all four letters, and the two-letter average for a
  // constrained site.
  auto site_mask = [&](int q, Letter a, Letter b) -> double {
    if (a == b) return 1.0;
    if (d.free_qubits & (1ULL << q)) return 0.0;
    const QubitSet bit = 1ULL << q;
    for (const ClusterBasis& cb : d.cluster_bases) {
      if (cb.cluster & bit) {
        const Letter g = cb.letter_at(q);
        auto sign = [&](Letter l) { return (l == Letter::I || l == g) ? 1.0 : -1.0; };
        return 0.5 * (1.0 + sign(a) * sign(b));
      }
    }
    return 1.0;  // untouched qubit
  };

  std::vector<Eigen::MatrixXcd> dense;
  dense.reserve(n_strings);
  for (const PauliString& s : strings) dense.push_back(dense_of(s));

  const double tau = t / static_cast<double>(r);
  const Eigen::MatrixXcd& u = ev.propagator(tau);
  Eigen::MatrixXcd masked(n_strings, n_strings);
  for (std::size_t b = 0; b < n_strings; ++b) {
    const Eigen::MatrixXcd moved = u * dense[b] * u.adjoint();
    for (std::size_t a = 0; a < n_strings; ++a) {
      double w = 1.0;
      for (int q = 0; q < n && w != 0.0; ++q) {
        w *= site_mask(q, strings[a].letter(q), strings[b].letter(q));
      }
      if (w == 0.0) {
        masked(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = 0.0;
        continue;
      }
      const std::complex<double> transfer =
          dense[a].conjugate().cwiseProduct(moved).sum() / static_cast<double>(dim);
      masked(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = w * transfer;
    }
  }

  StateVector psi = basis_state(n, 0);
  for (const auto& [q, g] : prep.gates) apply_single_qubit_gate(psi, q, g);
  const Eigen::MatrixXcd rho0 = psi.amps * psi.amps.adjoint();
  Eigen::VectorXcd coeffs(n_strings);
  for (std::size_t a = 0; a < n_strings; ++a) {
    coeffs[static_cast<Eigen::Index>(a)] = dense[a].conjugate().cwiseProduct(rho0).sum();
  }
  for (long long seg = 0; seg < r; ++seg) coeffs = (masked * coeffs).eval();

  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
  for (std::size_t a = 0; a < n_strings; ++a) {
    rho += coeffs[static_cast<Eigen::Index>(a)] / static_cast<double>(dim) * dense[a];
  }

  // Undo the prep on the density matrix and read the all-zero probability.
  for (const auto& [q, g] : prep.gates) {
    const Eigen::Matrix2cd a = g.adjoint();
    apply_single_qubit_gate(rho, n, q, a);  // rho <- A rho
    rho.adjointInPlace();
    apply_single_qubit_gate(rho, n, q, a);
    rho.adjointInPlace();  // rho <- A rho A^dag
  }
  double p = 0;
  for (std::int64_t b = 0; b < dim; ++b) {
    if ((static_cast<std::uint64_t>(b) & cluster) == 0) p += rho(b, b).real();
  }
  return p;
}

}  // namespace hamlearn
