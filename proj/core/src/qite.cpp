// Copyright 2026 The qport Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "qport/qite.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qport/error.hpp"
#include "qport/rng.hpp"

namespace qport {

namespace {

int qubits_for_dim(std::size_t dim, const char* what) {
  if (dim < 2 || (dim & (dim - 1)) != 0) {
    throw ShapeError(std::string(what) + " dimension must be a power of two >= 2");
  }
  int n = 0;
  while ((std::size_t{1} << n) < dim) ++n;
  if (n > kMaxDilationQubits) {
    throw CapacityError("dense dilation supports at most " +
                        std::to_string(kMaxDilationQubits) + " system qubits");
  }
  return n;
}

void check_beta(double beta) {
  if (!(beta >= 0.0) || !std::isfinite(beta)) {
    throw ParameterError("beta must be finite and >= 0");
  }
}

double scale_factor(double beta, double lowest) {
  const double u = std::exp(beta * lowest);
  if (!std::isfinite(u) || u == 0.0) {
    throw RangeError("u = exp(beta * E_0) is out of range; rescale H or lower beta");
  }
  return u;
}

std::uint64_t split_shots(std::uint64_t shots, int parts, int index) {
  const auto p = static_cast<std::uint64_t>(parts);
  const auto i = static_cast<std::uint64_t>(index);
  return shots / p + (i < shots % p ? 1 : 0);
}

}  // namespace

Dilation build_dilation(const IsingModel& model, double beta) {
  check_beta(beta);
  if (model.n > kMaxDilationQubits) {
    throw CapacityError("dense dilation supports at most " +
                        std::to_string(kMaxDilationQubits) + " system qubits");
  }
  return build_dilation(energy_table(model), beta);
}

Dilation build_dilation(std::span<const double> energies, double beta) {
  check_beta(beta);
  const int n = qubits_for_dim(energies.size(), "energy table");
  const double lowest = *std::min_element(energies.begin(), energies.end());

  Dilation d;
  d.n = n;
  d.beta = beta;
  d.u = scale_factor(beta, lowest);
  d.energies.assign(energies.begin(), energies.end());

  const Eigen::Index dim = d.system_dim();
  d.U = Eigen::MatrixXcd::Zero(2 * dim, 2 * dim);
  for (Eigen::Index x = 0; x < dim; ++x) {
    const double t = beta * (energies[static_cast<std::size_t>(x)] - lowest);
    const double a = std::exp(-t);
    const double c = std::sqrt(-std::expm1(-2.0 * t));
    const double s = a >= c ? 1.0 : -1.0;
    d.U(x, x) = a;
    d.U(x + dim, x) = c;
    d.U(x, x + dim) = -s * c;
    d.U(x + dim, x + dim) = s * a;
  }
  return d;
}

Dilation build_dilation(const Eigen::MatrixXcd& hamiltonian, double beta) {
  check_beta(beta);
  if (hamiltonian.rows() != hamiltonian.cols()) {
    throw ShapeError("Hamiltonian must be square");
  }
  const int n = qubits_for_dim(static_cast<std::size_t>(hamiltonian.rows()),
                               "Hamiltonian");
  if ((hamiltonian - hamiltonian.adjoint()).cwiseAbs().maxCoeff() > 1e-12) {
    throw ParameterError("Hamiltonian must be Hermitian");
  }

  // e^{-beta H} is positive definite, so its SVD is the eigendecomposition
  // with singular values sorted by ascending eigenvalue.
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(hamiltonian);
  const Eigen::VectorXd& lambda = eig.eigenvalues();
  const Eigen::MatrixXcd& vecs = eig.eigenvectors();

  Dilation d;
  d.n = n;
  d.beta = beta;
  d.u = scale_factor(beta, lambda(0));

  const Eigen::Index dim = hamiltonian.rows();
  Eigen::VectorXd scaled(dim);
  Eigen::VectorXd comp(dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    const double t = beta * (lambda(i) - lambda(0));
    scaled(i) = std::exp(-t);
    comp(i) = std::sqrt(-std::expm1(-2.0 * t));
  }
  const Eigen::MatrixXcd top = vecs * scaled.asDiagonal() * vecs.adjoint();
  const Eigen::MatrixXcd lower = vecs * comp.asDiagonal() * vecs.adjoint();

  Eigen::MatrixXcd stacked(2 * dim, 2 * dim);
  const Eigen::MatrixXcd eye = Eigen::MatrixXcd::Identity(dim, dim);
  stacked << top, eye, lower, eye;

  const Eigen::HouseholderQR<Eigen::MatrixXcd> qr(stacked);
  Eigen::MatrixXcd q = qr.householderQ();
  const Eigen::MatrixXcd& packed = qr.matrixQR();
  for (Eigen::Index i = 0; i < 2 * dim; ++i) {
    const cplx r = packed(i, i);
    const double mag = std::abs(r);
    if (mag > 0.0) q.col(i) *= r / mag;
  }
  d.U = std::move(q);
  return d;
}

double default_beta(std::span<const double> energies) {
  const double gap = spectral_gap(energies);
  if (gap <= 0.0) return 5.0;
  return std::clamp(2.0 / gap, 0.1, 5.0);
}

std::string_view qite_mode_name(QiteMode mode) {
  return mode == QiteMode::exact ? "exact" : "compiled";
}

QiteMode parse_qite_mode(std::string_view name) {
  if (name == "exact") return QiteMode::exact;
  if (name == "compiled") return QiteMode::compiled;
  throw ParameterError("unknown QITE mode '" + std::string(name) + "'");
}

QiteResult apply_qite_exact(const Dilation& dilation, const StateVector& initial,
                            std::uint64_t shots, std::uint64_t seed) {
  if (initial.num_qubits() != dilation.n) {
    throw ShapeError("initial state width differs from the dilation");
  }
  const Eigen::Index dim = dilation.system_dim();
  const Eigen::Map<const Eigen::VectorXcd> psi(initial.amplitudes().data(), dim);
  const Eigen::VectorXcd kept = dilation.top_left() * psi;

  QiteResult r;
  r.mode = QiteMode::exact;
  r.beta = dilation.beta;
  r.u = dilation.u;
  r.success_probability = kept.squaredNorm();
  if (!(r.success_probability > 0.0)) {
    throw DegenerateRunError("post-selection success probability is 0");
  }

  std::vector<cplx> amps(kept.data(), kept.data() + dim);
  StateVector state = StateVector::from_amplitudes(std::move(amps));
  state.normalize();
  if (!dilation.energies.empty()) {
    r.energy = diagonal_expectation(dilation.energies, state);
  }
  r.histogram = Histogram{dilation.n, {}};
  if (shots > 0) r.histogram = sample_bitstrings(state, shots, seed);
  r.total_shots = shots;
  r.kept_shots = shots;
  r.state = std::move(state);
  return r;
}

QiteResult apply_qite_exact(const Dilation& dilation, std::uint64_t shots,
                            std::uint64_t seed) {
  return apply_qite_exact(dilation, StateVector::uniform(dilation.n), shots, seed);
}

double compile_cost(const Circuit& circuit, std::span<const double> params,
                    const Eigen::MatrixXcd& target) {
  const Eigen::Index dim = Eigen::Index{1} << circuit.num_qubits();
  if (target.rows() != dim || target.cols() != dim) {
    throw ShapeError("target unitary does not match the circuit width");
  }
  // Tr[V^dagger U] = sum_j <V e_j, U e_j>, one column at a time.
  std::vector<cplx> column(static_cast<std::size_t>(dim));
  cplx trace = 0.0;
  for (Eigen::Index j = 0; j < dim; ++j) {
    std::fill(column.begin(), column.end(), cplx{0.0});
    column[static_cast<std::size_t>(j)] = 1.0;
    for (const Gate& g : circuit.gates()) kernel::apply_gate(column, g, params);
    const Eigen::Map<const Eigen::VectorXcd> v(column.data(), dim);
    trace += v.dot(target.col(j));
  }
  return 1.0 - trace.real() / static_cast<double>(dim);
}

CompiledQite compile_qite_circuit(const Dilation& dilation, int layers,
                                  const OptimizerConfig& config,
                                  Entangler entangler,
                                  std::span<const double> initial,
                                  double threshold) {
  if (layers < 1 || layers > 12) throw ParameterError("layers must lie in [1, 12]");
  validate(config);
  CompiledQite out{build_layered_ansatz(dilation.n + 1, layers, entangler), 1.0, {},
                   false};
  const int count = out.circuit.num_parameters();

  std::vector<double> start;
  if (initial.empty()) {
    start = random_initial_params(count, config.seed);
  } else if (static_cast<int>(initial.size()) == count) {
    start.assign(initial.begin(), initial.end());
  } else {
    throw ShapeError("expected " + std::to_string(count) + " initial parameters");
  }

  const Circuit& ansatz = out.circuit;
  const CostFunction cost = [&](std::span<const double> p) {
    return compile_cost(ansatz, p, dilation.U);
  };
  out.trace = minimize(cost, start, config);
  out.cost = out.trace.best_value;
  out.circuit.bind(out.trace.best_params);
  out.converged = out.cost < threshold;
  return out;
}

QiteResult run_qite_compiled(const Circuit& circuit, const IsingModel& model,
                             const QiteRunConfig& config, std::uint64_t seed) {
  const int n = model.n;
  if (circuit.num_qubits() != n + 1) {
    throw ShapeError("compiled circuit must act on n + 1 qubits");
  }
  if (!circuit.is_bound()) throw BindingError("compiled circuit has unbound slots");
  if (config.shots < 1) throw ParameterError("shots must be >= 1");
  if (config.trajectories < 1) throw ParameterError("trajectories must be >= 1");
  validate(config.noise);

  const std::size_t dim = std::size_t{1} << n;
  std::vector<cplx> amps(2 * dim, cplx{0.0});
  std::fill(amps.begin(), amps.begin() + static_cast<std::ptrdiff_t>(dim),
            cplx{1.0 / std::sqrt(static_cast<double>(dim))});
  const StateVector start = StateVector::from_amplitudes(std::move(amps));
  const std::span<const double> params = circuit.parameters();

  Histogram full{n + 1, {}};
  if (!config.noise.noisy()) {
    const StateVector psi = simulate(circuit, params, start);
    sample_into(psi.probabilities(), config.shots, derive_seed(seed, 0), full);
  } else {
    for (int t = 0; t < config.trajectories; ++t) {
      const std::uint64_t part = split_shots(config.shots, config.trajectories, t);
      if (part == 0) continue;
      const auto k = static_cast<std::uint64_t>(t);
      const StateVector psi = run_trajectory(circuit, params, config.noise, start,
                                             derive_seed(seed, 2 * k + 1));
      sample_into(psi.probabilities(), part, derive_seed(seed, 2 * k + 2), full);
    }
  }

  QiteResult r;
  r.mode = QiteMode::compiled;
  r.histogram = Histogram{n, {}};
  for (const auto& [index, count] : full.counts) {
    if (index < dim) r.histogram.add(index, count);
  }
  r.total_shots = config.shots;
  r.kept_shots = r.histogram.total();
  if (r.kept_shots == 0) {
    throw DegenerateRunError("every shot was discarded by post-selection");
  }
  r.success_probability =
      static_cast<double>(r.kept_shots) / static_cast<double>(r.total_shots);
  r.energy = histogram_expectation(energy_table(model), r.histogram);
  return r;
}

}  // namespace qport
