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


#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "qport/circuit.hpp"
#include "qport/encoding.hpp"
#include "qport/noise.hpp"
#include "qport/optimizer.hpp"
#include "qport/simulator.hpp"

namespace qport {

/// Largest system register for a dense dilation (the unitary is
/// 2^(n+1) x 2^(n+1)).
inline constexpr int kMaxDilationQubits = 13;

/// Unitary U on n system qubits plus one ancilla (the highest qubit) whose
/// first block column is [u e^{-beta H}; C]:
///
///   U (|psi> (x) |0>) = (u e^{-beta H}|psi>) (x) |0> + (C|psi>) (x) |1>.
struct Dilation {
  int n = 0;
  double beta = 0.0;
  double u = 1.0;
  Eigen::MatrixXcd U;
  /// Diagonal of H when built from an Ising model; empty otherwise.
  std::vector<double> energies;

  Eigen::Index system_dim() const { return Eigen::Index{1} << n; }
  /// u e^{-beta H}.
  auto top_left() const { return U.topLeftCorner(system_dim(), system_dim()); }
  /// C.
  auto lower_left() const { return U.bottomLeftCorner(system_dim(), system_dim()); }
};

/// Dilation of e^{-beta H} for the diagonal Ising Hamiltonian. Each basis
/// state x contributes the 2x2 block [[a, -s c], [c, s a]] on rows/columns
/// (x, x + 2^n), with a = e^{-beta (E_x - E_0)}, c = sqrt(1 - a^2) and
/// s = +1 when a >= c, else -1. This is the orthonormal QR factor of
/// [[u e^{-beta H}, I], [C, I]] with a positive triangular diagonal.
///
/// Throws ParameterError for beta < 0, CapacityError for n > 13 and
/// RangeError when u = e^{beta E_0} over- or underflows.
Dilation build_dilation(const IsingModel& model, double beta);
/// Same for a diagonal Hamiltonian given by its energy table.
Dilation build_dilation(std::span<const double> energies, double beta);

/// General Hermitian path: eigendecomposition, SVD of e^{-beta H},
/// C = A sqrt(I - u^2 S^2) E^dagger and a Householder QR of the stacked
/// matrix with the R diagonal forced positive.
Dilation build_dilation(const Eigen::MatrixXcd& hamiltonian, double beta);

/// beta = 2 / gap clamped to [0.1, 5]; 5 when the spectrum is flat.
double default_beta(std::span<const double> energies);

enum class QiteMode { exact, compiled };
std::string_view qite_mode_name(QiteMode mode);
QiteMode parse_qite_mode(std::string_view name);

struct QiteResult {
  QiteMode mode = QiteMode::exact;
  double beta = 0.0;
  double u = 1.0;
  /// Post-selected counts over system bitstrings.
  Histogram histogram;
  double success_probability = 0.0;
  /// <H> in the post-selected state (exact) or over kept shots (compiled).
  double energy = 0.0;
  std::optional<double> compile_cost;
  std::uint64_t total_shots = 0;
  std::uint64_t kept_shots = 0;
  /// Normalized post-selected system state; exact mode only.
  std::optional<StateVector> state;
};

/// Applies U to |psi> (x) |0>, projects the ancilla on |0> and samples
/// `shots` system bitstrings from the normalized branch. success_probability
/// is ||u e^{-beta H} psi||^2. `energy` needs the Ising energies; for the
/// general path it is left at 0. Throws DegenerateRunError when the kept
/// branch vanishes.
QiteResult apply_qite_exact(const Dilation& dilation, const StateVector& initial,
                            std::uint64_t shots, std::uint64_t seed);
/// Default initial state: uniform superposition over the system qubits.
QiteResult apply_qite_exact(const Dilation& dilation, std::uint64_t shots,
                            std::uint64_t seed);

/// 1 - Re Tr[V^dagger U] / dim for the circuit at `params`.
double compile_cost(const Circuit& circuit, std::span<const double> params,
                    const Eigen::MatrixXcd& target);

struct CompiledQite {
  Circuit circuit;  // parameters bound to the best point
  double cost = 1.0;
  OptTrace trace;
  bool converged = false;  // cost < threshold
};

inline constexpr double kCompileThreshold = 0.1;

/// Trains build_layered_ansatz(n + 1, layers, entangler) so that V
/// approximates U. Starts from `initial` when given, else from random angles
/// drawn with config.seed. Non-convergence is reported through `converged`.
CompiledQite compile_qite_circuit(const Dilation& dilation, int layers,
                                  const OptimizerConfig& config,
                                  Entangler entangler = Entangler::ecr,
                                  std::span<const double> initial = {},
                                  double threshold = kCompileThreshold);

struct QiteRunConfig {
  std::uint64_t shots = 8192;
  NoiseModel noise{};
  /// Trajectories over which the shots are split when the noise is active.
  int trajectories = 64;
};

/// Prepares uniform system qubits with the ancilla in |0>, runs the bound
/// circuit under the noise model, measures every qubit and keeps the shots
/// whose ancilla reads 0. Throws DegenerateRunError when none survive.
QiteResult run_qite_compiled(const Circuit& circuit, const IsingModel& model,
                             const QiteRunConfig& config, std::uint64_t seed);

}  // namespace qport
