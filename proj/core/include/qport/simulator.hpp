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
#include <map>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qport/circuit.hpp"
#include "qport/encoding.hpp"

namespace qport {

/// Largest register the dense simulator will allocate.
inline constexpr int kMaxStateQubits = 26;

/// Dense vector of 2^n amplitudes. Qubit q is bit q of the amplitude index.
class StateVector {
 public:
  /// |0...0>.
  explicit StateVector(int num_qubits);

  static StateVector basis(int num_qubits, std::uint64_t index);
  /// H^{(x)n}|0...0>.
  static StateVector uniform(int num_qubits);
  /// Takes ownership of `amplitudes`; length must be a power of two. The
  /// vector is not renormalized.
  static StateVector from_amplitudes(std::vector<cplx> amplitudes);

  int num_qubits() const { return num_qubits_; }
  std::size_t dim() const { return amps_.size(); }

  std::span<cplx> amplitudes() { return amps_; }
  std::span<const cplx> amplitudes() const { return amps_; }
  cplx operator[](std::size_t i) const { return amps_[i]; }

  double norm_squared() const;
  void normalize();
  std::vector<double> probabilities() const;

 private:
  int num_qubits_;
  std::vector<cplx> amps_;
};

/// |<a|b>|^2 for normalized inputs.
double fidelity(const StateVector& a, const StateVector& b);

// Kernels over raw amplitude arrays of length 2^n.
namespace kernel {
void apply_1q(std::span<cplx> amps, int q, const Matrix2& m);
void apply_x(std::span<cplx> amps, int q);
void apply_cx(std::span<cplx> amps, int control, int target);
/// Local index 2*bit(q0) + bit(q1).
void apply_2q(std::span<cplx> amps, int q0, int q1, const Matrix4& m);
/// Pauli 0..3 = I, X, Y, Z.
void apply_pauli(std::span<cplx> amps, int q, int pauli);
/// Applies `gate` reading variational angles from `params`.
void apply_gate(std::span<cplx> amps, const Gate& gate,
                std::span<const double> params);
}  // namespace kernel

/// Applies one gate in place. Variational gates read their three angles from
/// `params`; a missing or NaN slot raises BindingError.
void apply_gate(StateVector& state, const Gate& gate,
                std::span<const double> params = {});

/// Noiseless evolution of `initial` under the circuit. ECR gates use the
/// ECR matrix directly.
StateVector simulate(const Circuit& circuit, std::span<const double> params,
                     StateVector initial);
/// Same, using the parameters bound on the circuit.
StateVector simulate(const Circuit& circuit, StateVector initial);

/// Dense 2^n x 2^n matrix of the circuit, column by column.
Eigen::MatrixXcd circuit_unitary(const Circuit& circuit,
                                 std::span<const double> params);

/// Measurement counts keyed by basis index.
struct Histogram {
  int num_qubits = 0;
  std::map<std::uint64_t, std::uint64_t> counts;

  std::uint64_t total() const;
  bool empty() const { return counts.empty(); }
  /// Most frequent bitstring; ties go to the canonical-lexicographic smallest.
  /// Throws DegenerateRunError when empty.
  Bitstring mode() const;
  void add(std::uint64_t index, std::uint64_t count = 1);
  void merge(const Histogram& other);
  double frequency(std::uint64_t index) const;
};

/// Draws `shots` independent outcomes from a probability vector (need not be
/// exactly normalized) and adds them to `into`.
void sample_into(std::span<const double> probabilities, std::uint64_t shots,
                 std::uint64_t seed, Histogram& into);

/// Multinomial sample of computational-basis measurements.
Histogram sample_bitstrings(const StateVector& state, std::uint64_t shots,
                            std::uint64_t seed);

/// <psi|H|psi> for a diagonal Hamiltonian given by its energy table.
double diagonal_expectation(std::span<const double> energies,
                            const StateVector& state);
double diagonal_expectation(const IsingModel& model, const StateVector& state);

/// Mean energy over the shots of a histogram.
double histogram_expectation(std::span<const double> energies,
                             const Histogram& histogram);

}  // namespace qport
