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
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "qport/portfolio.hpp"

namespace qport {

/// Largest qubit count accepted by exhaustive enumeration.
inline constexpr int kMaxEnumerationQubits = 24;

/// Assignment of n binary variables. Bit i of `bits` is x_i, which is also
/// qubit i and bit i of a statevector amplitude index. For a portfolio the
/// variable of asset u (0-based) and digit k (0-based, weight 2^k) sits at
/// i = u * w + k.
struct Bitstring {
  int n = 0;
  std::uint64_t bits = 0;

  bool operator[](int i) const { return (bits >> i) & 1U; }
  friend bool operator==(const Bitstring&, const Bitstring&) = default;
};

/// How bitstrings are rendered as text. Canonical writes x_0 first;
/// reversed writes x_{n-1} first (the usual little-endian register readout).
enum class BitOrder { canonical, reversed };

std::string to_string(const Bitstring& b, BitOrder order = BitOrder::canonical);
Bitstring parse_bitstring(std::string_view text,
                          BitOrder order = BitOrder::canonical);
BitOrder parse_bit_order(std::string_view name);

/// Strict weak order matching lexicographic comparison of canonical strings.
bool canonical_less(const Bitstring& a, const Bitstring& b);

/// Binary encoding z_u = sum_k 2^k x_{u*w+k}. Throws RangeError when some z_u
/// is outside [0, 2^w).
Bitstring encode_z(std::span<const int> z, int slices);
std::vector<int> decode_z(const Bitstring& x, int slices);

/// min_x sum_i q_i x_i + sum_{i,j} Q_ij x_i x_j + gamma. Q is kept as a full
/// matrix (diagonal included) and summed over all ordered pairs.
struct QuboModel {
  int n = 0;
  Eigen::VectorXd q;
  Eigen::MatrixXd Q;
  double gamma = 0.0;
};

double qubo_value(const QuboModel& model, const Bitstring& x);

/// Exact ground state found by enumeration.
struct GroundState {
  double energy = 0.0;
  Bitstring bits;
};

/// H = sum_i h_i s_i + sum_{i,j} J_ij s_i s_j + delta with s_i = 2 x_i - 1.
struct IsingModel {
  int n = 0;
  Eigen::VectorXd h;
  Eigen::MatrixXd J;
  double delta = 0.0;
  std::optional<GroundState> ground;
};

double ising_energy(const IsingModel& model, const Bitstring& x);

/// Energies of all 2^n basis states, indexed by bit pattern. O(2^n n).
std::vector<double> energy_table(const IsingModel& model);

/// QUBO whose value equals -objective(z(x)) for every bitstring x.
QuboModel build_qubo(const PortfolioInstance& instance,
                     const FinancialSummary& summary);

/// Ising model with ising_energy(x) == qubo_value(x) for every x. The ground
/// state is left empty; fill it with brute_force_ground.
IsingModel build_ising(const QuboModel& qubo);

/// Exact minimum energy and its arg-min. Ties go to the lexicographically
/// smallest canonical string. Throws CapacityError for n > 24.
GroundState brute_force_ground(const IsingModel& model);
GroundState brute_force_ground(std::span<const double> energies, int n);

/// Smallest positive distance between a distinct energy level and the ground
/// energy; 0 when the spectrum is flat.
double spectral_gap(std::span<const double> energies);

/// Everything derived from one portfolio instance.
struct Problem {
  PortfolioInstance instance;
  FinancialSummary summary;
  QuboModel qubo;
  IsingModel ising;  // ground state filled
};

/// summarize -> build_qubo -> build_ising -> brute_force_ground.
Problem make_problem(PortfolioInstance instance);

/// objective(z(x)) for one bitstring of `problem`.
double objective_of(const Problem& problem, const Bitstring& x);

/// max_z objective(z) over all 2^(m w) allocations, by enumeration.
double max_objective(const Problem& problem);

}  // namespace qport
