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

#include <array>
#include <complex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qport {

using cplx = std::complex<double>;

/// Row-major 2x2 and 4x4 gate matrices.
using Matrix2 = std::array<cplx, 4>;
using Matrix4 = std::array<cplx, 16>;

enum class GateKind { u3, x, h, sdg, cx, ecr };

std::string_view gate_name(GateKind kind);

/// One gate of a circuit.
///
/// Two-qubit gates act on the local basis |q0 q1> with index 2*bit(q0) +
/// bit(q1): for CX q0 is the control and q1 the target; for ECR q0 is the
/// first tensor factor of the textbook matrix.
struct Gate {
  GateKind kind = GateKind::x;
  int q0 = 0;
  int q1 = -1;
  /// First of three consecutive parameter slots (theta, phi, lambda) for a
  /// variational U3; -1 means the gate uses `angles`.
  int slot = -1;
  std::array<double, 3> angles{};

  bool two_qubit() const { return kind == GateKind::cx || kind == GateKind::ecr; }
  bool parameterized() const { return slot >= 0; }
};

/// U3(theta, phi, lambda) =
///   [[cos(t/2), -e^{i l} sin(t/2)], [e^{i p} sin(t/2), e^{i(p+l)} cos(t/2)]]
Matrix2 u3_matrix(double theta, double phi, double lambda);
Matrix2 x_matrix();
Matrix2 h_matrix();
Matrix2 sdg_matrix();
Matrix4 cx_matrix();
/// (1/sqrt2) [[0,1,0,i],[1,0,-i,0],[0,i,0,1],[-i,0,1,0]]
Matrix4 ecr_matrix();

/// Two-qubit entangler used by the layered ansatz.
enum class Entangler { ecr, cx };
Entangler parse_entangler(std::string_view name);
std::string_view entangler_name(Entangler e);

/// Ordered gate list over n qubits with named real parameter slots.
class Circuit {
 public:
  explicit Circuit(int num_qubits);

  int num_qubits() const { return num_qubits_; }
  std::span<const Gate> gates() const { return gates_; }
  std::size_t size() const { return gates_.size(); }

  /// Appends a fixed gate after validating its qubit indices.
  void add(const Gate& gate);
  void x(int q) { add({GateKind::x, q}); }
  void h(int q) { add({GateKind::h, q}); }
  void sdg(int q) { add({GateKind::sdg, q}); }
  void cx(int control, int target) { add({GateKind::cx, control, target}); }
  void ecr(int first, int second) { add({GateKind::ecr, first, second}); }
  void u3(int q, double theta, double phi, double lambda);
  /// Appends a U3 on `q` reading three fresh slots named
  /// `<prefix>.theta`, `<prefix>.phi`, `<prefix>.lambda`; returns the first.
  int u3_variational(int q, const std::string& prefix);

  int num_parameters() const { return static_cast<int>(names_.size()); }
  const std::vector<std::string>& parameter_names() const { return names_; }

  /// Current slot values; unbound slots hold NaN.
  std::span<const double> parameters() const { return values_; }
  /// Throws ShapeError unless `values` has one entry per slot.
  void bind(std::span<const double> values);
  bool is_bound() const;

  /// Number of gates of the given kind.
  int count(GateKind kind) const;

 private:
  void check_qubit(int q) const;

  int num_qubits_;
  std::vector<Gate> gates_;
  std::vector<std::string> names_;
  std::vector<double> values_;
};

/// Global phase relating the CX fragment of ecr_decomposition() to the ECR
/// matrix: fragment = kEcrFragmentPhase * ECR.
const cplx& ecr_fragment_phase();

/// Two-qubit fragment realizing ECR(0, 1) with exactly two CX gates:
/// H(0) X(1), CX(0,1), Sdg(1), CX(0,1), H(0) in time order. In operator form
/// this is (H x I) CX (I x Sdg) CX (H x X) with the rightmost factor first,
/// the first tensor factor on qubit 0 and qubit 0 as CX control.
Circuit ecr_decomposition();

/// L layers of one variational U3 per qubit followed by entanglers on
/// (0,1), (1,2), ..., (n-2,n-1). Exposes 3 n L parameter slots.
Circuit build_layered_ansatz(int num_qubits, int layers,
                             Entangler entangler = Entangler::ecr);

}  // namespace qport
