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

#include "qport/circuit.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "qport/error.hpp"

namespace qport {

std::string_view gate_name(GateKind kind) {
  switch (kind) {
    case GateKind::u3: return "u3";
    case GateKind::x: return "x";
    case GateKind::h: return "h";
    case GateKind::sdg: return "sdg";
    case GateKind::cx: return "cx";
    case GateKind::ecr: return "ecr";
  }
  return "?";
}

Matrix2 u3_matrix(double theta, double phi, double lambda) {
  const double c = std::cos(theta / 2.0);
  const double s = std::sin(theta / 2.0);
  return {cplx(c, 0.0), -std::polar(s, lambda), std::polar(s, phi),
          std::polar(c, phi + lambda)};
}

Matrix2 x_matrix() { return {0.0, 1.0, 1.0, 0.0}; }

Matrix2 h_matrix() {
  const double r = std::numbers::sqrt2 / 2.0;
  return {r, r, r, -r};
}

Matrix2 sdg_matrix() { return {1.0, 0.0, 0.0, cplx(0.0, -1.0)}; }

Matrix4 cx_matrix() {
  return {1, 0, 0, 0,  //
          0, 1, 0, 0,  //
          0, 0, 0, 1,  //
          0, 0, 1, 0};
}

Matrix4 ecr_matrix() {
  const double r = std::numbers::sqrt2 / 2.0;
  const cplx i(0.0, r);
  const cplx o(r, 0.0);
  const cplx z(0.0, 0.0);
  return {z, o, z, i,   //
          o, z, -i, z,  //
          z, i, z, o,   //
          -i, z, o, z};
}

Entangler parse_entangler(std::string_view name) {
  if (name == "ecr") return Entangler::ecr;
  if (name == "cx") return Entangler::cx;
  throw ParameterError("entangler must be 'ecr' or 'cx'");
}

std::string_view entangler_name(Entangler e) {
  return e == Entangler::ecr ? "ecr" : "cx";
}

Circuit::Circuit(int num_qubits) : num_qubits_(num_qubits) {
  if (num_qubits < 1) throw ParameterError("a circuit needs at least one qubit");
}

void Circuit::check_qubit(int q) const {
  if (q < 0 || q >= num_qubits_) {
    throw RangeError("qubit index " + std::to_string(q) + " out of range for " +
                     std::to_string(num_qubits_) + " qubits");
  }
}

void Circuit::add(const Gate& gate) {
  check_qubit(gate.q0);
  if (gate.two_qubit()) {
    check_qubit(gate.q1);
    if (gate.q0 == gate.q1) throw RangeError("two-qubit gate on a single qubit");
  }
  if (gate.slot >= 0 &&
      (gate.kind != GateKind::u3 || gate.slot + 3 > num_parameters())) {
    throw BindingError("gate references a parameter slot that does not exist");
  }
  gates_.push_back(gate);
}

void Circuit::u3(int q, double theta, double phi, double lambda) {
  add({GateKind::u3, q, -1, -1, {theta, phi, lambda}});
}

int Circuit::u3_variational(int q, const std::string& prefix) {
  const int first = num_parameters();
  for (const char* suffix : {".theta", ".phi", ".lambda"}) {
    names_.push_back(prefix + suffix);
    values_.push_back(std::numeric_limits<double>::quiet_NaN());
  }
  add({GateKind::u3, q, -1, first, {}});
  return first;
}

void Circuit::bind(std::span<const double> values) {
  if (values.size() != values_.size()) {
    throw ShapeError("expected " + std::to_string(values_.size()) +
                     " parameter values, got " + std::to_string(values.size()));
  }
  values_.assign(values.begin(), values.end());
}

bool Circuit::is_bound() const {
  for (double v : values_) {
    if (std::isnan(v)) return false;
  }
  return true;
}

int Circuit::count(GateKind kind) const {
  int c = 0;
  for (const Gate& g : gates_) c += g.kind == kind ? 1 : 0;
  return c;
}

const cplx& ecr_fragment_phase() {
  static const cplx phase = std::polar(1.0, -std::numbers::pi / 4.0);
  return phase;
}

Circuit ecr_decomposition() {
  Circuit c(2);
  c.h(0);
  c.x(1);
  c.cx(0, 1);
  c.sdg(1);
  c.cx(0, 1);
  c.h(0);
  return c;
}

Circuit build_layered_ansatz(int num_qubits, int layers, Entangler entangler) {
  if (layers < 1) throw ParameterError("ansatz needs at least one layer");
  Circuit c(num_qubits);
  for (int l = 0; l < layers; ++l) {
    for (int q = 0; q < num_qubits; ++q) {
      c.u3_variational(q, "l" + std::to_string(l) + ".q" + std::to_string(q));
    }
    for (int q = 0; q + 1 < num_qubits; ++q) {
      if (entangler == Entangler::ecr) {
        c.ecr(q, q + 1);
      } else {
        c.cx(q, q + 1);
      }
    }
  }
  return c;
}

}  // namespace qport
