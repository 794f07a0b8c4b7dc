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

#include "qport/noise.hpp"

#include "qport/error.hpp"
#include "qport/rng.hpp"

namespace qport {

std::string_view noise_kind_name(NoiseKind kind) {
  switch (kind) {
    case NoiseKind::none: return "none";
    case NoiseKind::cx_x_flip: return "cx_x_flip";
    case NoiseKind::cx_depolarizing: return "cx_depolarizing";
  }
  return "?";
}

NoiseKind parse_noise_kind(std::string_view name) {
  if (name == "none") return NoiseKind::none;
  if (name == "cx_x_flip") return NoiseKind::cx_x_flip;
  if (name == "cx_depolarizing") return NoiseKind::cx_depolarizing;
  throw ParameterError("unknown noise kind '" + std::string(name) + "'");
}

void validate(const NoiseModel& noise) {
  if (!(noise.error_rate >= 0.0 && noise.error_rate <= 1.0)) {
    throw ParameterError("error rate must lie in [0, 1]");
  }
}

namespace {

class NoisyExecutor {
 public:
  NoisyExecutor(std::span<cplx> amps, const NoiseModel& noise, std::uint64_t seed)
      : amps_(amps), noise_(noise), rng_(seed) {}

  void cx(int control, int target) {
    kernel::apply_cx(amps_, control, target);
    if (!noise_.noisy()) return;
    if (rng_.uniform() >= noise_.error_rate) return;
    if (noise_.kind == NoiseKind::cx_x_flip) {
      kernel::apply_x(amps_, target);
    } else {
      const auto k = static_cast<int>(1 + rng_.below(15));
      kernel::apply_pauli(amps_, control, k / 4);
      kernel::apply_pauli(amps_, target, k % 4);
    }
  }

  void ecr(int first, int second) {
    static const Matrix2 h = h_matrix();
    static const Matrix2 sdg = sdg_matrix();
    kernel::apply_1q(amps_, first, h);
    kernel::apply_x(amps_, second);
    cx(first, second);
    kernel::apply_1q(amps_, second, sdg);
    cx(first, second);
    kernel::apply_1q(amps_, first, h);
  }

 private:
  std::span<cplx> amps_;
  const NoiseModel& noise_;
  Rng rng_;
};

}  // namespace

StateVector run_trajectory(const Circuit& circuit, std::span<const double> params,
                           const NoiseModel& noise, StateVector initial,
                           std::uint64_t seed) {
  validate(noise);
  if (initial.num_qubits() != circuit.num_qubits()) {
    throw ShapeError("initial state size differs from the circuit width");
  }
  if (static_cast<int>(params.size()) < circuit.num_parameters()) {
    throw BindingError("circuit has unbound parameter slots");
  }
  NoisyExecutor exec(initial.amplitudes(), noise, seed);
  for (const Gate& g : circuit.gates()) {
    switch (g.kind) {
      case GateKind::cx:
        exec.cx(g.q0, g.q1);
        break;
      case GateKind::ecr:
        exec.ecr(g.q0, g.q1);
        break;
      default:
        kernel::apply_gate(initial.amplitudes(), g, params);
    }
  }
  return initial;
}

}  // namespace qport
