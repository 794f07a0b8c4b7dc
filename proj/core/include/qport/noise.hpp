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
#include <span>
#include <string>
#include <string_view>

#include "qport/circuit.hpp"
#include "qport/simulator.hpp"

namespace qport {

/// Stochastic two-qubit-gate error channels.
///
///  - cx_x_flip: after every CX, X on the target with probability p.
///  - cx_depolarizing: after every CX, with probability p one of the 15
///    non-identity Paulis on (control, target), uniformly.
enum class NoiseKind { none, cx_x_flip, cx_depolarizing };

struct NoiseModel {
  NoiseKind kind = NoiseKind::none;
  double error_rate = 0.0;
  std::uint64_t seed = 0;

  bool noisy() const { return kind != NoiseKind::none; }
};

std::string_view noise_kind_name(NoiseKind kind);
NoiseKind parse_noise_kind(std::string_view name);
/// Throws ParameterError unless error_rate lies in [0, 1].
void validate(const NoiseModel& noise);

/// One Monte-Carlo trajectory of `circuit` from `initial`.
///
/// Every ECR is lowered to the CX fragment of ecr_decomposition(), so noise
/// also strikes the two CXs inside each ECR. The result is a deterministic
/// function of (circuit, params, noise kind and rate, initial, seed); with
/// p = 0 it is bit-identical to NoiseKind::none.
StateVector run_trajectory(const Circuit& circuit, std::span<const double> params,
                           const NoiseModel& noise, StateVector initial,
                           std::uint64_t seed);

}  // namespace qport
