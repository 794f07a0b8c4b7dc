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
#include <vector>

#include "qport/circuit.hpp"
#include "qport/encoding.hpp"
#include "qport/noise.hpp"
#include "qport/optimizer.hpp"
#include "qport/simulator.hpp"

namespace qport {

/// Which scalar the optimizer sees.
enum class QaoaCostForm {
  shifted,  // |E_g - <H>|
  raw,      // <H> - delta
};

struct QaoaConfig {
  int layers = 2;
  /// Shots per energy estimate; nullopt evaluates <H> exactly from the
  /// noiseless statevector.
  std::optional<int> shots = 4096;
  NoiseModel noise{};
  OptimizerConfig optimizer{};
  /// Noise trajectories per cost evaluation; shots are split evenly.
  int trajectories_per_eval = 1;
  Entangler entangler = Entangler::ecr;
  QaoaCostForm cost_form = QaoaCostForm::shifted;
  int final_shots = 8192;
  /// Trajectories behind the final histogram when the noise model is active.
  int final_trajectories = 64;

  bool exact() const { return !shots.has_value(); }
};

void validate(const QaoaConfig& config);

/// Prepared energy landscape and ansatz shared by every cost evaluation.
class QaoaProblem {
 public:
  QaoaProblem(const IsingModel& model, const QaoaConfig& config);

  const Circuit& ansatz() const { return ansatz_; }
  std::span<const double> energies() const { return energies_; }
  double ground_energy() const { return ground_energy_; }
  double delta() const { return delta_; }
  /// E_g - delta, computed without the offset.
  double ground_shift() const { return ground_shift_; }
  const QaoaConfig& config() const { return config_; }

  /// Energy estimate for one parameter vector: exact <H> in exact mode,
  /// otherwise the shot mean over `trajectories_per_eval` trajectories.
  /// `eval_seed` fixes all randomness of this evaluation.
  double energy(std::span<const double> params, std::uint64_t eval_seed) const;

  /// <H> - E_g, evaluated on offset-free energies so that delta cancels
  /// exactly rather than up to rounding.
  double excess_energy(std::span<const double> params, std::uint64_t eval_seed) const;

  /// Cost seen by the optimizer.
  double cost(std::span<const double> params, std::uint64_t eval_seed) const;

  /// Final-state histogram at `params`.
  Histogram final_histogram(std::span<const double> params,
                            std::uint64_t seed) const;

 private:
  QaoaConfig config_;
  Circuit ansatz_;
  std::vector<double> energies_;
  std::vector<double> excess_;  // E_x - E_g without the offset
  double ground_energy_;
  double ground_shift_;         // E_g - delta
  double delta_;
};

/// C(s) = |E_g - <psi(s)|H|psi(s)>| with |psi(s)> = V(s)|0...0>. Throws
/// ConfigurationError when the model has no ground state recorded.
double qaoa_cost(std::span<const double> params, const IsingModel& model,
                 const QaoaConfig& config, std::uint64_t eval_seed = 0);

struct QaoaResult {
  OptTrace trace;
  double min_energy_deviation = 0.0;
  Histogram histogram;
  std::vector<double> best_params;
  std::vector<double> initial_params;
};

/// Minimizes the cost from random initial angles, then samples the final
/// histogram at the best parameters.
QaoaResult solve_qaoa(const IsingModel& model, const QaoaConfig& config,
                      std::uint64_t seed);

}  // namespace qport
