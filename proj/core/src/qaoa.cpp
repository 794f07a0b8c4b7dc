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

#include "qport/qaoa.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qport/error.hpp"
#include "qport/rng.hpp"

namespace qport {

namespace {

// Stream indices under a run seed.
constexpr std::uint64_t kInitStream = 0;
constexpr std::uint64_t kEvalStream = 1;
constexpr std::uint64_t kFinalStream = 2;

std::uint64_t split_shots(std::uint64_t shots, int parts, int index) {
  const auto p = static_cast<std::uint64_t>(parts);
  const auto i = static_cast<std::uint64_t>(index);
  return shots / p + (i < shots % p ? 1 : 0);
}

}  // namespace

void validate(const QaoaConfig& config) {
  if (config.layers < 1) throw ParameterError("layers must be >= 1");
  if (config.shots && *config.shots < 1) throw ParameterError("shots must be >= 1");
  if (config.trajectories_per_eval < 1) {
    throw ParameterError("trajectories_per_eval must be >= 1");
  }
  if (config.final_shots < 1 || config.final_trajectories < 1) {
    throw ParameterError("final_shots and final_trajectories must be >= 1");
  }
  validate(config.noise);
  validate(config.optimizer);
}

QaoaProblem::QaoaProblem(const IsingModel& model, const QaoaConfig& config)
    : config_(config),
      ansatz_(build_layered_ansatz(model.n, config.layers, config.entangler)),
      ground_energy_(0.0),
      ground_shift_(0.0),
      delta_(model.delta) {
  validate(config);
  if (!model.ground) {
    throw ConfigurationError(
        "ground energy missing; run brute_force_ground on the model first");
  }
  ground_energy_ = model.ground->energy;

  IsingModel bare = model;
  bare.delta = 0.0;
  excess_ = energy_table(bare);
  ground_shift_ = excess_[model.ground->bits.bits];
  energies_.resize(excess_.size());
  for (std::size_t x = 0; x < excess_.size(); ++x) {
    energies_[x] = excess_[x] + delta_;
    excess_[x] -= ground_shift_;
  }
}

double QaoaProblem::energy(std::span<const double> params,
                           std::uint64_t eval_seed) const {
  return excess_energy(params, eval_seed) + ground_energy_;
}

double QaoaProblem::excess_energy(std::span<const double> params,
                                  std::uint64_t eval_seed) const {
  if (static_cast<int>(params.size()) != ansatz_.num_parameters()) {
    throw ShapeError("expected " + std::to_string(ansatz_.num_parameters()) +
                     " parameters, got " + std::to_string(params.size()));
  }
  const int n = ansatz_.num_qubits();
  const int trajectories = config_.noise.noisy() ? config_.trajectories_per_eval : 1;

  if (config_.exact()) {
    if (!config_.noise.noisy()) {
      return diagonal_expectation(excess_, simulate(ansatz_, params, StateVector(n)));
    }
    double sum = 0.0;
    for (int t = 0; t < trajectories; ++t) {
      const StateVector psi = run_trajectory(ansatz_, params, config_.noise,
                                             StateVector(n), derive_seed(eval_seed, t));
      sum += diagonal_expectation(excess_, psi);
    }
    return sum / trajectories;
  }

  const auto shots = static_cast<std::uint64_t>(*config_.shots);
  Histogram h{n, {}};
  for (int t = 0; t < trajectories; ++t) {
    const std::uint64_t part = split_shots(shots, trajectories, t);
    if (part == 0) continue;
    const StateVector psi =
        run_trajectory(ansatz_, params, config_.noise, StateVector(n),
                       derive_seed(eval_seed, 2 * static_cast<std::uint64_t>(t)));
    sample_into(psi.probabilities(), part,
                derive_seed(eval_seed, 2 * static_cast<std::uint64_t>(t) + 1), h);
  }
  return histogram_expectation(excess_, h);
}

double QaoaProblem::cost(std::span<const double> params,
                         std::uint64_t eval_seed) const {
  const double excess = excess_energy(params, eval_seed);
  return config_.cost_form == QaoaCostForm::shifted ? std::abs(excess)
                                                     : excess + ground_shift_;
}

Histogram QaoaProblem::final_histogram(std::span<const double> params,
                                       std::uint64_t seed) const {
  const int n = ansatz_.num_qubits();
  const auto shots = static_cast<std::uint64_t>(config_.final_shots);
  Histogram h{n, {}};
  if (!config_.noise.noisy()) {
    const StateVector psi = simulate(ansatz_, params, StateVector(n));
    sample_into(psi.probabilities(), shots, derive_seed(seed, 0), h);
    return h;
  }
  const int trajectories = config_.final_trajectories;
  for (int t = 0; t < trajectories; ++t) {
    const std::uint64_t part = split_shots(shots, trajectories, t);
    if (part == 0) continue;
    const StateVector psi =
        run_trajectory(ansatz_, params, config_.noise, StateVector(n),
                       derive_seed(seed, 2 * static_cast<std::uint64_t>(t) + 1));
    sample_into(psi.probabilities(), part,
                derive_seed(seed, 2 * static_cast<std::uint64_t>(t) + 2), h);
  }
  return h;
}

double qaoa_cost(std::span<const double> params, const IsingModel& model,
                 const QaoaConfig& config, std::uint64_t eval_seed) {
  return QaoaProblem(model, config).cost(params, eval_seed);
}

QaoaResult solve_qaoa(const IsingModel& model, const QaoaConfig& config,
                      std::uint64_t seed) {
  const QaoaProblem problem(model, config);
  QaoaResult result;
  result.initial_params = random_initial_params(problem.ansatz().num_parameters(),
                                                derive_seed(seed, kInitStream));

  const std::uint64_t eval_root = derive_seed(seed, kEvalStream);
  std::uint64_t eval_index = 0;
  double min_dev = std::numeric_limits<double>::infinity();
  const CostFunction cost = [&](std::span<const double> params) {
    const double excess =
        problem.excess_energy(params, derive_seed(eval_root, eval_index++));
    min_dev = std::min(min_dev, std::abs(excess));
    return config.cost_form == QaoaCostForm::shifted
               ? std::abs(excess)
               : excess + problem.ground_shift();
  };

  result.trace = minimize(cost, result.initial_params, config.optimizer);
  result.min_energy_deviation = min_dev;
  result.best_params = result.trace.best_params;
  result.histogram =
      problem.final_histogram(result.best_params, derive_seed(seed, kFinalStream));
  return result;
}

}  // namespace qport
