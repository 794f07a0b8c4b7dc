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
#include <functional>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

namespace qport {

enum class Algorithm { cobyla, nelder_mead };

std::string_view algorithm_name(Algorithm a);
Algorithm parse_algorithm(std::string_view name);

struct OptimizerConfig {
  Algorithm algorithm = Algorithm::cobyla;
  int max_evals = 1000;
  double rho_begin = 0.5;  // radians
  double rho_end = 1e-4;
  std::uint64_t seed = 0;
};

void validate(const OptimizerConfig& config);

struct Evaluation {
  int iteration = 0;  // 0-based call index
  std::vector<double> params;
  double cost = 0.0;
};

enum class StopReason { max_evals, converged };

struct OptTrace {
  std::vector<Evaluation> evaluations;
  double best_value = 0.0;
  std::vector<double> best_params;
  StopReason stop = StopReason::max_evals;

  /// best_so_far[i] = min of the first i+1 costs.
  std::vector<double> running_best() const;
};

using CostFunction = std::function<double(std::span<const double>)>;

/// Sequential derivative-free minimization. Every call to `cost` is recorded
/// in order. Stops after `max_evals` evaluations or once the trust radius
/// (cobyla) / simplex size (nelder_mead) falls below rho_end.
///
/// Throws EvaluationError if `cost` returns NaN or infinity.
OptTrace minimize(const CostFunction& cost, std::span<const double> initial,
                  const OptimizerConfig& config);

/// `count` values uniform in [0, 2 pi), deterministic in `seed`.
std::vector<double> random_initial_params(int count, std::uint64_t seed);

/// CSV with header `i,cost,best_so_far`.
void write_trace_csv(const OptTrace& trace, std::ostream& out);

}  // namespace qport
