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
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qport/encoding.hpp"
#include "qport/noise.hpp"
#include "qport/optimizer.hpp"
#include "qport/qaoa.hpp"
#include "qport/qite.hpp"
#include "qport/simulator.hpp"

namespace qport {

/// How a measured distribution becomes one return number.
enum class ReturnMode { expectation, argmax };

std::string_view return_mode_name(ReturnMode mode);

struct ReturnMetrics {
  double f_ideal = 0.0;
  double f_circuit = 0.0;
  double f_error = 0.0;  // f_ideal - f_circuit
  ReturnMode mode = ReturnMode::expectation;
};

/// F(z(x)) for every bitstring x of the problem.
std::vector<double> objective_table(const Problem& problem);

/// Expectation mode averages F over the histogram frequencies; argmax mode
/// takes F at the histogram mode. Throws DegenerateRunError when empty.
ReturnMetrics return_error(std::span<const double> objectives, const Histogram& histogram,
                           ReturnMode mode);
ReturnMetrics return_error(const Problem& problem, const Histogram& histogram,
                           ReturnMode mode);

/// Expectation-mode return error of the exact distribution `probabilities`.
ReturnMetrics return_error(std::span<const double> objectives,
                           std::span<const double> probabilities);

struct BaselineStats {
  std::vector<double> f_errors;
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation; 0 for one sample
};

/// Random states sum_i a_i |i> / ||a|| with a_i ~ U[0, 1]; each sample is
/// scored exactly in expectation mode.
BaselineStats random_state_baseline(const Problem& problem, int samples,
                                    std::uint64_t seed);

enum class SolverKind { qaoa, qite_exact, qite_compiled };
std::string_view solver_name(SolverKind kind);
SolverKind parse_solver(std::string_view name);

struct QiteSettings {
  /// nullopt selects default_beta of the instance.
  std::optional<double> beta;
  std::uint64_t shots = 8192;
  int layers = 4;
  OptimizerConfig optimizer{};
  int trajectories = 64;
};

/// Solver and its configuration; the noise model of each cell overrides the
/// one inside `qaoa`.
struct SolverConfig {
  SolverKind kind = SolverKind::qaoa;
  QaoaConfig qaoa{};
  QiteSettings qite{};
};

struct BenchRow {
  int instance_id = 0;
  std::string solver;
  std::string mode;  // exact | sampled | compiled
  NoiseKind noise_kind = NoiseKind::none;
  double p = 0.0;
  std::uint64_t seed = 0;
  double min_energy_deviation = 0.0;
  double f_error_expectation = 0.0;
  double f_error_argmax = 0.0;
  std::optional<double> success_probability;
  std::optional<double> compile_cost;
  std::string mode_bitstring;  // canonical rendering
  bool matched_optimum = false;
  double wall_time_s = 0.0;
  Histogram histogram;
  /// Non-empty when the run failed; metrics are then meaningless.
  std::string error;

  bool ok() const { return error.empty(); }
};

/// Runs one solver on one instance at one noise level and scores it.
/// Library errors are caught and recorded in `error`.
BenchRow run_cell(const Problem& problem, const SolverConfig& config,
                  const NoiseModel& noise, std::uint64_t seed);

/// Per-noise-level mean and sample standard deviation over successful rows.
struct SweepSummary {
  double p = 0.0;
  int runs = 0;
  int failures = 0;
  double mean_min_energy_deviation = 0.0;
  double std_min_energy_deviation = 0.0;
  double mean_f_error = 0.0;  // expectation mode
  double std_f_error = 0.0;
};

struct BenchReport {
  std::vector<BenchRow> rows;

  /// Summaries in order of first appearance of each p.
  std::vector<SweepSummary> by_noise_level() const;
  /// Counts of expectation-mode F_error values in bins [k w, (k+1) w).
  std::map<long, int> f_error_histogram(double bin_width = 1.0) const;
};

/// Cells (problem, p, seed), in this nesting order, evaluated on up to
/// `jobs` threads. Row order does not depend on `jobs`.
BenchReport noise_sweep(std::span<const Problem> problems, const SolverConfig& config,
                        NoiseKind kind, std::span<const double> p_list,
                        std::span<const std::uint64_t> seeds, int jobs = 1);

/// One cell per (problem, seed) at a single noise model.
BenchReport instance_suite_run(std::span<const Problem> problems,
                               const SolverConfig& config, const NoiseModel& noise,
                               std::span<const std::uint64_t> seeds, int jobs = 1);

/// Spearman rank correlation (average ranks for ties).
double rank_correlation(std::span<const double> x, std::span<const double> y);

/// CSV with columns instance_id, solver, mode, p, seed, min_energy_deviation,
/// F_error_expectation, F_error_argmax, success_probability, matched_optimum,
/// wall_time_s. Failed rows leave the metric columns empty.
void write_report_csv(const BenchReport& report, std::ostream& out);

}  // namespace qport
