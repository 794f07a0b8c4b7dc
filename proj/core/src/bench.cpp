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


#include "qport/bench.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <numeric>
#include <ostream>
#include <thread>

#include "qport/error.hpp"
#include "qport/rng.hpp"

namespace qport {

namespace {

struct MeanStd {
  double mean = 0.0;
  double stddev = 0.0;
};

MeanStd mean_std(std::span<const double> v) {
  MeanStd out;
  if (v.empty()) return out;
  out.mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  if (v.size() < 2) return out;
  double ss = 0.0;
  for (double x : v) ss += (x - out.mean) * (x - out.mean);
  out.stddev = std::sqrt(ss / static_cast<double>(v.size() - 1));
  return out;
}

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

template <typename Cell, typename Fn>
std::vector<BenchRow> run_cells(const std::vector<Cell>& cells, int jobs, Fn fn) {
  std::vector<BenchRow> rows(cells.size());
  const auto workers = static_cast<std::size_t>(std::max(1, jobs));
  if (workers == 1 || cells.size() < 2) {
    for (std::size_t i = 0; i < cells.size(); ++i) rows[i] = fn(cells[i]);
    return rows;
  }
  std::atomic<std::size_t> next{0};
  const auto work = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) rows[i] = fn(cells[i]);
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < std::min(workers, cells.size()); ++w) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  return rows;
}

}  // namespace

std::string_view return_mode_name(ReturnMode mode) {
  return mode == ReturnMode::expectation ? "expectation" : "argmax";
}

std::vector<double> objective_table(const Problem& problem) {
  const int n = problem.ising.n;
  if (n > kMaxEnumerationQubits) {
    throw CapacityError("objective enumeration supports at most " +
                        std::to_string(kMaxEnumerationQubits) + " qubits");
  }
  std::vector<double> table(std::size_t{1} << n);
  for (std::uint64_t x = 0; x < table.size(); ++x) {
    table[x] = objective_of(problem, Bitstring{n, x});
  }
  return table;
}

ReturnMetrics return_error(std::span<const double> objectives, const Histogram& histogram,
                           ReturnMode mode) {
  if (histogram.empty()) throw DegenerateRunError("return error of an empty histogram");
  ReturnMetrics m;
  m.mode = mode;
  m.f_ideal = *std::max_element(objectives.begin(), objectives.end());
  if (mode == ReturnMode::argmax) {
    const std::uint64_t x = histogram.mode().bits;
    if (x >= objectives.size()) throw ShapeError("histogram index out of range");
    m.f_circuit = objectives[x];
  } else {
    const double total = static_cast<double>(histogram.total());
    for (const auto& [x, count] : histogram.counts) {
      if (x >= objectives.size()) throw ShapeError("histogram index out of range");
      m.f_circuit += objectives[x] * (static_cast<double>(count) / total);
    }
  }
  m.f_error = m.f_ideal - m.f_circuit;
  return m;
}

ReturnMetrics return_error(const Problem& problem, const Histogram& histogram,
                           ReturnMode mode) {
  return return_error(objective_table(problem), histogram, mode);
}

ReturnMetrics return_error(std::span<const double> objectives,
                           std::span<const double> probabilities) {
  if (objectives.size() != probabilities.size()) {
    throw ShapeError("objective table and distribution differ in length");
  }
  ReturnMetrics m;
  m.f_ideal = *std::max_element(objectives.begin(), objectives.end());
  double mass = 0.0;
  for (std::size_t x = 0; x < objectives.size(); ++x) {
    m.f_circuit += objectives[x] * probabilities[x];
    mass += probabilities[x];
  }
  if (!(mass > 0.0)) throw DegenerateRunError("distribution has no mass");
  m.f_circuit /= mass;
  m.f_error = m.f_ideal - m.f_circuit;
  return m;
}

BaselineStats random_state_baseline(const Problem& problem, int samples,
                                    std::uint64_t seed) {
  if (samples < 1) throw ParameterError("baseline needs at least one sample");
  const std::vector<double> objectives = objective_table(problem);
  std::vector<double> probs(objectives.size());
  BaselineStats out;
  for (int s = 0; s < samples; ++s) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(s)));
    double norm2 = 0.0;
    for (double& p : probs) {
      const double a = rng.uniform();
      p = a * a;
      norm2 += p;
    }
    for (double& p : probs) p /= norm2;
    out.f_errors.push_back(return_error(objectives, probs).f_error);
  }
  const MeanStd ms = mean_std(out.f_errors);
  out.mean = ms.mean;
  out.stddev = ms.stddev;
  return out;
}

std::string_view solver_name(SolverKind kind) {
  switch (kind) {
    case SolverKind::qaoa: return "qaoa";
    case SolverKind::qite_exact: return "qite_exact";
    case SolverKind::qite_compiled: return "qite_compiled";
  }
  return "?";
}

SolverKind parse_solver(std::string_view name) {
  if (name == "qaoa") return SolverKind::qaoa;
  if (name == "qite_exact" || name == "qite") return SolverKind::qite_exact;
  if (name == "qite_compiled") return SolverKind::qite_compiled;
  throw ParameterError("unknown solver '" + std::string(name) + "'");
}

BenchRow run_cell(const Problem& problem, const SolverConfig& config,
                  const NoiseModel& noise, std::uint64_t seed) {
  const auto start = std::chrono::steady_clock::now();
  BenchRow row;
  row.instance_id = problem.instance.id;
  row.solver = std::string(solver_name(config.kind));
  row.noise_kind = noise.kind;
  row.p = noise.noisy() ? noise.error_rate : 0.0;
  row.seed = seed;
  try {
    if (!problem.ising.ground) throw ConfigurationError("instance has no ground state");
    const double ground = problem.ising.ground->energy;
    switch (config.kind) {
      case SolverKind::qaoa: {
        QaoaConfig cfg = config.qaoa;
        cfg.noise = noise;
        row.mode = cfg.exact() ? "exact" : "sampled";
        QaoaResult r = solve_qaoa(problem.ising, cfg, seed);
        row.min_energy_deviation = r.min_energy_deviation;
        row.histogram = std::move(r.histogram);
        break;
      }
      case SolverKind::qite_exact: {
        row.mode = "exact";
        const std::vector<double> energies = energy_table(problem.ising);
        const double beta = config.qite.beta.value_or(default_beta(energies));
        QiteResult r = apply_qite_exact(build_dilation(energies, beta), config.qite.shots,
                                        seed);
        row.min_energy_deviation = std::abs(ground - r.energy);
        row.success_probability = r.success_probability;
        row.histogram = std::move(r.histogram);
        break;
      }
      case SolverKind::qite_compiled: {
        row.mode = "compiled";
        const std::vector<double> energies = energy_table(problem.ising);
        const double beta = config.qite.beta.value_or(default_beta(energies));
        const Dilation d = build_dilation(energies, beta);
        OptimizerConfig opt = config.qite.optimizer;
        opt.seed = derive_seed(seed, 0);
        const CompiledQite compiled = compile_qite_circuit(d, config.qite.layers, opt);
        QiteRunConfig run;
        run.shots = config.qite.shots;
        run.noise = noise;
        run.trajectories = config.qite.trajectories;
        QiteResult r = run_qite_compiled(compiled.circuit, problem.ising, run,
                                         derive_seed(seed, 1));
        row.min_energy_deviation = std::abs(ground - r.energy);
        row.success_probability = r.success_probability;
        row.compile_cost = compiled.cost;
        row.histogram = std::move(r.histogram);
        break;
      }
    }
    const std::vector<double> objectives = objective_table(problem);
    row.f_error_expectation =
        return_error(objectives, row.histogram, ReturnMode::expectation).f_error;
    row.f_error_argmax = return_error(objectives, row.histogram, ReturnMode::argmax).f_error;
    const Bitstring mode = row.histogram.mode();
    row.mode_bitstring = to_string(mode);
    row.matched_optimum = mode == problem.ising.ground->bits;
  } catch (const Error& e) {
    row.error = e.what();
  }
  row.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return row;
}

std::vector<SweepSummary> BenchReport::by_noise_level() const {
  std::vector<SweepSummary> out;
  std::vector<std::vector<double>> dev, err;
  for (const BenchRow& row : rows) {
    auto it = std::find_if(out.begin(), out.end(),
                           [&](const SweepSummary& s) { return s.p == row.p; });
    if (it == out.end()) {
      out.push_back(SweepSummary{row.p});
      dev.emplace_back();
      err.emplace_back();
      it = out.end() - 1;
    }
    const auto k = static_cast<std::size_t>(it - out.begin());
    if (!row.ok()) {
      ++it->failures;
      continue;
    }
    ++it->runs;
    dev[k].push_back(row.min_energy_deviation);
    err[k].push_back(row.f_error_expectation);
  }
  for (std::size_t k = 0; k < out.size(); ++k) {
    const MeanStd d = mean_std(dev[k]);
    const MeanStd e = mean_std(err[k]);
    out[k].mean_min_energy_deviation = d.mean;
    out[k].std_min_energy_deviation = d.stddev;
    out[k].mean_f_error = e.mean;
    out[k].std_f_error = e.stddev;
  }
  return out;
}

std::map<long, int> BenchReport::f_error_histogram(double bin_width) const {
  if (!(bin_width > 0.0)) throw ParameterError("bin width must be positive");
  std::map<long, int> bins;
  for (const BenchRow& row : rows) {
    if (!row.ok()) continue;
    ++bins[static_cast<long>(std::floor(row.f_error_expectation / bin_width))];
  }
  return bins;
}

BenchReport noise_sweep(std::span<const Problem> problems, const SolverConfig& config,
                        NoiseKind kind, std::span<const double> p_list,
                        std::span<const std::uint64_t> seeds, int jobs) {
  if (p_list.empty()) throw ParameterError("noise sweep needs at least one rate");
  struct Cell {
    const Problem* problem;
    NoiseModel noise;
    std::uint64_t seed;
  };
  std::vector<Cell> cells;
  for (const Problem& problem : problems) {
    for (double p : p_list) {
      NoiseModel noise{p > 0.0 ? kind : NoiseKind::none, p, 0};
      validate(noise);
      for (std::uint64_t seed : seeds) cells.push_back({&problem, noise, seed});
    }
  }
  BenchReport report;
  report.rows = run_cells(cells, jobs, [&](const Cell& c) {
    BenchRow row = run_cell(*c.problem, config, c.noise, c.seed);
    row.p = c.noise.error_rate;
    row.noise_kind = kind;
    return row;
  });
  return report;
}

BenchReport instance_suite_run(std::span<const Problem> problems,
                               const SolverConfig& config, const NoiseModel& noise,
                               std::span<const std::uint64_t> seeds, int jobs) {
  validate(noise);
  struct Cell {
    const Problem* problem;
    std::uint64_t seed;
  };
  std::vector<Cell> cells;
  for (const Problem& problem : problems) {
    for (std::uint64_t seed : seeds) cells.push_back({&problem, seed});
  }
  BenchReport report;
  report.rows = run_cells(cells, jobs, [&](const Cell& c) {
    return run_cell(*c.problem, config, noise, c.seed);
  });
  return report;
}

double rank_correlation(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw ShapeError("rank correlation needs two equal-length series of length >= 2");
  }
  const auto ranks = [](std::span<const double> v) {
    std::vector<std::size_t> order(v.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return v[a] < v[b]; });
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < order.size();) {
      std::size_t j = i;
      while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
      const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
      for (std::size_t k = i; k <= j; ++k) r[order[k]] = avg;
      i = j + 1;
    }
    return r;
  };
  const std::vector<double> rx = ranks(x), ry = ranks(y);
  const MeanStd mx = mean_std(rx), my = mean_std(ry);
  if (mx.stddev == 0.0 || my.stddev == 0.0) return 0.0;
  double cov = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) cov += (rx[i] - mx.mean) * (ry[i] - my.mean);
  cov /= static_cast<double>(rx.size() - 1);
  return cov / (mx.stddev * my.stddev);
}

void write_report_csv(const BenchReport& report, std::ostream& out) {
  out << "instance_id,solver,mode,p,seed,min_energy_deviation,F_error_expectation,"
         "F_error_argmax,success_probability,matched_optimum,wall_time_s\n";
  for (const BenchRow& r : report.rows) {
    out << r.instance_id << ',' << r.solver << ',' << r.mode << ',' << format_double(r.p)
        << ',' << r.seed << ',';
    if (r.ok()) {
      out << format_double(r.min_energy_deviation) << ','
          << format_double(r.f_error_expectation) << ',' << format_double(r.f_error_argmax)
          << ',';
      if (r.success_probability) out << format_double(*r.success_probability);
      out << ',' << (r.matched_optimum ? "true" : "false");
    } else {
      out << ",,,,";
    }
    out << ',' << format_double(r.wall_time_s) << '\n';
  }
}

}  // namespace qport
