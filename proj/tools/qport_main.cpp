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


// qport: generate portfolio instances, solve them and benchmark the solvers.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "io.hpp"
#include "qport/bench.hpp"
#include "qport/error.hpp"
#include "qport/rng.hpp"

#ifndef QPORT_VERSION
#define QPORT_VERSION "unknown"
#endif

namespace {

using qport::io::json;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitDegenerate = 2;

struct Common {
  std::string instance = "inst.json";
  std::string output;
  std::string bit_order = "canonical";
  std::uint64_t seed = 0;
  std::vector<std::string> argv;
};

struct SolverFlags {
  int layers = 2;
  std::string mode;
  int shots = 4096;
  std::string noise = "none";
  double p = 0.0;
  int trajectories = 1;
  int final_trajectories = 64;
  int final_shots = 8192;
  int max_evals = 1000;
  std::string algorithm = "cobyla";
  double rho_begin = 0.5;
  double rho_end = 1e-4;
  std::string entangler = "ecr";
  std::string cost_form = "shifted";
  std::string beta = "auto";
};

qport::BitOrder bit_order(const Common& c) { return qport::parse_bit_order(c.bit_order); }

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream out;
  out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return out.str();
}

// Result goes to -o (with a manifest sidecar) or to stdout.
void emit(const Common& c, const std::string& command, const json& config,
          const std::string& text) {
  if (c.output.empty() || c.output == "-") {
    std::cout << text;
    return;
  }
  const json manifest = {{"schema_version", qport::io::kSchemaVersion},
                         {"tool", "qport"},
                         {"version", QPORT_VERSION},
                         {"command", command},
                         {"argv", c.argv},
                         {"config", config},
                         {"output", c.output}};
  qport::io::write_text_atomic(c.output, text);
  qport::io::write_json_atomic(c.output + ".manifest.json", manifest);
}

void emit_json(const Common& c, const std::string& command, const json& config,
               const json& doc) {
  emit(c, command, config, doc.dump(2) + "\n");
}

qport::NoiseModel noise_of(const SolverFlags& f) {
  qport::NoiseModel n{qport::parse_noise_kind(f.noise), f.p, 0};
  qport::validate(n);
  return n;
}

qport::OptimizerConfig optimizer_of(const SolverFlags& f) {
  qport::OptimizerConfig o;
  o.algorithm = qport::parse_algorithm(f.algorithm);
  o.max_evals = f.max_evals;
  o.rho_begin = f.rho_begin;
  o.rho_end = f.rho_end;
  return o;
}

qport::QaoaConfig qaoa_config_of(const SolverFlags& f) {
  qport::QaoaConfig c;
  c.layers = f.layers;
  if (f.mode.empty() || f.mode == "exact") {
    c.shots.reset();
  } else if (f.mode == "sampled") {
    c.shots = f.shots;
  } else {
    throw qport::ParameterError("qaoa --mode must be 'exact' or 'sampled'");
  }
  c.noise = noise_of(f);
  c.optimizer = optimizer_of(f);
  c.trajectories_per_eval = f.trajectories;
  c.entangler = qport::parse_entangler(f.entangler);
  if (f.cost_form == "shifted") {
    c.cost_form = qport::QaoaCostForm::shifted;
  } else if (f.cost_form == "raw") {
    c.cost_form = qport::QaoaCostForm::raw;
  } else {
    throw qport::ParameterError("--cost-form must be 'shifted' or 'raw'");
  }
  c.final_shots = f.final_shots;
  c.final_trajectories = f.final_trajectories;
  qport::validate(c);
  return c;
}

std::optional<double> beta_of(const SolverFlags& f) {
  if (f.beta == "auto") return std::nullopt;
  try {
    std::size_t used = 0;
    const double b = std::stod(f.beta, &used);
    if (used == f.beta.size() && b >= 0.0 && std::isfinite(b)) return b;
  } catch (const std::exception&) {
  }
  throw qport::ParameterError("--beta must be 'auto' or a non-negative number");
}

qport::QiteSettings qite_settings_of(const SolverFlags& f) {
  qport::QiteSettings s;
  s.beta = beta_of(f);
  s.shots = static_cast<std::uint64_t>(f.shots);
  s.layers = f.layers;
  s.optimizer = optimizer_of(f);
  s.trajectories = f.final_trajectories;
  if (f.shots < 1) throw qport::ParameterError("--shots must be >= 1");
  return s;
}

void add_common(CLI::App* cmd, Common& c, bool needs_instance) {
  if (needs_instance) {
    cmd->add_option("--instance,-i", c.instance, "instance file")->capture_default_str();
  }
  cmd->add_option("-o,--output", c.output, "output path (stdout when omitted)");
  cmd->add_option("--seed", c.seed, "run seed")->capture_default_str();
}

void add_solver_flags(CLI::App* cmd, SolverFlags& f, bool qaoa, bool qite) {
  cmd->add_option("--layers,-L", f.layers, "ansatz layers")->capture_default_str();
  cmd->add_option("--shots", f.shots, "shots per estimate")->capture_default_str();
  cmd->add_option("--noise", f.noise, "none | cx_x_flip | cx_depolarizing")
      ->capture_default_str();
  cmd->add_option("--p", f.p, "two-qubit gate error rate")->capture_default_str();
  cmd->add_option("--final-trajectories", f.final_trajectories,
                  "noise trajectories behind the final histogram")
      ->capture_default_str();
  cmd->add_option("--max-evals", f.max_evals, "optimizer evaluation budget")
      ->capture_default_str();
  cmd->add_option("--optimizer", f.algorithm, "cobyla | nelder_mead")->capture_default_str();
  cmd->add_option("--rho-begin", f.rho_begin)->capture_default_str();
  cmd->add_option("--rho-end", f.rho_end)->capture_default_str();
  cmd->add_option("--entangler", f.entangler, "ecr | cx")->capture_default_str();
  if (qaoa) {
    cmd->add_option("--trajectories", f.trajectories, "noise trajectories per evaluation")
        ->capture_default_str();
    cmd->add_option("--final-shots", f.final_shots)->capture_default_str();
    cmd->add_option("--cost-form", f.cost_form, "shifted | raw")->capture_default_str();
  }
  if (qite) {
    cmd->add_option("--beta", f.beta, "imaginary time, or 'auto'")->capture_default_str();
  }
}

int run_gen(const Common& c, const qport::PortfolioParams& params, int count) {
  qport::validate(params);
  if (count < 0) throw qport::ParameterError("--count must be >= 0");
  qport::io::InstanceFile file;
  file.params = params;
  file.seed = c.seed;
  file.timestamp = utc_timestamp();
  for (int id = 0; id < count; ++id) {
    file.problems.push_back(
        qport::make_problem(qport::generate_batch_instance(params, c.seed, id)));
  }
  const json config = {{"m", params.assets},
                       {"w", params.slices},
                       {"N_f", params.history},
                       {"b", params.budget},
                       {"theta",
                        {params.theta.return_weight, params.theta.risk_weight,
                         params.theta.budget_weight}},
                       {"count", count},
                       {"seed", c.seed}};
  emit_json(c, "gen", config, qport::io::to_json(file, bit_order(c)));
  return kExitOk;
}

int run_exact(const Common& c, int id) {
  const auto file = qport::io::read_instance_file(c.instance);
  const qport::Problem& prob = qport::io::find_instance(file, id);
  const auto energies = qport::energy_table(prob.ising);
  const qport::GroundState& g = *prob.ising.ground;
  const json doc = {{"schema_version", qport::io::kSchemaVersion},
                    {"instance_id", id},
                    {"E_g", g.energy},
                    {"ground_bitstring", qport::to_string(g.bits, bit_order(c))},
                    {"allocation", qport::decode_z(g.bits, prob.instance.params.slices)},
                    {"F_ideal", qport::max_objective(prob)},
                    {"delta", prob.ising.delta},
                    {"spectral_gap", qport::spectral_gap(energies)},
                    {"default_beta", qport::default_beta(energies)}};
  emit_json(c, "exact", {{"instance", c.instance}, {"id", id}}, doc);
  return kExitOk;
}

int run_qaoa(const Common& c, const SolverFlags& f, int id) {
  const auto file = qport::io::read_instance_file(c.instance);
  const qport::Problem& prob = qport::io::find_instance(file, id);
  const qport::QaoaConfig cfg = qaoa_config_of(f);
  json config = qport::io::to_json(cfg);
  config["instance"] = c.instance;
  config["id"] = id;
  config["seed"] = c.seed;
  const qport::QaoaResult r = qport::solve_qaoa(prob.ising, cfg, c.seed);
  emit_json(c, "qaoa", config, qport::io::qaoa_result_json(id, config, r, bit_order(c)));
  return kExitOk;
}

int run_qite(const Common& c, const SolverFlags& f, int id) {
  const auto file = qport::io::read_instance_file(c.instance);
  const qport::Problem& prob = qport::io::find_instance(file, id);
  const qport::QiteMode mode = qport::parse_qite_mode(f.mode.empty() ? "exact" : f.mode);
  const qport::QiteSettings s = qite_settings_of(f);
  const qport::NoiseModel noise = noise_of(f);
  const auto energies = qport::energy_table(prob.ising);
  const double beta = s.beta.value_or(qport::default_beta(energies));

  json config = {{"instance", c.instance},
                 {"id", id},
                 {"seed", c.seed},
                 {"mode", qport::qite_mode_name(mode)},
                 {"beta", f.beta},
                 {"beta_resolved", beta},
                 {"shots", s.shots},
                 {"noise", qport::io::to_json(noise)}};
  const qport::Dilation d = qport::build_dilation(energies, beta);
  if (mode == qport::QiteMode::exact) {
    if (noise.noisy()) throw qport::ParameterError("noise applies to compiled mode only");
    const qport::QiteResult r = qport::apply_qite_exact(d, s.shots, c.seed);
    emit_json(c, "qite", config, qport::io::qite_result_json(id, config, r, nullptr,
                                                             bit_order(c)));
    return kExitOk;
  }
  config["layers"] = s.layers;
  config["optimizer"] = qport::io::to_json(s.optimizer);
  config["entangler"] = f.entangler;
  config["trajectories"] = s.trajectories;
  qport::OptimizerConfig opt = s.optimizer;
  opt.seed = qport::derive_seed(c.seed, 0);
  const qport::CompiledQite compiled =
      qport::compile_qite_circuit(d, s.layers, opt, qport::parse_entangler(f.entangler));
  qport::QiteRunConfig run;
  run.shots = s.shots;
  run.noise = noise;
  run.trajectories = s.trajectories;
  qport::QiteResult r = qport::run_qite_compiled(compiled.circuit, prob.ising, run,
                                                 qport::derive_seed(c.seed, 1));
  r.beta = beta;
  r.u = d.u;
  r.compile_cost = compiled.cost;
  emit_json(c, "qite", config,
            qport::io::qite_result_json(id, config, r, &compiled.trace, bit_order(c)));
  return kExitOk;
}

std::vector<const qport::Problem*> select(const qport::io::InstanceFile& file,
                                          const std::vector<int>& ids) {
  std::vector<const qport::Problem*> out;
  if (ids.empty()) {
    for (const auto& p : file.problems) out.push_back(&p);
  } else {
    for (int id : ids) out.push_back(&qport::io::find_instance(file, id));
  }
  return out;
}

struct Sweep {
  qport::NoiseKind kind = qport::NoiseKind::none;
  std::vector<double> rates;
};

Sweep parse_sweep(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) {
    throw qport::ParameterError("--sweep expects kind:p1,p2,...");
  }
  Sweep s;
  s.kind = qport::parse_noise_kind(text.substr(0, colon));
  std::stringstream rest(text.substr(colon + 1));
  for (std::string item; std::getline(rest, item, ',');) {
    std::size_t used = 0;
    double p = 0.0;
    try {
      p = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) {
      throw qport::ParameterError("--sweep: bad rate '" + item + "'");
    }
    s.rates.push_back(p);
  }
  if (s.rates.empty()) throw qport::ParameterError("--sweep needs at least one rate");
  return s;
}

int run_bench(const Common& c, const SolverFlags& f, const std::string& solver,
              const std::string& sweep_text, int seed_count, const std::vector<int>& ids,
              int jobs, const std::string& histogram_dir) {
  if (seed_count < 1) throw qport::ParameterError("--seeds must be >= 1");
  if (jobs < 1) throw qport::ParameterError("--jobs must be >= 1");
  const auto file = qport::io::read_instance_file(c.instance);
  std::vector<qport::Problem> problems;
  for (const qport::Problem* p : select(file, ids)) problems.push_back(*p);

  qport::SolverConfig cfg;
  cfg.kind = qport::parse_solver(solver);
  json config = {{"instance", c.instance},
                 {"solver", qport::solver_name(cfg.kind)},
                 {"seed", c.seed},
                 {"seeds", seed_count},
                 {"ids", ids}};
  if (cfg.kind == qport::SolverKind::qaoa) {
    cfg.qaoa = qaoa_config_of(f);
    config["qaoa"] = qport::io::to_json(cfg.qaoa);
  } else {
    cfg.qite = qite_settings_of(f);
    config["qite"] = {{"beta", f.beta},
                      {"shots", cfg.qite.shots},
                      {"layers", cfg.qite.layers},
                      {"optimizer", qport::io::to_json(cfg.qite.optimizer)},
                      {"trajectories", cfg.qite.trajectories}};
  }
  std::vector<std::uint64_t> seeds;
  for (int s = 0; s < seed_count; ++s) seeds.push_back(c.seed + static_cast<std::uint64_t>(s));

  qport::BenchReport report;
  if (!sweep_text.empty()) {
    const Sweep sweep = parse_sweep(sweep_text);
    config["sweep"] = {{"kind", qport::noise_kind_name(sweep.kind)}, {"p", sweep.rates}};
    report = qport::noise_sweep(problems, cfg, sweep.kind, sweep.rates, seeds, jobs);
  } else {
    const qport::NoiseModel noise = noise_of(f);
    config["noise"] = qport::io::to_json(noise);
    report = qport::instance_suite_run(problems, cfg, noise, seeds, jobs);
  }

  std::ostringstream csv;
  qport::write_report_csv(report, csv);
  emit(c, "bench", config, csv.str());

  if (!histogram_dir.empty()) {
    std::filesystem::create_directories(histogram_dir);
    for (std::size_t i = 0; i < report.rows.size(); ++i) {
      const qport::BenchRow& row = report.rows[i];
      if (!row.ok()) continue;
      qport::io::write_json_atomic(
          std::filesystem::path(histogram_dir) / ("row" + std::to_string(i) + ".json"),
          qport::io::bench_row_histogram_json(row, bit_order(c)));
    }
  }
  int failures = 0;
  for (const auto& row : report.rows) {
    if (!row.ok()) {
      ++failures;
      std::cerr << "instance " << row.instance_id << " p=" << row.p << " seed=" << row.seed
                << ": " << row.error << "\n";
    }
  }
  if (failures > 0) std::cerr << failures << " of " << report.rows.size() << " runs failed\n";
  return kExitOk;
}

int run_baseline(const Common& c, int samples, const std::vector<int>& ids) {
  const auto file = qport::io::read_instance_file(c.instance);
  json rows = json::array();
  for (const qport::Problem* p : select(file, ids)) {
    const qport::BaselineStats s = qport::random_state_baseline(
        *p, samples, qport::derive_seed(c.seed, static_cast<std::uint64_t>(p->instance.id)));
    rows.push_back({{"instance_id", p->instance.id},
                    {"F_error_mean", s.mean},
                    {"F_error_std", s.stddev},
                    {"F_errors", s.f_errors}});
  }
  const json config = {{"instance", c.instance},
                       {"samples", samples},
                       {"seed", c.seed},
                       {"ids", ids}};
  emit_json(c, "baseline", config,
            {{"schema_version", qport::io::kSchemaVersion}, {"config", config},
             {"instances", rows}});
  return kExitOk;
}

int default_jobs() {
  if (const char* env = std::getenv("QPORT_JOBS")) {
    try {
      const int j = std::stoi(env);
      if (j >= 1) return j;
    } catch (const std::exception&) {
    }
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Portfolio optimization with QAOA and imaginary-time evolution"};
  app.set_version_flag("--version", QPORT_VERSION);
  app.require_subcommand(1);

  Common common;
  for (int i = 0; i < argc; ++i) common.argv.emplace_back(argv[i]);
  app.add_option("--bit-order", common.bit_order, "canonical (x0 first) | reversed")
      ->capture_default_str();

  qport::PortfolioParams params;
  std::vector<double> theta{0.8, 0.1, 0.1};
  int count = 100;
  auto* gen = app.add_subcommand("gen", "generate an instance file");
  gen->add_option("--assets,-m", params.assets)->capture_default_str();
  gen->add_option("--slices,-w", params.slices)->capture_default_str();
  gen->add_option("--history", params.history)->capture_default_str();
  gen->add_option("--budget,-b", params.budget)->capture_default_str();
  gen->add_option("--theta", theta, "return,risk,budget weights")
      ->delimiter(',')
      ->expected(3)
      ->capture_default_str();
  gen->add_option("--count", count)->capture_default_str();
  add_common(gen, common, false);

  int id = 0;
  auto* exact = app.add_subcommand("exact", "brute-force ground state of one instance");
  exact->add_option("--id", id)->capture_default_str();
  add_common(exact, common, true);

  SolverFlags flags;
  auto* qaoa = app.add_subcommand("qaoa", "variational solve of one instance");
  qaoa->add_option("--id", id)->capture_default_str();
  qaoa->add_option("--mode", flags.mode, "exact | sampled");
  add_solver_flags(qaoa, flags, true, false);
  add_common(qaoa, common, true);

  auto* qite = app.add_subcommand("qite", "imaginary-time evolution of one instance");
  qite->add_option("--id", id)->capture_default_str();
  qite->add_option("--mode", flags.mode, "exact | compiled");
  add_solver_flags(qite, flags, false, true);
  add_common(qite, common, true);

  std::string solver = "qaoa";
  std::string sweep;
  int seeds = 1;
  std::vector<int> ids;
  int jobs = default_jobs();
  std::string histogram_dir;
  auto* bench = app.add_subcommand("bench", "benchmark a solver over instances and noise");
  bench->add_option("--solver", solver, "qaoa | qite_exact | qite_compiled")
      ->capture_default_str();
  bench->add_option("--mode", flags.mode, "qaoa estimator: exact | sampled");
  bench->add_option("--sweep", sweep, "noise sweep kind:p1,p2,...");
  bench->add_option("--seeds", seeds, "seeds per cell")->capture_default_str();
  bench->add_option("--ids", ids, "instance ids (default: all)")->delimiter(',');
  bench->add_option("--jobs,-j", jobs, "worker threads (env QPORT_JOBS)")
      ->capture_default_str();
  bench->add_option("--histograms", histogram_dir, "directory for per-run histograms");
  add_solver_flags(bench, flags, true, true);
  add_common(bench, common, true);

  int samples = 10;
  auto* baseline = app.add_subcommand("baseline", "random-state return error baseline");
  baseline->add_option("--samples", samples)->capture_default_str();
  baseline->add_option("--ids", ids, "instance ids (default: all)")->delimiter(',');
  add_common(baseline, common, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitError;
  }

  // Imaginary-time runs default to more shots than a single QAOA estimate.
  const bool qite_run = *qite || (*bench && solver != "qaoa");
  CLI::App* active = *qite ? qite : bench;
  if (qite_run && active->count("--shots") == 0) flags.shots = 8192;

  try {
    if (*gen) {
      params.theta = qport::Theta{theta[0], theta[1], theta[2]};
      return run_gen(common, params, count);
    }
    if (*exact) return run_exact(common, id);
    if (*qaoa) return run_qaoa(common, flags, id);
    if (*qite) return run_qite(common, flags, id);
    if (*bench) return run_bench(common, flags, solver, sweep, seeds, ids, jobs, histogram_dir);
    if (*baseline) return run_baseline(common, samples, ids);
  } catch (const qport::DegenerateRunError& e) {
    std::cerr << "qport: degenerate result: " << e.what() << "\n";
    return kExitDegenerate;
  } catch (const std::exception& e) {
    std::cerr << "qport: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
