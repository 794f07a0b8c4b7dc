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


#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "qport/bench.hpp"
#include "qport/circuit.hpp"
#include "qport/encoding.hpp"
#include "qport/noise.hpp"
#include "qport/optimizer.hpp"
#include "qport/qite.hpp"
#include "qport/rng.hpp"
#include "qport/simulator.hpp"

namespace {

using namespace qport;

StateVector random_state(int n) {
  StateVector s(n);
  Rng rng(1);
  auto amps = s.amplitudes();
  double norm = 0.0;
  for (auto& a : amps) {
    a = cplx(rng.uniform(-1, 1), rng.uniform(-1, 1));
    norm += std::norm(a);
  }
  for (auto& a : amps) a /= std::sqrt(norm);
  return s;
}

Problem paper_problem() { return make_problem(generate_instance(PortfolioParams{}, 1)); }

void BM_Apply1q(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  StateVector s = random_state(n);
  const Matrix2 m = u3_matrix(0.3, 0.2, 0.1);
  for (auto _ : state) {
    for (int q = 0; q < n; ++q) kernel::apply_1q(s.amplitudes(), q, m);
    benchmark::DoNotOptimize(s.amplitudes().data());
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_Apply1q)->DenseRange(4, 16, 4);

void BM_ApplyEcr(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  StateVector s = random_state(n);
  const Matrix4 m = ecr_matrix();
  for (auto _ : state) {
    for (int q = 0; q + 1 < n; ++q) kernel::apply_2q(s.amplitudes(), q, q + 1, m);
    benchmark::DoNotOptimize(s.amplitudes().data());
  }
  state.SetItemsProcessed(state.iterations() * (n - 1));
}
BENCHMARK(BM_ApplyEcr)->DenseRange(4, 16, 4);

void BM_ApplyCx(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  StateVector s = random_state(n);
  for (auto _ : state) {
    for (int q = 0; q + 1 < n; ++q) kernel::apply_cx(s.amplitudes(), q, q + 1);
    benchmark::DoNotOptimize(s.amplitudes().data());
  }
  state.SetItemsProcessed(state.iterations() * (n - 1));
}
BENCHMARK(BM_ApplyCx)->DenseRange(4, 16, 4);

void BM_AnsatzSimulate(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Circuit c = build_layered_ansatz(n, 2, Entangler::ecr);
  const std::vector<double> params = random_initial_params(c.num_parameters(), 3);
  for (auto _ : state) benchmark::DoNotOptimize(simulate(c, params, StateVector(n)));
}
BENCHMARK(BM_AnsatzSimulate)->Arg(9)->Arg(10)->Arg(14);

void BM_NoisyTrajectory(benchmark::State& state) {
  const Circuit c = build_layered_ansatz(9, 2, Entangler::ecr);
  const std::vector<double> params = random_initial_params(c.num_parameters(), 3);
  const NoiseModel noise{NoiseKind::cx_x_flip, 0.01, 0};
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_trajectory(c, params, noise, StateVector(9), seed++));
  }
}
BENCHMARK(BM_NoisyTrajectory);

void BM_Sampling(benchmark::State& state) {
  const StateVector s = random_state(9);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sample_bitstrings(s, static_cast<std::uint64_t>(state.range(0)), 1));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Sampling)->Arg(4096)->Arg(65536);

void BM_EnergyTable(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  IsingModel m;
  m.n = n;
  m.h = Eigen::VectorXd::LinSpaced(n, -1.0, 1.0);
  m.J = Eigen::MatrixXd::Constant(n, n, 0.25);
  for (auto _ : state) benchmark::DoNotOptimize(energy_table(m));
  state.SetComplexityN(std::int64_t{1} << n);
}
BENCHMARK(BM_EnergyTable)->DenseRange(9, 21, 4)->Complexity();

void BM_BruteForceGround(benchmark::State& state) {
  const Problem prob = paper_problem();
  for (auto _ : state) benchmark::DoNotOptimize(brute_force_ground(prob.ising));
}
BENCHMARK(BM_BruteForceGround);

void BM_MakeProblem(benchmark::State& state) {
  const PortfolioInstance inst = generate_instance(PortfolioParams{}, 1);
  for (auto _ : state) benchmark::DoNotOptimize(make_problem(inst));
}
BENCHMARK(BM_MakeProblem);

void BM_IsingDilation(benchmark::State& state) {
  const Problem prob = paper_problem();
  for (auto _ : state) benchmark::DoNotOptimize(build_dilation(prob.ising, 2.0));
}
BENCHMARK(BM_IsingDilation);

void BM_GeneralDilation(benchmark::State& state) {
  const int dim = 1 << state.range(0);
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Random(dim, dim);
  h = (h + h.adjoint()).eval();
  for (auto _ : state) benchmark::DoNotOptimize(build_dilation(h, 0.5));
}
BENCHMARK(BM_GeneralDilation)->DenseRange(2, 6, 2);

void BM_CompileCost(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  IsingModel m;
  m.n = n;
  m.h = Eigen::VectorXd::LinSpaced(n, -1.0, 1.0);
  m.J = Eigen::MatrixXd::Zero(n, n);
  const Dilation d = build_dilation(m, 1.0);
  const Circuit c = build_layered_ansatz(n + 1, 4, Entangler::ecr);
  const std::vector<double> params = random_initial_params(c.num_parameters(), 5);
  for (auto _ : state) benchmark::DoNotOptimize(compile_cost(c, params, d.U));
}
BENCHMARK(BM_CompileCost)->Arg(4)->Arg(6)->Arg(9)->Unit(benchmark::kMillisecond);

void BM_QiteExact(benchmark::State& state) {
  const Problem prob = paper_problem();
  const Dilation d = build_dilation(prob.ising, 2.0);
  for (auto _ : state) benchmark::DoNotOptimize(apply_qite_exact(d, 8192, 1));
}
BENCHMARK(BM_QiteExact);

void BM_ReturnError(benchmark::State& state) {
  const Problem prob = paper_problem();
  const auto table = objective_table(prob);
  Histogram h{9, {}};
  for (std::uint64_t x = 0; x < 512; ++x) h.add(x, x % 7 + 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(return_error(table, h, ReturnMode::expectation));
  }
}
BENCHMARK(BM_ReturnError);

void BM_CobylaSphere(benchmark::State& state) {
  const CostFunction sphere = [](std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return s;
  };
  const std::vector<double> x0(9, 1.0);
  OptimizerConfig cfg;
  cfg.max_evals = 500;
  for (auto _ : state) benchmark::DoNotOptimize(minimize(sphere, x0, cfg));
}
BENCHMARK(BM_CobylaSphere)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
