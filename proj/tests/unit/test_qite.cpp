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


#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "qport/error.hpp"
#include "qport/qite.hpp"
#include "qport/rng.hpp"

namespace qport {
namespace {

IsingModel random_ising(int n, std::uint64_t seed) {
  Rng rng(seed);
  IsingModel m;
  m.n = n;
  m.h.resize(n);
  m.J = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) m.h(i) = rng.uniform(-1.0, 1.0);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) m.J(i, j) = rng.uniform(-1.0, 1.0);
  }
  m.delta = rng.uniform(-1.0, 1.0);
  m.ground = brute_force_ground(m);
  return m;
}

// Checks the three structural invariants of a dilation against e^{-beta H}
// given by its diagonal.
void expect_dilation_invariants(const Dilation& d, const std::vector<double>& energies) {
  const Eigen::Index dim = d.system_dim();
  const Eigen::Index full = 2 * dim;
  EXPECT_LT((d.U * d.U.adjoint() - Eigen::MatrixXcd::Identity(full, full)).cwiseAbs().maxCoeff(),
            1e-10);
  Eigen::MatrixXcd expected = Eigen::MatrixXcd::Zero(dim, dim);
  for (Eigen::Index x = 0; x < dim; ++x) {
    expected(x, x) = d.u * std::exp(-d.beta * energies[static_cast<std::size_t>(x)]);
  }
  EXPECT_LT((d.top_left() - expected).cwiseAbs().maxCoeff(), 1e-10);
  const Eigen::MatrixXcd tl = d.top_left();
  const Eigen::MatrixXcd c = d.lower_left();
  EXPECT_LT((tl.adjoint() * tl + c.adjoint() * c - Eigen::MatrixXcd::Identity(dim, dim))
                .cwiseAbs()
                .maxCoeff(),
            1e-10);
}

TEST(Qite, ZeroBetaIsIdentity) {
  const IsingModel m = random_ising(3, 1);
  const Dilation d = build_dilation(m, 0.0);
  EXPECT_EQ(d.u, 1.0);
  EXPECT_LT((d.U - Eigen::MatrixXcd::Identity(16, 16)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Qite, SingleSpinDilationOurConvention) {
  // h = 1 with s = 2x - 1: E(x=0) = -1, E(x=1) = +1.
  IsingModel m;
  m.n = 1;
  m.h = Eigen::VectorXd::Ones(1);
  m.J = Eigen::MatrixXd::Zero(1, 1);
  const double beta = std::log(2.0) / 2.0;
  const Dilation d = build_dilation(m, beta);
  EXPECT_NEAR(d.u, std::exp(-beta), 1e-15);
  EXPECT_NEAR(std::abs(d.top_left()(0, 0) - 1.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(d.top_left()(1, 1) - 0.5), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(d.lower_left()(0, 0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(d.lower_left()(1, 1) - std::sqrt(3.0) / 2.0), 0.0, 1e-15);
  EXPECT_EQ(d.top_left()(0, 1), cplx(0.0));
}

TEST(Qite, SingleSpinDilationPauliZ) {
  // H = sigma_z = diag(1, -1) through the general Hermitian path.
  Eigen::MatrixXcd z = Eigen::MatrixXcd::Zero(2, 2);
  z(0, 0) = 1.0;
  z(1, 1) = -1.0;
  const Dilation d = build_dilation(z, std::log(2.0) / 2.0);
  Eigen::Matrix2cd tl, c;
  tl << 0.5, 0, 0, 1;
  c << std::sqrt(3.0) / 2.0, 0, 0, 0;
  EXPECT_LT((d.top_left() - tl).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT((d.lower_left() - c).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT((d.U * d.U.adjoint() - Eigen::Matrix4cd::Identity()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Qite, ThreeQubitInvariantsAtUnitBeta) {
  const IsingModel m = random_ising(3, 7);
  const Dilation d = build_dilation(m, 1.0);
  expect_dilation_invariants(d, energy_table(m));
}

TEST(Qite, InvariantsAcrossSizesAndBetas) {
  Rng rng(99);
  for (int n = 1; n <= 8; ++n) {
    const IsingModel m = random_ising(n, 200 + static_cast<std::uint64_t>(n));
    const double beta = 4.0 * (1.0 - rng.uniform());  // (0, 4]
    expect_dilation_invariants(build_dilation(m, beta), energy_table(m));
  }
}

TEST(Qite, FastPathMatchesGeneralPath) {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const IsingModel m = random_ising(3, 40 + seed);
    const std::vector<double> e = energy_table(m);
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(8, 8);
    for (int x = 0; x < 8; ++x) h(x, x) = e[static_cast<std::size_t>(x)];
    for (double beta : {0.3, 1.0, 2.5}) {
      const Dilation fast = build_dilation(m, beta);
      const Dilation dense = build_dilation(h, beta);
      EXPECT_NEAR(fast.u, dense.u, 1e-12 * fast.u);
      EXPECT_LT((fast.U - dense.U).cwiseAbs().maxCoeff(), 1e-10);
    }
  }
}

TEST(Qite, GeneralHermitianInvariants) {
  Rng rng(5);
  Eigen::MatrixXcd a(4, 4);
  for (Eigen::Index i = 0; i < 4; ++i) {
    for (Eigen::Index j = 0; j < 4; ++j) a(i, j) = cplx(rng.uniform(-1, 1), rng.uniform(-1, 1));
  }
  const Eigen::MatrixXcd h = (a + a.adjoint()) / 2.0;
  const double beta = 0.8;
  const Dilation d = build_dilation(h, beta);
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(h);
  const Eigen::MatrixXcd expm =
      eig.eigenvectors() *
      eig.eigenvalues().unaryExpr([&](double l) { return std::exp(-beta * l); }).asDiagonal() *
      eig.eigenvectors().adjoint();
  EXPECT_LT((d.U * d.U.adjoint() - Eigen::MatrixXcd::Identity(8, 8)).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_LT((d.top_left() - d.u * expm).cwiseAbs().maxCoeff(), 1e-10);
  const Eigen::MatrixXcd tl = d.top_left();
  const Eigen::MatrixXcd c = d.lower_left();
  EXPECT_LT((tl.adjoint() * tl + c.adjoint() * c - Eigen::MatrixXcd::Identity(4, 4))
                .cwiseAbs()
                .maxCoeff(),
            1e-10);
}

TEST(Qite, InvalidInputs) {
  const IsingModel m = random_ising(2, 3);
  EXPECT_THROW(build_dilation(m, -0.1), ParameterError);
  const std::vector<double> deep{-1000.0, 0.0, 1.0, 2.0};
  EXPECT_THROW(build_dilation(deep, 1.0), RangeError);
  const std::vector<double> odd{0.0, 1.0, 2.0};
  EXPECT_THROW(build_dilation(odd, 1.0), ShapeError);
  Eigen::MatrixXcd nonherm = Eigen::MatrixXcd::Zero(2, 2);
  nonherm(0, 1) = 1.0;
  EXPECT_THROW(build_dilation(nonherm, 1.0), ParameterError);
}

TEST(Qite, ZeroBetaKeepsInitialState) {
  const IsingModel m = random_ising(4, 8);
  const QiteResult r = apply_qite_exact(build_dilation(m, 0.0), 1000, 1);
  EXPECT_NEAR(r.success_probability, 1.0, 1e-12);
  ASSERT_TRUE(r.state.has_value());
  EXPECT_NEAR(fidelity(*r.state, StateVector::uniform(4)), 1.0, 1e-12);
}

TEST(Qite, PostSelectedStateMatchesImaginaryTimeTarget) {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const IsingModel m = random_ising(5, 60 + seed);
    const std::vector<double> e = energy_table(m);
    const double beta = 0.5 + static_cast<double>(seed) * 0.5;
    const Dilation d = build_dilation(m, beta);
    Rng rng(seed);
    std::vector<cplx> amps(32);
    for (auto& a : amps) a = cplx(rng.uniform(-1, 1), rng.uniform(-1, 1));
    StateVector psi = StateVector::from_amplitudes(amps);
    psi.normalize();

    std::vector<cplx> target(32);
    double norm2 = 0.0;
    for (std::size_t x = 0; x < 32; ++x) {
      target[x] = std::exp(-beta * e[x]) * psi[x];
      norm2 += std::norm(target[x]) * d.u * d.u;
    }
    StateVector t = StateVector::from_amplitudes(target);
    t.normalize();

    const QiteResult r = apply_qite_exact(d, psi, 100, seed);
    EXPECT_GE(fidelity(*r.state, t), 1.0 - 1e-10);
    EXPECT_NEAR(r.success_probability, norm2, 1e-10);
  }
}

TEST(Qite, LargeBetaConcentratesOnGround) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const IsingModel m = random_ising(6, 300 + seed);
    const std::vector<double> e = energy_table(m);
    const double beta = 10.0 / spectral_gap(e);
    Dilation d;
    try {
      d = build_dilation(m, beta);
    } catch (const RangeError&) {
      continue;
    }
    const QiteResult r = apply_qite_exact(d, 8192, seed);
    EXPECT_EQ(r.histogram.mode(), m.ground->bits);
    EXPECT_GT(r.histogram.frequency(m.ground->bits.bits), 0.99);
  }
}

TEST(Qite, EnergyNonIncreasingInBeta) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Problem p = make_problem(generate_instance(PortfolioParams{}, seed));
    double previous = INFINITY;
    for (double beta : {0.0, 0.25, 0.5, 1.0, 2.0, 4.0}) {
      const QiteResult r = apply_qite_exact(build_dilation(p.ising, beta), 1, 0);
      EXPECT_LE(r.energy, previous + 1e-9) << "seed " << seed << " beta " << beta;
      previous = r.energy;
    }
  }
}

TEST(Qite, DefaultBetaClamped) {
  EXPECT_DOUBLE_EQ(default_beta(std::vector<double>{0.0, 1.0}), 2.0);
  EXPECT_DOUBLE_EQ(default_beta(std::vector<double>{0.0, 0.01}), 5.0);
  EXPECT_DOUBLE_EQ(default_beta(std::vector<double>{0.0, 100.0}), 0.1);
  EXPECT_DOUBLE_EQ(default_beta(std::vector<double>{3.0, 3.0}), 5.0);
}

TEST(Qite, CompileCostZeroForExactCircuit) {
  const Circuit one = build_layered_ansatz(1, 1, Entangler::ecr);
  const std::vector<double> zero(3, 0.0);
  EXPECT_NEAR(compile_cost(one, zero, Eigen::MatrixXcd::Identity(2, 2)), 0.0, 1e-15);

  // Two layers of one ECR each multiply to the identity.
  const Circuit two = build_layered_ansatz(2, 2, Entangler::ecr);
  const std::vector<double> z12(12, 0.0);
  const Dilation d = build_dilation(std::vector<double>{0.3, -0.4}, 0.0);
  EXPECT_NEAR(compile_cost(two, z12, d.U), 0.0, 1e-14);
}

TEST(Qite, CompileCostMatchesTraceFormula) {
  const Circuit c = build_layered_ansatz(3, 2, Entangler::ecr);
  const std::vector<double> params = random_initial_params(c.num_parameters(), 2);
  const Dilation d = build_dilation(std::vector<double>{0.1, -0.5, 0.7, 0.2}, 1.3);
  const Eigen::MatrixXcd v = circuit_unitary(c, params);
  const double expected = 1.0 - (v.adjoint() * d.U).trace().real() / 8.0;
  EXPECT_NEAR(compile_cost(c, params, d.U), expected, 1e-12);
}

class QiteCompiled : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    model_ = new IsingModel;
    model_->n = 1;
    model_->h = Eigen::VectorXd::Constant(1, -0.6);
    model_->J = Eigen::MatrixXd::Zero(1, 1);
    model_->delta = 0.2;
    model_->ground = brute_force_ground(*model_);
    dilation_ = new Dilation(build_dilation(*model_, 3.0));
    OptimizerConfig opt;
    opt.max_evals = 2000;
    opt.rho_end = 1e-6;
    compiled_ = new CompiledQite(compile_qite_circuit(*dilation_, 4, opt));
  }
  static void TearDownTestSuite() {
    delete compiled_;
    delete dilation_;
    delete model_;
  }
  static IsingModel* model_;
  static Dilation* dilation_;
  static CompiledQite* compiled_;
};

IsingModel* QiteCompiled::model_ = nullptr;
Dilation* QiteCompiled::dilation_ = nullptr;
CompiledQite* QiteCompiled::compiled_ = nullptr;

TEST_F(QiteCompiled, TwoQubitDilationCompiles) {
  EXPECT_LE(compiled_->trace.evaluations.size(), 2000U);
  EXPECT_LT(compiled_->cost, 0.01);
  EXPECT_TRUE(compiled_->converged);
  EXPECT_TRUE(compiled_->circuit.is_bound());
}

TEST_F(QiteCompiled, CompiledRunFindsGround) {
  const QiteResult r = run_qite_compiled(compiled_->circuit, *model_, QiteRunConfig{}, 4);
  EXPECT_EQ(r.mode, QiteMode::compiled);
  EXPECT_EQ(r.histogram.mode(), model_->ground->bits);
  EXPECT_EQ(r.total_shots, 8192U);
  EXPECT_EQ(r.histogram.total(), r.kept_shots);
  EXPECT_DOUBLE_EQ(r.success_probability, static_cast<double>(r.kept_shots) / 8192.0);
}

TEST_F(QiteCompiled, TotalVariationBoundedByCompileCost) {
  const std::uint64_t dim = 2;
  std::vector<cplx> amps(4, 0.0);
  amps[0] = amps[1] = 1.0 / std::sqrt(2.0);
  const StateVector out = simulate(compiled_->circuit, StateVector::from_amplitudes(amps));
  double kept = 0.0;
  for (std::uint64_t x = 0; x < dim; ++x) kept += std::norm(out[x]);
  const QiteResult exact = apply_qite_exact(*dilation_, 1, 0);
  double tv = 0.0;
  for (std::uint64_t x = 0; x < dim; ++x) {
    tv += std::abs(std::norm(out[x]) / kept - std::norm((*exact.state)[x])) / 2.0;
  }
  EXPECT_LT(tv, 10.0 * std::max(compiled_->cost, 1e-12));
}

TEST(Qite, IdentityCircuitAtZeroBetaKeepsUniform) {
  IsingModel m;
  m.n = 1;
  m.h = Eigen::VectorXd::Constant(1, 0.4);
  m.J = Eigen::MatrixXd::Zero(1, 1);
  Circuit v = build_layered_ansatz(2, 2, Entangler::ecr);
  v.bind(std::vector<double>(12, 0.0));
  QiteRunConfig cfg;
  cfg.shots = 20000;
  cfg.noise = NoiseModel{NoiseKind::cx_x_flip, 0.0, 0};
  const QiteResult r = run_qite_compiled(v, m, cfg, 3);
  EXPECT_EQ(r.kept_shots, 20000U);
  EXPECT_DOUBLE_EQ(r.success_probability, 1.0);
  // Binomial 5 sigma band around 1/2.
  EXPECT_NEAR(r.histogram.frequency(0), 0.5, 5.0 * std::sqrt(0.25 / 20000.0));
}

TEST(Qite, SampledSuccessProbabilityWithinFiveSigma) {
  const IsingModel m = random_ising(2, 12);
  const Dilation d = build_dilation(m, 0.7);
  // Use a circuit whose unitary we know exactly to compare the two modes.
  Circuit v = build_layered_ansatz(3, 2, Entangler::ecr);
  v.bind(random_initial_params(v.num_parameters(), 6));
  std::vector<cplx> amps(8, 0.0);
  for (int x = 0; x < 4; ++x) amps[static_cast<std::size_t>(x)] = 0.5;
  const StateVector out = simulate(v, StateVector::from_amplitudes(amps));
  double p_keep = 0.0;
  for (std::size_t x = 0; x < 4; ++x) p_keep += std::norm(out[x]);
  QiteRunConfig cfg;
  cfg.shots = 50000;
  const QiteResult r = run_qite_compiled(v, m, cfg, 8);
  EXPECT_NEAR(r.success_probability, p_keep,
              5.0 * std::sqrt(p_keep * (1.0 - p_keep) / 50000.0));
  (void)d;
}

TEST(Qite, CompiledRunValidatesCircuit) {
  const IsingModel m = random_ising(2, 1);
  Circuit wrong = build_layered_ansatz(2, 1, Entangler::ecr);
  wrong.bind(std::vector<double>(6, 0.0));
  EXPECT_THROW(run_qite_compiled(wrong, m, QiteRunConfig{}, 0), ShapeError);
  const Circuit unbound = build_layered_ansatz(3, 1, Entangler::ecr);
  EXPECT_THROW(run_qite_compiled(unbound, m, QiteRunConfig{}, 0), BindingError);
}

TEST(Qite, ModeNames) {
  EXPECT_EQ(parse_qite_mode("compiled"), QiteMode::compiled);
  EXPECT_EQ(qite_mode_name(QiteMode::exact), "exact");
  EXPECT_THROW(parse_qite_mode("trotter"), ParameterError);
}

}  // namespace
}  // namespace qport
