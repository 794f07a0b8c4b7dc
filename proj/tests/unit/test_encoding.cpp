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
#include <limits>

#include "qport/encoding.hpp"
#include "qport/error.hpp"
#include "qport/rng.hpp"

namespace qport {
namespace {

IsingModel random_ising(int n, std::uint64_t seed, bool symmetric = false) {
  Rng rng(seed);
  IsingModel m;
  m.n = n;
  m.h.resize(n);
  m.J.resize(n, n);
  for (int i = 0; i < n; ++i) m.h(i) = rng.uniform(-1.0, 1.0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) m.J(i, j) = rng.uniform(-1.0, 1.0);
  }
  if (symmetric) m.J = (m.J + m.J.transpose()).eval() / 2.0;
  m.delta = rng.uniform(-3.0, 3.0);
  return m;
}

// Direct evaluation with s = 2x - 1, independent of the library.
double spin_energy(const IsingModel& m, std::uint64_t x) {
  double e = m.delta;
  for (int i = 0; i < m.n; ++i) {
    const double si = ((x >> i) & 1U) ? 1.0 : -1.0;
    e += m.h(i) * si;
    for (int j = 0; j < m.n; ++j) {
      const double sj = ((x >> j) & 1U) ? 1.0 : -1.0;
      e += m.J(i, j) * si * sj;
    }
  }
  return e;
}

TEST(Encoding, OptimalStringDecodesToHalfQuarterQuarter) {
  const Bitstring x = parse_bitstring("010100100");
  const std::vector<int> z = decode_z(x, 3);
  ASSERT_EQ(z, (std::vector<int>{2, 1, 1}));
  EXPECT_DOUBLE_EQ(z[0] * 0.25, 0.5);
  EXPECT_DOUBLE_EQ(z[1] * 0.25, 0.25);
  EXPECT_DOUBLE_EQ(z[2] * 0.25, 0.25);
}

TEST(Encoding, ZeroAllocationIsZeroString) {
  const std::array<int, 3> z{0, 0, 0};
  const Bitstring x = encode_z(z, 3);
  EXPECT_EQ(x.n, 9);
  EXPECT_EQ(x.bits, 0U);
  EXPECT_EQ(to_string(x), "000000000");
}

TEST(Encoding, RoundTripAllAllocations) {
  for (std::uint64_t bits = 0; bits < 512; ++bits) {
    const Bitstring x{9, bits};
    const std::vector<int> z = decode_z(x, 3);
    EXPECT_EQ(encode_z(z, 3), x);
  }
}

TEST(Encoding, OutOfRangeAllocationRejected) {
  const std::array<int, 2> z{8, 0};
  EXPECT_THROW(encode_z(z, 3), RangeError);
  const std::array<int, 2> neg{-1, 0};
  EXPECT_THROW(encode_z(neg, 3), RangeError);
}

TEST(Encoding, ReversedRenderingWritesHighestBitFirst) {
  const Bitstring x = parse_bitstring("010100100");
  EXPECT_EQ(to_string(x, BitOrder::reversed), "001001010");
  EXPECT_EQ(parse_bitstring("001001010", BitOrder::reversed), x);
  EXPECT_EQ(parse_bit_order("reversed"), BitOrder::reversed);
  EXPECT_THROW(parse_bit_order("little"), ParameterError);
  EXPECT_THROW(parse_bitstring("01a"), ParseError);
}

TEST(Encoding, CanonicalOrderIsLexicographic) {
  // "100" (x0 = 1) sorts after "010" (x1 = 1).
  EXPECT_TRUE(canonical_less(Bitstring{3, 2}, Bitstring{3, 1}));
  EXPECT_FALSE(canonical_less(Bitstring{3, 1}, Bitstring{3, 2}));
  for (std::uint64_t a = 0; a < 16; ++a) {
    for (std::uint64_t b = 0; b < 16; ++b) {
      EXPECT_EQ(canonical_less(Bitstring{4, a}, Bitstring{4, b}),
                to_string(Bitstring{4, a}) < to_string(Bitstring{4, b}));
    }
  }
}

TEST(Encoding, QuboOffsetIsBudgetPenalty) {
  const Problem p = make_problem(generate_instance(PortfolioParams{}, 3));
  EXPECT_NEAR(p.qubo.gamma, 10.0, 1e-12);
}

TEST(Encoding, FlatMarketQuboIsPurePenalty) {
  PortfolioInstance inst;
  inst.prices = Eigen::MatrixXd::Constant(3, 6, 5.0);
  inst.params.history = 6;
  const QuboModel q = build_qubo(inst, summarize(inst));
  for (int u = 0; u < 3; ++u) {
    for (int k = 0; k < 3; ++k) {
      const int i = 3 * u + k;
      EXPECT_NEAR(q.q(i), -2.0 * 0.1 * 100.0 * 0.25 * std::ldexp(1.0, k), 1e-12);
      for (int v = 0; v < 3; ++v) {
        for (int l = 0; l < 3; ++l) {
          EXPECT_NEAR(q.Q(i, 3 * v + l),
                      0.1 * 100.0 * 0.0625 * std::ldexp(1.0, k) * std::ldexp(1.0, l),
                      1e-12);
        }
      }
    }
  }
}

TEST(Encoding, ChainIdentityExhaustive) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Problem p = make_problem(generate_instance(PortfolioParams{}, seed));
    const std::vector<double> table = energy_table(p.ising);
    for (std::uint64_t bits = 0; bits < 512; ++bits) {
      const Bitstring x{9, bits};
      const std::vector<int> z = decode_z(x, 3);
      const double f = objective(p.instance, p.summary, z);
      const double qv = qubo_value(p.qubo, x);
      EXPECT_NEAR(-f, qv, 1e-9);
      EXPECT_NEAR(qv, ising_energy(p.ising, x), 1e-12 * std::max(1.0, std::abs(qv)));
      EXPECT_NEAR(table[bits], qv, 1e-9);
    }
  }
}

TEST(Encoding, SingleVariableIsingByHand) {
  QuboModel q;
  q.n = 1;
  q.q = Eigen::VectorXd::Constant(1, 2.0);
  q.Q = Eigen::MatrixXd::Zero(1, 1);
  const IsingModel m = build_ising(q);
  EXPECT_DOUBLE_EQ(m.h(0), 1.0);
  EXPECT_DOUBLE_EQ(m.delta, 1.0);
  EXPECT_DOUBLE_EQ(ising_energy(m, Bitstring{1, 0}), 0.0);
  EXPECT_DOUBLE_EQ(ising_energy(m, Bitstring{1, 1}), 2.0);
}

TEST(Encoding, ZeroQuboGivesZeroIsing) {
  QuboModel q;
  q.n = 3;
  q.q = Eigen::VectorXd::Zero(3);
  q.Q = Eigen::MatrixXd::Zero(3, 3);
  const IsingModel m = build_ising(q);
  EXPECT_EQ(m.h.cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(m.J.cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(m.delta, 0.0);
}

TEST(Encoding, IsingMatchesAsymmetricQubo) {
  Rng rng(17);
  QuboModel q;
  q.n = 6;
  q.q.resize(6);
  q.Q.resize(6, 6);
  for (int i = 0; i < 6; ++i) q.q(i) = rng.uniform(-2.0, 2.0);
  for (int i = 0; i < 6; ++i) {
    for (int j = 0; j < 6; ++j) q.Q(i, j) = rng.uniform(-2.0, 2.0);
  }
  q.gamma = 0.3;
  const IsingModel m = build_ising(q);
  for (std::uint64_t bits = 0; bits < 64; ++bits) {
    EXPECT_NEAR(ising_energy(m, Bitstring{6, bits}), qubo_value(q, Bitstring{6, bits}),
                1e-12);
  }
}

TEST(Encoding, SymmetrizationLeavesQuboValuesUnchanged) {
  const Problem p = make_problem(generate_instance(PortfolioParams{}, 8));
  QuboModel sym = p.qubo;
  sym.Q = (p.qubo.Q + p.qubo.Q.transpose()) / 2.0;
  for (std::uint64_t bits = 0; bits < 512; ++bits) {
    const Bitstring x{9, bits};
    EXPECT_NEAR(qubo_value(sym, x), qubo_value(p.qubo, x), 1e-9);
  }
}

TEST(Encoding, IsingEnergyExamples) {
  IsingModel flat;
  flat.n = 2;
  flat.h = Eigen::VectorXd::Zero(2);
  flat.J = Eigen::MatrixXd::Zero(2, 2);
  flat.delta = 5.0;
  for (std::uint64_t b = 0; b < 4; ++b) EXPECT_EQ(ising_energy(flat, Bitstring{2, b}), 5.0);

  IsingModel one;
  one.n = 1;
  one.h = Eigen::VectorXd::Constant(1, 1.0);
  one.J = Eigen::MatrixXd::Zero(1, 1);
  EXPECT_EQ(ising_energy(one, Bitstring{1, 0}), -1.0);
  EXPECT_EQ(ising_energy(one, Bitstring{1, 1}), 1.0);
  EXPECT_THROW(ising_energy(one, Bitstring{2, 0}), ShapeError);
}

TEST(Encoding, EnergyTableMatchesDirectSum) {
  for (int n : {1, 2, 5, 10}) {
    const IsingModel m = random_ising(n, 100 + static_cast<std::uint64_t>(n));
    const std::vector<double> table = energy_table(m);
    ASSERT_EQ(table.size(), std::size_t{1} << n);
    for (std::uint64_t x = 0; x < table.size(); ++x) {
      EXPECT_NEAR(table[x], spin_energy(m, x), 1e-11);
    }
  }
}

TEST(Encoding, BruteForceTwoFreeSpins) {
  IsingModel m;
  m.n = 2;
  m.h = Eigen::VectorXd::Ones(2);
  m.J = Eigen::MatrixXd::Zero(2, 2);
  m.delta = 0.75;
  const GroundState g = brute_force_ground(m);
  EXPECT_EQ(g.bits, (Bitstring{2, 0}));
  EXPECT_DOUBLE_EQ(g.energy, -2.0 + 0.75);
}

TEST(Encoding, BruteForceTiesPickCanonicalSmallest) {
  // Indices 1 ("100") and 2 ("010") tie; "010" is smaller.
  const std::vector<double> e{3.0, -1.0, -1.0, 0.0};
  EXPECT_EQ(brute_force_ground(e, 2).bits, (Bitstring{2, 2}));
  const std::vector<double> flat(8, 1.0);
  EXPECT_EQ(brute_force_ground(flat, 3).bits, (Bitstring{3, 0}));
}

TEST(Encoding, ArgminInvariantUnderOffset) {
  IsingModel m = random_ising(8, 4);
  const GroundState a = brute_force_ground(m);
  m.delta += 123.25;
  const GroundState b = brute_force_ground(m);
  EXPECT_EQ(a.bits, b.bits);
  EXPECT_NEAR(b.energy - a.energy, 123.25, 1e-9);
}

TEST(Encoding, BruteForceCapacityLimit) {
  IsingModel m;
  m.n = 25;
  m.h = Eigen::VectorXd::Zero(25);
  m.J = Eigen::MatrixXd::Zero(25, 25);
  EXPECT_THROW(brute_force_ground(m), CapacityError);
}

TEST(Encoding, GroundAgreesWithObjectiveMaximum) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Problem p = make_problem(generate_instance(PortfolioParams{}, seed));
    ASSERT_TRUE(p.ising.ground.has_value());
    double best = -std::numeric_limits<double>::infinity();
    std::uint64_t arg = 0;
    for (std::uint64_t bits = 0; bits < 512; ++bits) {
      const double f = objective_of(p, Bitstring{9, bits});
      if (f > best) {
        best = f;
        arg = bits;
      }
    }
    EXPECT_EQ(p.ising.ground->bits.bits, arg);
    EXPECT_NEAR(max_objective(p), best, 1e-12);
    EXPECT_NEAR(-best, p.ising.ground->energy, 1e-9);
  }
}

TEST(Encoding, SpectralGap) {
  const std::vector<double> e{2.0, -1.0, -1.0, 0.5};
  EXPECT_DOUBLE_EQ(spectral_gap(e), 1.5);
  const std::vector<double> flat(4, 3.0);
  EXPECT_EQ(spectral_gap(flat), 0.0);
}

}  // namespace
}  // namespace qport
