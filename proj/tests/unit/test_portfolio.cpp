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

#include <Eigen/Eigenvalues>

#include "qport/error.hpp"
#include "qport/portfolio.hpp"

namespace qport {
namespace {

PortfolioInstance with_prices(const PortfolioParams& params, Eigen::MatrixXd prices) {
  PortfolioInstance inst;
  inst.params = params;
  inst.params.assets = static_cast<int>(prices.rows());
  inst.params.history = static_cast<int>(prices.cols());
  inst.prices = std::move(prices);
  return inst;
}

TEST(Portfolio, DefaultInstancePricesInRange) {
  const PortfolioInstance inst = generate_instance(PortfolioParams{}, 11);
  ASSERT_EQ(inst.prices.rows(), 3);
  ASSERT_EQ(inst.prices.cols(), 100);
  EXPECT_GE(inst.prices.minCoeff(), 0.75);
  EXPECT_LE(inst.prices.maxCoeff(), 12.5);
}

TEST(Portfolio, MinimalShapeStaysNearOneBase) {
  PortfolioParams p;
  p.assets = 1;
  p.slices = 1;
  p.history = 2;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const PortfolioInstance inst = generate_instance(p, seed);
    ASSERT_EQ(inst.prices.rows(), 1);
    ASSERT_EQ(inst.prices.cols(), 2);
    EXPECT_LE(inst.prices.maxCoeff() / inst.prices.minCoeff(), 1.25 / 0.75 + 1e-12);
  }
}

TEST(Portfolio, GenerationIsDeterministic) {
  const PortfolioInstance a = generate_instance(PortfolioParams{}, 99);
  const PortfolioInstance b = generate_instance(PortfolioParams{}, 99);
  EXPECT_TRUE(a.prices == b.prices);
  const PortfolioInstance c = generate_instance(PortfolioParams{}, 100);
  EXPECT_FALSE(a.prices == c.prices);
}

TEST(Portfolio, BatchInstancesIndependentOfOrder) {
  const PortfolioInstance a = generate_batch_instance(PortfolioParams{}, 7, 3);
  const PortfolioInstance b = generate_batch_instance(PortfolioParams{}, 7, 3);
  const PortfolioInstance c = generate_batch_instance(PortfolioParams{}, 7, 4);
  EXPECT_TRUE(a.prices == b.prices);
  EXPECT_FALSE(a.prices == c.prices);
  EXPECT_EQ(a.id, 3);
}

TEST(Portfolio, ThetaMustBeNonNegativeAndSumToOne) {
  PortfolioParams p;
  p.theta = {0.5, 0.5, 0.1};
  EXPECT_THROW(generate_instance(p, 1), ParameterError);
  p.theta = {1.2, -0.1, -0.1};
  EXPECT_THROW(generate_instance(p, 1), ParameterError);
  p.theta = {1.0, 0.0, 0.0};
  EXPECT_NO_THROW(generate_instance(p, 1));
}

TEST(Portfolio, ConstantPricesGiveZeroMoments) {
  Eigen::MatrixXd prices = Eigen::MatrixXd::Constant(3, 10, 4.0);
  const FinancialSummary s = summarize(with_prices(PortfolioParams{}, prices));
  EXPECT_EQ(s.expected_return.cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(s.covariance.cwiseAbs().maxCoeff(), 0.0);
}

TEST(Portfolio, LinearPriceReturnByHand) {
  Eigen::MatrixXd prices(1, 3);
  prices << 1.0, 2.0, 3.0;
  PortfolioParams p;
  p.slices = 3;
  const FinancialSummary s = summarize(with_prices(p, prices));
  EXPECT_DOUBLE_EQ(s.fraction, 0.25);
  // (10 * 0.25 / 3) * (1 + 1) / 2
  EXPECT_NEAR(s.expected_return(0), 10.0 * 0.25 / 3.0, 1e-15);
  EXPECT_NEAR(s.expected_return(0), 0.8333333333333334, 1e-15);
  // Sample variance of {1,2,3} is 1; scale 10^2 * 0.25^2 / 3^2.
  EXPECT_NEAR(s.covariance(0, 0), 100.0 * 0.0625 / 9.0, 1e-14);
}

TEST(Portfolio, AntiCorrelatedAssetsHaveNegativeCovariance) {
  Eigen::MatrixXd prices(2, 4);
  prices << 1.0, 2.0, 1.0, 2.0,
            2.0, 1.0, 2.0, 1.0;
  const FinancialSummary s = summarize(with_prices(PortfolioParams{}, prices));
  EXPECT_LT(s.covariance(0, 1), 0.0);
  EXPECT_DOUBLE_EQ(s.covariance(0, 1), s.covariance(1, 0));
}

TEST(Portfolio, ShortHistoryRejected) {
  Eigen::MatrixXd prices = Eigen::MatrixXd::Constant(2, 1, 3.0);
  EXPECT_THROW(summarize(with_prices(PortfolioParams{}, prices)),
               InsufficientHistoryError);
}

TEST(Portfolio, CovarianceSymmetricPositiveSemidefinite) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const FinancialSummary s = summarize(generate_instance(PortfolioParams{}, seed));
    EXPECT_LT((s.covariance - s.covariance.transpose()).cwiseAbs().maxCoeff(), 1e-12);
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(s.covariance);
    EXPECT_GT(eig.eigenvalues().minCoeff(), -1e-9);
  }
}

TEST(Portfolio, MomentsInvariantUnderCommonPriceScale) {
  PortfolioInstance inst = generate_instance(PortfolioParams{}, 5);
  const FinancialSummary a = summarize(inst);
  inst.prices *= 3.7;
  const FinancialSummary b = summarize(inst);
  EXPECT_LT((a.expected_return - b.expected_return).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT((a.covariance - b.covariance).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Portfolio, EmptyAllocationPaysFullBudgetPenalty) {
  const PortfolioInstance inst = generate_instance(PortfolioParams{}, 1);
  const FinancialSummary s = summarize(inst);
  const std::array<int, 3> z{0, 0, 0};
  EXPECT_NEAR(objective(inst, s, z), -10.0, 1e-12);
}

TEST(Portfolio, FullyInvestedFlatMarketScoresZero) {
  PortfolioParams p;
  p.slices = 3;
  Eigen::MatrixXd prices = Eigen::MatrixXd::Constant(2, 5, 2.0);
  const PortfolioInstance inst = with_prices(p, prices);
  const FinancialSummary s = summarize(inst);
  const std::array<int, 2> z{2, 2};  // 2 * 0.25 + 2 * 0.25 = 1
  EXPECT_DOUBLE_EQ(objective(inst, s, z), 0.0);
}

TEST(Portfolio, ObjectiveMatchesDirectFormula) {
  const PortfolioInstance inst = generate_instance(PortfolioParams{}, 21);
  const FinancialSummary s = summarize(inst);
  const std::array<int, 3> z{5, 0, 3};
  const Eigen::Vector3d zv(5, 0, 3);
  const double b = 10.0, pw = 0.25;
  const double expected = 0.8 * s.expected_return.dot(zv) -
                          0.1 * zv.dot(s.covariance * zv) -
                          0.1 * std::pow(zv.sum() * pw * b - b, 2);
  EXPECT_NEAR(objective(inst, s, z), expected, 1e-12);
}

TEST(Portfolio, ObjectiveRejectsBadAllocations) {
  const PortfolioInstance inst = generate_instance(PortfolioParams{}, 2);
  const FinancialSummary s = summarize(inst);
  const std::array<int, 2> short_z{1, 1};
  EXPECT_THROW(objective(inst, s, short_z), ShapeError);
  const std::array<int, 3> big{8, 0, 0};
  EXPECT_THROW(objective(inst, s, big), RangeError);
}

}  // namespace
}  // namespace qport
