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
#include <span>

#include <Eigen/Dense>

namespace qport {

/// Investor preference weights for return, risk and budget deviation.
struct Theta {
  double return_weight = 0.8;
  double risk_weight = 0.1;
  double budget_weight = 0.1;
};

/// Shape and budget of a Markowitz problem.
struct PortfolioParams {
  int assets = 3;          // m
  int slices = 3;          // w, binary digits per asset
  int history = 100;       // N_f, price points per asset
  double budget = 10.0;    // b
  Theta theta{};

  /// Quantized minimum investment fraction 2^(1 - w).
  double fraction() const;
  /// Largest admissible allocation integer per asset, 2^w - 1.
  int max_allocation() const;
  /// Number of binary variables m * w.
  int qubits() const { return assets * slices; }
};

/// Throws ParameterError unless every field is usable.
void validate(const PortfolioParams& params);

/// Synthetic price history of one problem instance.
struct PortfolioInstance {
  PortfolioParams params;
  std::uint64_t seed = 0;
  int id = 0;
  /// prices(u, l): price of asset u at history point l, shape (m, N_f).
  Eigen::MatrixXd prices;
};

/// Expected returns and covariance, both budget-scaled.
struct FinancialSummary {
  Eigen::VectorXd expected_return;  // r_u
  Eigen::MatrixXd covariance;       // c_{u,v}
  double fraction = 0.0;            // p_w
};

/// Draws a base price per asset uniformly from [b/10, b], then every history
/// point as (1 + alpha) * base with alpha ~ U[-0.25, 0.25] drawn independently
/// per (asset, point). Deterministic in `seed`.
PortfolioInstance generate_instance(const PortfolioParams& params,
                                    std::uint64_t seed, int id = 0);

/// Instance `id` of a batch generated from `batch_seed`; each id gets its own
/// derived stream so instances are independent of batch size and order.
PortfolioInstance generate_batch_instance(const PortfolioParams& params,
                                          std::uint64_t batch_seed, int id);

/// Budget-scaled expected returns (mean consecutive price change divided by the
/// final price) and sample covariance (divisor N_f - 1) of the price history.
FinancialSummary summarize(const PortfolioInstance& instance);

/// Markowitz objective with the budget penalty applied to the total allocation:
///   theta1 * sum r_u z_u - theta2 * sum c_uv z_u z_v
///     - theta3 * (sum z_u p_w b - b)^2
double objective(const PortfolioInstance& instance,
                 const FinancialSummary& summary, std::span<const int> z);

}  // namespace qport
