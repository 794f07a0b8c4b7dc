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

#include "qport/portfolio.hpp"

#include <cmath>
#include <string>

#include "qport/error.hpp"
#include "qport/rng.hpp"

namespace qport {

double PortfolioParams::fraction() const { return std::ldexp(1.0, 1 - slices); }

int PortfolioParams::max_allocation() const { return (1 << slices) - 1; }

void validate(const PortfolioParams& params) {
  if (params.assets < 1 || params.slices < 1 || params.history < 1) {
    throw ParameterError("assets, slices and history must all be >= 1");
  }
  if (params.slices > 30) {
    throw ParameterError("slices must be <= 30");
  }
  if (!(params.budget > 0.0) || !std::isfinite(params.budget)) {
    throw ParameterError("budget must be a positive finite number");
  }
  const Theta& t = params.theta;
  if (t.return_weight < 0.0 || t.risk_weight < 0.0 || t.budget_weight < 0.0) {
    throw ParameterError("theta weights must be non-negative");
  }
  const double sum = t.return_weight + t.risk_weight + t.budget_weight;
  if (std::abs(sum - 1.0) > 1e-12) {
    throw ParameterError("theta weights must sum to 1 (got " +
                         std::to_string(sum) + ")");
  }
}

PortfolioInstance generate_instance(const PortfolioParams& params,
                                    std::uint64_t seed, int id) {
  validate(params);
  PortfolioInstance instance{params, seed, id,
                             Eigen::MatrixXd(params.assets, params.history)};
  Rng rng(seed);
  const double b = params.budget;
  for (int u = 0; u < params.assets; ++u) {
    const double base = rng.uniform(b / 10.0, b);
    for (int l = 0; l < params.history; ++l) {
      const double alpha = rng.uniform(-0.25, 0.25);
      instance.prices(u, l) = (1.0 + alpha) * base;
    }
  }
  return instance;
}

PortfolioInstance generate_batch_instance(const PortfolioParams& params,
                                          std::uint64_t batch_seed, int id) {
  return generate_instance(
      params, derive_seed(batch_seed, static_cast<std::uint64_t>(id)), id);
}

FinancialSummary summarize(const PortfolioInstance& instance) {
  const PortfolioParams& p = instance.params;
  const Eigen::MatrixXd& a = instance.prices;
  if (a.rows() != p.assets || a.cols() != p.history) {
    throw ShapeError("price matrix must have shape (assets, history)");
  }
  if (p.history < 2) {
    throw InsufficientHistoryError("at least two price points are required");
  }
  if ((a.array() <= 0.0).any()) {
    throw ParameterError("prices must be strictly positive");
  }

  const int m = p.assets;
  const int nf = p.history;
  const double pw = p.fraction();
  const double b = p.budget;
  const double denom = static_cast<double>(nf - 1);

  FinancialSummary s;
  s.fraction = pw;
  s.expected_return.resize(m);
  for (int u = 0; u < m; ++u) {
    double diff_sum = 0.0;
    for (int l = 0; l + 1 < nf; ++l) diff_sum += a(u, l + 1) - a(u, l);
    s.expected_return(u) = b * pw / a(u, nf - 1) * diff_sum / denom;
  }

  const Eigen::VectorXd mean = a.rowwise().mean();
  const Eigen::MatrixXd centered = a.colwise() - mean;
  s.covariance.resize(m, m);
  for (int u = 0; u < m; ++u) {
    for (int v = u; v < m; ++v) {
      const double cov = centered.row(u).dot(centered.row(v)) / denom;
      const double scale = b * b * pw * pw / (a(u, nf - 1) * a(v, nf - 1));
      s.covariance(u, v) = scale * cov;
      s.covariance(v, u) = s.covariance(u, v);
    }
  }
  return s;
}

double objective(const PortfolioInstance& instance,
                 const FinancialSummary& summary, std::span<const int> z) {
  const PortfolioParams& p = instance.params;
  if (static_cast<int>(z.size()) != p.assets) {
    throw ShapeError("allocation vector length must equal the asset count");
  }
  const int zmax = p.max_allocation();
  for (int zu : z) {
    if (zu < 0 || zu > zmax) {
      throw RangeError("allocation entries must lie in [0, 2^w - 1]");
    }
  }
  const double pw = p.fraction();
  const double b = p.budget;
  double ret = 0.0;
  double risk = 0.0;
  double total = 0.0;
  for (int u = 0; u < p.assets; ++u) {
    ret += summary.expected_return(u) * z[u];
    total += z[u];
    for (int v = 0; v < p.assets; ++v) {
      risk += summary.covariance(u, v) * z[u] * z[v];
    }
  }
  const double deviation = total * pw * b - b;
  return p.theta.return_weight * ret - p.theta.risk_weight * risk -
         p.theta.budget_weight * deviation * deviation;
}

}  // namespace qport
