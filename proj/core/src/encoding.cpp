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

#include "qport/encoding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qport/error.hpp"

namespace qport {

namespace {

double spin(const Bitstring& x, int i) { return x[i] ? 1.0 : -1.0; }

std::uint64_t reverse_bits(std::uint64_t v, int n) {
  std::uint64_t r = 0;
  for (int i = 0; i < n; ++i) r |= ((v >> i) & 1U) << (n - 1 - i);
  return r;
}

void check_enumerable(int n) {
  if (n < 0 || n > kMaxEnumerationQubits) {
    throw CapacityError("exhaustive enumeration supports at most " +
                        std::to_string(kMaxEnumerationQubits) + " qubits (got " +
                        std::to_string(n) + ")");
  }
}

}  // namespace

std::string to_string(const Bitstring& b, BitOrder order) {
  std::string s(static_cast<std::size_t>(b.n), '0');
  for (int i = 0; i < b.n; ++i) {
    const int pos = order == BitOrder::canonical ? i : b.n - 1 - i;
    if (b[i]) s[static_cast<std::size_t>(pos)] = '1';
  }
  return s;
}

Bitstring parse_bitstring(std::string_view text, BitOrder order) {
  const int n = static_cast<int>(text.size());
  if (n > 64) throw RangeError("bitstrings are limited to 64 bits");
  Bitstring b{n, 0};
  for (int pos = 0; pos < n; ++pos) {
    const char c = text[static_cast<std::size_t>(pos)];
    if (c != '0' && c != '1') {
      throw ParseError("bitstring '" + std::string(text) +
                       "' contains a character other than 0/1");
    }
    const int i = order == BitOrder::canonical ? pos : n - 1 - pos;
    if (c == '1') b.bits |= std::uint64_t{1} << i;
  }
  return b;
}

BitOrder parse_bit_order(std::string_view name) {
  if (name == "canonical") return BitOrder::canonical;
  if (name == "reversed") return BitOrder::reversed;
  throw ParameterError("bit order must be 'canonical' or 'reversed'");
}

bool canonical_less(const Bitstring& a, const Bitstring& b) {
  if (a.n != b.n) return a.n < b.n;
  return reverse_bits(a.bits, a.n) < reverse_bits(b.bits, b.n);
}

Bitstring encode_z(std::span<const int> z, int slices) {
  const int n = static_cast<int>(z.size()) * slices;
  if (n > 64) throw RangeError("encoding exceeds 64 binary variables");
  Bitstring x{n, 0};
  const int zmax = (1 << slices) - 1;
  for (std::size_t u = 0; u < z.size(); ++u) {
    if (z[u] < 0 || z[u] > zmax) {
      throw RangeError("z[" + std::to_string(u) + "] = " + std::to_string(z[u]) +
                       " outside [0, " + std::to_string(zmax) + "]");
    }
    x.bits |= static_cast<std::uint64_t>(z[u]) << (u * slices);
  }
  return x;
}

std::vector<int> decode_z(const Bitstring& x, int slices) {
  if (slices < 1 || x.n % slices != 0) {
    throw ShapeError("bitstring length must be a multiple of the slice count");
  }
  const int m = x.n / slices;
  const std::uint64_t mask = (std::uint64_t{1} << slices) - 1;
  std::vector<int> z(static_cast<std::size_t>(m));
  for (int u = 0; u < m; ++u) {
    z[static_cast<std::size_t>(u)] =
        static_cast<int>((x.bits >> (u * slices)) & mask);
  }
  return z;
}

double qubo_value(const QuboModel& model, const Bitstring& x) {
  if (x.n != model.n) throw ShapeError("bitstring length differs from QUBO size");
  double value = model.gamma;
  for (int i = 0; i < model.n; ++i) {
    if (!x[i]) continue;
    value += model.q(i);
    for (int j = 0; j < model.n; ++j) {
      if (x[j]) value += model.Q(i, j);
    }
  }
  return value;
}

double ising_energy(const IsingModel& model, const Bitstring& x) {
  if (x.n != model.n) {
    throw ShapeError("bitstring length differs from Ising size");
  }
  double energy = model.delta;
  for (int i = 0; i < model.n; ++i) {
    const double si = spin(x, i);
    energy += model.h(i) * si;
    for (int j = 0; j < model.n; ++j) energy += model.J(i, j) * si * spin(x, j);
  }
  return energy;
}

std::vector<double> energy_table(const IsingModel& model) {
  const int n = model.n;
  check_enumerable(n);
  const std::size_t dim = std::size_t{1} << n;
  std::vector<double> e(dim);

  // All spins down.
  e[0] = model.delta - model.h.sum() + model.J.sum();
  // Symmetric coupling seen by spin t from every other spin.
  const Eigen::MatrixXd K = model.J + model.J.transpose();
  for (int t = 0; t < n; ++t) {
    const std::size_t top = std::size_t{1} << t;
    for (std::size_t rest = 0; rest < top; ++rest) {
      // Flip spin t from -1 to +1 on top of pattern `rest` (bits above t are 0).
      double field = model.h(t);
      for (int j = 0; j < n; ++j) {
        if (j == t) continue;
        const double sj = (j < t && ((rest >> j) & 1U)) ? 1.0 : -1.0;
        field += K(t, j) * sj;
      }
      e[top | rest] = e[rest] + 2.0 * field;
    }
  }
  return e;
}

QuboModel build_qubo(const PortfolioInstance& instance,
                     const FinancialSummary& summary) {
  const PortfolioParams& p = instance.params;
  const int m = p.assets;
  const int w = p.slices;
  if (summary.expected_return.size() != m || summary.covariance.rows() != m ||
      summary.covariance.cols() != m) {
    throw ShapeError("summary dimensions do not match the instance");
  }
  const int n = m * w;
  const double pw = p.fraction();
  const double b2 = p.budget * p.budget;
  const Theta& th = p.theta;

  QuboModel qubo{n, Eigen::VectorXd(n), Eigen::MatrixXd(n, n),
                 th.budget_weight * b2};
  for (int u = 0; u < m; ++u) {
    for (int k = 0; k < w; ++k) {
      const int i = u * w + k;
      const double wk = std::ldexp(1.0, k);
      qubo.q(i) = -th.return_weight * wk * summary.expected_return(u) -
                  2.0 * th.budget_weight * b2 * pw * wk;
      for (int v = 0; v < m; ++v) {
        for (int kk = 0; kk < w; ++kk) {
          const int j = v * w + kk;
          const double wkk = std::ldexp(1.0, kk);
          qubo.Q(i, j) = th.risk_weight * wk * wkk * summary.covariance(u, v) +
                         th.budget_weight * b2 * pw * pw * wk * wkk;
        }
      }
    }
  }
  return qubo;
}

IsingModel build_ising(const QuboModel& qubo) {
  const int n = qubo.n;
  if (qubo.q.size() != n || qubo.Q.rows() != n || qubo.Q.cols() != n) {
    throw ShapeError("QUBO coefficient shapes do not match n");
  }
  IsingModel ising;
  ising.n = n;
  ising.J = qubo.Q / 4.0;
  // (Q + Q^T)/4 row sums equal the usual sum_j Q_ij / 2 whenever Q is
  // symmetric, and stay exact for asymmetric input.
  ising.h = qubo.q / 2.0 +
            (qubo.Q + qubo.Q.transpose()).rowwise().sum() / 4.0;
  ising.delta = qubo.Q.sum() / 4.0 + qubo.q.sum() / 2.0 + qubo.gamma;
  return ising;
}

GroundState brute_force_ground(std::span<const double> energies, int n) {
  check_enumerable(n);
  if (energies.size() != (std::size_t{1} << n)) {
    throw ShapeError("energy table length must be 2^n");
  }
  GroundState best{energies[0], Bitstring{n, 0}};
  for (std::size_t x = 1; x < energies.size(); ++x) {
    const Bitstring cand{n, x};
    if (energies[x] < best.energy ||
        (energies[x] == best.energy && canonical_less(cand, best.bits))) {
      best = {energies[x], cand};
    }
  }
  return best;
}

GroundState brute_force_ground(const IsingModel& model) {
  check_enumerable(model.n);
  const std::vector<double> e = energy_table(model);
  return brute_force_ground(e, model.n);
}

double spectral_gap(std::span<const double> energies) {
  if (energies.empty()) return 0.0;
  const double e0 = *std::min_element(energies.begin(), energies.end());
  const double tol = 1e-9 * std::max(1.0, std::abs(e0));
  double gap = std::numeric_limits<double>::infinity();
  for (double e : energies) {
    if (e - e0 > tol) gap = std::min(gap, e - e0);
  }
  return std::isfinite(gap) ? gap : 0.0;
}

Problem make_problem(PortfolioInstance instance) {
  Problem p;
  p.summary = summarize(instance);
  p.qubo = build_qubo(instance, p.summary);
  p.ising = build_ising(p.qubo);
  p.ising.ground = brute_force_ground(p.ising);
  p.instance = std::move(instance);
  return p;
}

double objective_of(const Problem& problem, const Bitstring& x) {
  const std::vector<int> z = decode_z(x, problem.instance.params.slices);
  return objective(problem.instance, problem.summary, z);
}

double max_objective(const Problem& problem) {
  const int n = problem.instance.params.qubits();
  check_enumerable(n);
  double best = -std::numeric_limits<double>::infinity();
  for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x) {
    best = std::max(best, objective_of(problem, Bitstring{n, x}));
  }
  return best;
}

}  // namespace qport
