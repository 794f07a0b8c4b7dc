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

#include "qport/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <ostream>
#include <string>

#include <Eigen/Dense>

#include "qport/error.hpp"
#include "qport/rng.hpp"

namespace qport {

std::string_view algorithm_name(Algorithm a) {
  return a == Algorithm::cobyla ? "cobyla" : "nelder_mead";
}

Algorithm parse_algorithm(std::string_view name) {
  if (name == "cobyla") return Algorithm::cobyla;
  if (name == "nelder_mead" || name == "nelder-mead") return Algorithm::nelder_mead;
  throw ParameterError("optimizer must be 'cobyla' or 'nelder_mead'");
}

void validate(const OptimizerConfig& config) {
  if (config.max_evals < 1) throw ParameterError("max_evals must be >= 1");
  if (!(config.rho_end > 0.0) || !(config.rho_end < config.rho_begin)) {
    throw ParameterError("need 0 < rho_end < rho_begin");
  }
}

std::vector<double> OptTrace::running_best() const {
  std::vector<double> out;
  out.reserve(evaluations.size());
  double best = std::numeric_limits<double>::infinity();
  for (const Evaluation& e : evaluations) {
    best = std::min(best, e.cost);
    out.push_back(best);
  }
  return out;
}

namespace {

using Vec = Eigen::VectorXd;

struct BudgetExhausted {};

// Counts, records and guards every cost evaluation.
class Evaluator {
 public:
  Evaluator(const CostFunction& cost, int max_evals, OptTrace& trace)
      : cost_(cost), max_evals_(max_evals), trace_(trace) {
    trace_.evaluations.reserve(static_cast<std::size_t>(std::min(max_evals, 100000)));
    trace_.best_value = std::numeric_limits<double>::infinity();
  }

  double operator()(const Vec& x) {
    if (count() >= max_evals_) throw BudgetExhausted{};
    const int i = count();
    std::vector<double> params(x.data(), x.data() + x.size());
    const double f = cost_(params);
    if (!std::isfinite(f)) {
      throw EvaluationError("cost function returned a non-finite value", i);
    }
    if (f < trace_.best_value) {
      trace_.best_value = f;
      trace_.best_params = params;
    }
    trace_.evaluations.push_back({i, std::move(params), f});
    return f;
  }

  int count() const { return static_cast<int>(trace_.evaluations.size()); }

 private:
  const CostFunction& cost_;
  int max_evals_;
  OptTrace& trace_;
};

// Powell's COBYLA without constraints: a simplex of n + 1 points defines a
// linear model of the cost; steps minimize the model inside a trust region of
// radius rho, interleaved with geometry steps that keep the simplex well
// conditioned. The merit function is the cost itself.
void run_cobyla(Evaluator& eval, Vec x0, const OptimizerConfig& cfg,
                OptTrace& trace) {
  constexpr double kAlpha = 0.25;  // parsig = kAlpha * rho
  constexpr double kBeta = 2.1;    // pareta = kBeta * rho
  constexpr double kGamma = 0.5;   // geometry step scale
  constexpr double kDelta = 1.1;   // edge limit for vertex replacement

  const Eigen::Index n = x0.size();
  double rho = cfg.rho_begin;

  // Vertex 0 is the current best point.
  std::vector<Vec> vx(static_cast<std::size_t>(n + 1));
  std::vector<double> fx(static_cast<std::size_t>(n + 1));
  vx[0] = x0;
  fx[0] = eval(x0);
  for (Eigen::Index j = 0; j < n; ++j) {
    Vec x = vx[0];
    x(j) += rho;
    vx[static_cast<std::size_t>(j + 1)] = x;
    fx[static_cast<std::size_t>(j + 1)] = eval(x);
  }

  bool geometry_done = false;
  Eigen::MatrixXd disp(n, n);
  for (;;) {
    // Keep the lowest cost in slot 0; ties keep the incumbent.
    std::size_t best = 0;
    for (std::size_t j = 1; j < fx.size(); ++j) {
      if (fx[j] < fx[best]) best = j;
    }
    if (best != 0) {
      std::swap(vx[0], vx[best]);
      std::swap(fx[0], fx[best]);
    }

    for (Eigen::Index j = 0; j < n; ++j) {
      disp.col(j) = vx[static_cast<std::size_t>(j + 1)] - vx[0];
    }
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(disp);
    const Eigen::MatrixXd inv = lu.inverse();  // rows are dual vectors
    const bool invertible = inv.allFinite();

    const double parsig = kAlpha * rho;
    const double pareta = kBeta * rho;
    Vec vsig(n), veta(n);
    for (Eigen::Index j = 0; j < n; ++j) {
      vsig(j) = invertible ? 1.0 / inv.row(j).norm() : 0.0;
      veta(j) = disp.col(j).norm();
    }
    const bool acceptable =
        invertible && (vsig.array() >= parsig).all() && (veta.array() <= pareta).all();

    Vec df(n);
    for (Eigen::Index j = 0; j < n; ++j) {
      df(j) = fx[static_cast<std::size_t>(j + 1)] - fx[0];
    }
    const Vec grad = invertible ? Vec(inv.transpose() * df) : Vec::Zero(n);

    if (!geometry_done && !acceptable) {
      // Replace the vertex that spoils the geometry most.
      Eigen::Index drop = -1;
      double worst = pareta;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (veta(j) > worst) {
          drop = j;
          worst = veta(j);
        }
      }
      if (drop < 0) {
        double smallest = parsig;
        for (Eigen::Index j = 0; j < n; ++j) {
          if (vsig(j) < smallest) {
            drop = j;
            smallest = vsig(j);
          }
        }
      }
      Vec dx;
      if (drop < 0 || !invertible) {
        // Degenerate simplex: rebuild the offending axis direction.
        drop = drop < 0 ? 0 : drop;
        dx = Vec::Zero(n);
        dx(drop) = kGamma * rho;
      } else {
        dx = (kGamma * rho * vsig(drop)) * inv.row(drop).transpose();
      }
      if (grad.dot(dx) > 0.0) dx = -dx;
      const Vec xnew = vx[0] + dx;
      const double fnew = eval(xnew);
      vx[static_cast<std::size_t>(drop + 1)] = xnew;
      fx[static_cast<std::size_t>(drop + 1)] = fnew;
      geometry_done = true;
      continue;
    }

    const double gnorm = grad.norm();
    bool good_step = false;
    if (gnorm > 0.0 && std::isfinite(gnorm)) {
      const Vec dx = (-rho / gnorm) * grad;
      const double predicted = rho * gnorm;
      const Vec xnew = vx[0] + dx;
      const double fnew = eval(xnew);
      const double actual = fx[0] - fnew;

      // Choose the vertex the new point replaces.
      const Vec coef = inv * dx;
      Eigen::Index drop = -1;
      double threshold = actual <= 0.0 ? 1.0 : 0.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (std::abs(coef(j)) > threshold) {
          drop = j;
          threshold = std::abs(coef(j));
        }
      }
      double edge = kDelta * rho;
      Eigen::Index far = -1;
      for (Eigen::Index j = 0; j < n; ++j) {
        const double sigbar = std::abs(coef(j)) * vsig(j);
        if (sigbar >= parsig || sigbar >= vsig(j)) {
          const double dist =
              actual > 0.0 ? (dx - disp.col(j)).norm() : veta(j);
          if (dist > edge) {
            far = j;
            edge = dist;
          }
        }
      }
      if (far >= 0) drop = far;
      if (drop >= 0) {
        vx[static_cast<std::size_t>(drop + 1)] = xnew;
        fx[static_cast<std::size_t>(drop + 1)] = fnew;
      }
      good_step = actual > 0.0 && actual >= 0.1 * predicted;
    }
    if (good_step) continue;

    if (!acceptable) {
      geometry_done = false;
      continue;
    }
    if (rho <= cfg.rho_end) {
      trace.stop = StopReason::converged;
      return;
    }
    rho *= 0.5;
    if (rho <= 1.5 * cfg.rho_end) rho = cfg.rho_end;
    geometry_done = false;
  }
}

void run_nelder_mead(Evaluator& eval, const Vec& x0, const OptimizerConfig& cfg,
                     OptTrace& trace) {
  constexpr double kReflect = 1.0;
  constexpr double kExpand = 2.0;
  constexpr double kContract = 0.5;
  constexpr double kShrink = 0.5;

  const Eigen::Index n = x0.size();
  std::vector<Vec> pts(static_cast<std::size_t>(n + 1), x0);
  std::vector<double> f(static_cast<std::size_t>(n + 1));
  f[0] = eval(x0);
  for (Eigen::Index j = 0; j < n; ++j) {
    pts[static_cast<std::size_t>(j + 1)](j) += cfg.rho_begin;
    f[static_cast<std::size_t>(j + 1)] = eval(pts[static_cast<std::size_t>(j + 1)]);
  }

  std::vector<std::size_t> order(pts.size());
  for (;;) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return f[a] < f[b]; });
    const std::size_t lo = order.front();
    const std::size_t hi = order.back();
    const std::size_t second = order[order.size() - 2];

    double size = 0.0;
    for (const Vec& p : pts) size = std::max(size, (p - pts[lo]).lpNorm<Eigen::Infinity>());
    if (size < cfg.rho_end) {
      trace.stop = StopReason::converged;
      return;
    }

    Vec centroid = Vec::Zero(n);
    for (std::size_t j = 0; j < pts.size(); ++j) {
      if (j != hi) centroid += pts[j];
    }
    centroid /= static_cast<double>(n);

    const Vec xr = centroid + kReflect * (centroid - pts[hi]);
    const double fr = eval(xr);
    if (fr < f[lo]) {
      const Vec xe = centroid + kExpand * (centroid - pts[hi]);
      const double fe = eval(xe);
      if (fe < fr) {
        pts[hi] = xe;
        f[hi] = fe;
      } else {
        pts[hi] = xr;
        f[hi] = fr;
      }
      continue;
    }
    if (fr < f[second]) {
      pts[hi] = xr;
      f[hi] = fr;
      continue;
    }
    const bool outside = fr < f[hi];
    const Vec xc = outside ? Vec(centroid + kContract * (xr - centroid))
                           : Vec(centroid + kContract * (pts[hi] - centroid));
    const double fc = eval(xc);
    if (fc < (outside ? fr : f[hi])) {
      pts[hi] = xc;
      f[hi] = fc;
      continue;
    }
    for (std::size_t j = 0; j < pts.size(); ++j) {
      if (j == lo) continue;
      pts[j] = pts[lo] + kShrink * (pts[j] - pts[lo]);
      f[j] = eval(pts[j]);
    }
  }
}

}  // namespace

OptTrace minimize(const CostFunction& cost, std::span<const double> initial,
                  const OptimizerConfig& config) {
  validate(config);
  if (initial.empty()) throw ShapeError("initial parameter vector is empty");
  OptTrace trace;
  Evaluator eval(cost, config.max_evals, trace);
  const Vec x0 = Eigen::Map<const Vec>(initial.data(),
                                       static_cast<Eigen::Index>(initial.size()));
  try {
    if (config.algorithm == Algorithm::cobyla) {
      run_cobyla(eval, x0, config, trace);
    } else {
      run_nelder_mead(eval, x0, config, trace);
    }
  } catch (const BudgetExhausted&) {
    trace.stop = StopReason::max_evals;
  }
  return trace;
}

std::vector<double> random_initial_params(int count, std::uint64_t seed) {
  if (count < 1) throw ParameterError("parameter count must be >= 1");
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  Rng rng(seed);
  std::vector<double> out(static_cast<std::size_t>(count));
  for (double& v : out) {
    v = rng.uniform() * kTwoPi;
    if (v >= kTwoPi) v = std::nextafter(kTwoPi, 0.0);
  }
  return out;
}

void write_trace_csv(const OptTrace& trace, std::ostream& out) {
  out << "i,cost,best_so_far\n";
  const std::vector<double> best = trace.running_best();
  const auto old_precision = out.precision(17);
  for (std::size_t k = 0; k < trace.evaluations.size(); ++k) {
    out << trace.evaluations[k].iteration << ',' << trace.evaluations[k].cost
        << ',' << best[k] << '\n';
  }
  out.precision(old_precision);
}

}  // namespace qport
