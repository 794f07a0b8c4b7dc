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

#include "qport/simulator.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include "qport/error.hpp"
#include "qport/rng.hpp"

namespace qport {

namespace {

void check_register(int n) {
  if (n < 1 || n > kMaxStateQubits) {
    throw CapacityError("statevector size must be between 1 and " +
                        std::to_string(kMaxStateQubits) + " qubits");
  }
}

constexpr std::size_t insert_zero(std::size_t x, int bit) {
  const std::size_t low = x & ((std::size_t{1} << bit) - 1);
  return ((x >> bit) << (bit + 1)) | low;
}

}  // namespace

StateVector::StateVector(int num_qubits)
    : num_qubits_(num_qubits),
      amps_((check_register(num_qubits), std::size_t{1} << num_qubits)) {
  amps_[0] = 1.0;
}

StateVector StateVector::basis(int num_qubits, std::uint64_t index) {
  StateVector s(num_qubits);
  if (index >= s.dim()) throw RangeError("basis index out of range");
  s.amps_[0] = 0.0;
  s.amps_[index] = 1.0;
  return s;
}

StateVector StateVector::uniform(int num_qubits) {
  StateVector s(num_qubits);
  const double a = 1.0 / std::sqrt(static_cast<double>(s.dim()));
  std::fill(s.amps_.begin(), s.amps_.end(), cplx(a, 0.0));
  return s;
}

StateVector StateVector::from_amplitudes(std::vector<cplx> amplitudes) {
  const std::size_t dim = amplitudes.size();
  if (dim < 2 || !std::has_single_bit(dim)) {
    throw ShapeError("amplitude count must be a power of two >= 2");
  }
  StateVector s(std::countr_zero(dim));
  s.amps_ = std::move(amplitudes);
  return s;
}

double StateVector::norm_squared() const {
  double sum = 0.0;
  for (const cplx& a : amps_) sum += std::norm(a);
  return sum;
}

void StateVector::normalize() {
  const double n2 = norm_squared();
  if (!(n2 > 0.0)) throw DegenerateRunError("cannot normalize a zero state");
  const double inv = 1.0 / std::sqrt(n2);
  for (cplx& a : amps_) a *= inv;
}

std::vector<double> StateVector::probabilities() const {
  std::vector<double> p(amps_.size());
  std::transform(amps_.begin(), amps_.end(), p.begin(),
                 [](const cplx& a) { return std::norm(a); });
  return p;
}

double fidelity(const StateVector& a, const StateVector& b) {
  if (a.dim() != b.dim()) throw ShapeError("fidelity of states of different size");
  cplx overlap = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) overlap += std::conj(a[i]) * b[i];
  return std::norm(overlap);
}

namespace kernel {

void apply_1q(std::span<cplx> amps, int q, const Matrix2& m) {
  const std::size_t stride = std::size_t{1} << q;
  const std::size_t dim = amps.size();
  for (std::size_t base = 0; base < dim; base += 2 * stride) {
    for (std::size_t i = base; i < base + stride; ++i) {
      const cplx a0 = amps[i];
      const cplx a1 = amps[i + stride];
      amps[i] = m[0] * a0 + m[1] * a1;
      amps[i + stride] = m[2] * a0 + m[3] * a1;
    }
  }
}

void apply_x(std::span<cplx> amps, int q) {
  const std::size_t stride = std::size_t{1} << q;
  const std::size_t dim = amps.size();
  for (std::size_t base = 0; base < dim; base += 2 * stride) {
    for (std::size_t i = base; i < base + stride; ++i) {
      std::swap(amps[i], amps[i + stride]);
    }
  }
}

void apply_cx(std::span<cplx> amps, int control, int target) {
  const std::size_t cbit = std::size_t{1} << control;
  const std::size_t tbit = std::size_t{1} << target;
  const int lo = std::min(control, target);
  const int hi = std::max(control, target);
  const std::size_t quarter = amps.size() / 4;
  for (std::size_t k = 0; k < quarter; ++k) {
    const std::size_t base = insert_zero(insert_zero(k, lo), hi) | cbit;
    std::swap(amps[base], amps[base | tbit]);
  }
}

void apply_2q(std::span<cplx> amps, int q0, int q1, const Matrix4& m) {
  const std::size_t b0 = std::size_t{1} << q0;
  const std::size_t b1 = std::size_t{1} << q1;
  const int lo = std::min(q0, q1);
  const int hi = std::max(q0, q1);
  const std::size_t quarter = amps.size() / 4;
  for (std::size_t k = 0; k < quarter; ++k) {
    const std::size_t i00 = insert_zero(insert_zero(k, lo), hi);
    const std::size_t idx[4] = {i00, i00 | b1, i00 | b0, i00 | b0 | b1};
    const cplx v[4] = {amps[idx[0]], amps[idx[1]], amps[idx[2]], amps[idx[3]]};
    for (int r = 0; r < 4; ++r) {
      amps[idx[r]] = m[4 * r] * v[0] + m[4 * r + 1] * v[1] +
                     m[4 * r + 2] * v[2] + m[4 * r + 3] * v[3];
    }
  }
}

void apply_pauli(std::span<cplx> amps, int q, int pauli) {
  switch (pauli) {
    case 0:
      return;
    case 1:
      apply_x(amps, q);
      return;
    case 2:
      apply_1q(amps, q, {0.0, cplx(0.0, -1.0), cplx(0.0, 1.0), 0.0});
      return;
    case 3:
      apply_1q(amps, q, {1.0, 0.0, 0.0, -1.0});
      return;
    default:
      throw RangeError("Pauli index must be 0..3");
  }
}

void apply_gate(std::span<cplx> amps, const Gate& gate,
                std::span<const double> params) {
  switch (gate.kind) {
    case GateKind::u3: {
      double t = gate.angles[0];
      double p = gate.angles[1];
      double l = gate.angles[2];
      if (gate.slot >= 0) {
        const auto s = static_cast<std::size_t>(gate.slot);
        if (s + 3 > params.size()) {
          throw BindingError("parameter slot " + std::to_string(gate.slot) +
                             " is not bound");
        }
        t = params[s];
        p = params[s + 1];
        l = params[s + 2];
        if (std::isnan(t) || std::isnan(p) || std::isnan(l)) {
          throw BindingError("parameter slot " + std::to_string(gate.slot) +
                             " is not bound");
        }
      }
      apply_1q(amps, gate.q0, u3_matrix(t, p, l));
      return;
    }
    case GateKind::x:
      apply_x(amps, gate.q0);
      return;
    case GateKind::h:
      apply_1q(amps, gate.q0, h_matrix());
      return;
    case GateKind::sdg:
      apply_1q(amps, gate.q0, sdg_matrix());
      return;
    case GateKind::cx:
      apply_cx(amps, gate.q0, gate.q1);
      return;
    case GateKind::ecr: {
      static const Matrix4 ecr = ecr_matrix();
      apply_2q(amps, gate.q0, gate.q1, ecr);
      return;
    }
  }
}

}  // namespace kernel

void apply_gate(StateVector& state, const Gate& gate,
                std::span<const double> params) {
  const int n = state.num_qubits();
  if (gate.q0 < 0 || gate.q0 >= n || (gate.two_qubit() && (gate.q1 < 0 || gate.q1 >= n))) {
    throw RangeError("gate acts outside the register");
  }
  kernel::apply_gate(state.amplitudes(), gate, params);
}

StateVector simulate(const Circuit& circuit, std::span<const double> params,
                     StateVector initial) {
  if (initial.num_qubits() != circuit.num_qubits()) {
    throw ShapeError("initial state size differs from the circuit width");
  }
  if (static_cast<int>(params.size()) < circuit.num_parameters()) {
    throw BindingError("circuit has unbound parameter slots");
  }
  for (const Gate& g : circuit.gates()) {
    kernel::apply_gate(initial.amplitudes(), g, params);
  }
  return initial;
}

StateVector simulate(const Circuit& circuit, StateVector initial) {
  if (!circuit.is_bound()) throw BindingError("circuit has unbound parameter slots");
  return simulate(circuit, circuit.parameters(), std::move(initial));
}

Eigen::MatrixXcd circuit_unitary(const Circuit& circuit,
                                 std::span<const double> params) {
  const int n = circuit.num_qubits();
  check_register(n);
  if (static_cast<int>(params.size()) < circuit.num_parameters()) {
    throw BindingError("circuit has unbound parameter slots");
  }
  const Eigen::Index dim = Eigen::Index{1} << n;
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(dim, dim);
  for (Eigen::Index col = 0; col < dim; ++col) {
    std::span<cplx> column(u.col(col).data(), static_cast<std::size_t>(dim));
    for (const Gate& g : circuit.gates()) kernel::apply_gate(column, g, params);
  }
  return u;
}

std::uint64_t Histogram::total() const {
  std::uint64_t t = 0;
  for (const auto& [index, count] : counts) t += count;
  return t;
}

Bitstring Histogram::mode() const {
  if (counts.empty()) throw DegenerateRunError("histogram is empty");
  Bitstring best{num_qubits, counts.begin()->first};
  std::uint64_t best_count = counts.begin()->second;
  for (const auto& [index, count] : counts) {
    const Bitstring cand{num_qubits, index};
    if (count > best_count ||
        (count == best_count && canonical_less(cand, best))) {
      best = cand;
      best_count = count;
    }
  }
  return best;
}

void Histogram::add(std::uint64_t index, std::uint64_t count) {
  if (count > 0) counts[index] += count;
}

void Histogram::merge(const Histogram& other) {
  if (other.num_qubits != num_qubits) {
    throw ShapeError("cannot merge histograms of different widths");
  }
  for (const auto& [index, count] : other.counts) add(index, count);
}

double Histogram::frequency(std::uint64_t index) const {
  const std::uint64_t t = total();
  if (t == 0) return 0.0;
  const auto it = counts.find(index);
  return it == counts.end() ? 0.0
                            : static_cast<double>(it->second) / static_cast<double>(t);
}

void sample_into(std::span<const double> probabilities, std::uint64_t shots,
                 std::uint64_t seed, Histogram& into) {
  if (probabilities.empty()) throw ShapeError("empty probability vector");
  std::vector<double> cdf(probabilities.size());
  std::partial_sum(probabilities.begin(), probabilities.end(), cdf.begin());
  const double total = cdf.back();
  if (!(total > 0.0) || !std::isfinite(total)) {
    throw DegenerateRunError("probability vector has no mass");
  }
  std::vector<std::uint64_t> counts(probabilities.size(), 0);
  Rng rng(seed);
  for (std::uint64_t s = 0; s < shots; ++s) {
    const double r = rng.uniform() * total;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), r);
    if (it == cdf.end()) --it;
    // Skip zero-width bins left of a rounding-induced hit.
    auto idx = static_cast<std::size_t>(it - cdf.begin());
    while (idx > 0 && probabilities[idx] <= 0.0) --idx;
    ++counts[idx];
  }
  for (std::size_t i = 0; i < counts.size(); ++i) into.add(i, counts[i]);
}

Histogram sample_bitstrings(const StateVector& state, std::uint64_t shots,
                            std::uint64_t seed) {
  if (shots < 1) throw ParameterError("shots must be >= 1");
  Histogram h{state.num_qubits(), {}};
  sample_into(state.probabilities(), shots, seed, h);
  return h;
}

double diagonal_expectation(std::span<const double> energies,
                            const StateVector& state) {
  if (energies.size() != state.dim()) {
    throw ShapeError("energy table and state dimensions differ");
  }
  double e = 0.0;
  const auto amps = state.amplitudes();
  for (std::size_t i = 0; i < amps.size(); ++i) e += std::norm(amps[i]) * energies[i];
  return e;
}

double diagonal_expectation(const IsingModel& model, const StateVector& state) {
  if (model.n != state.num_qubits()) {
    throw ShapeError("Ising model and state have different qubit counts");
  }
  return diagonal_expectation(energy_table(model), state);
}

double histogram_expectation(std::span<const double> energies,
                             const Histogram& histogram) {
  const std::uint64_t t = histogram.total();
  if (t == 0) throw DegenerateRunError("histogram is empty");
  double e = 0.0;
  for (const auto& [index, count] : histogram.counts) {
    if (index >= energies.size()) throw ShapeError("histogram index out of range");
    e += energies[index] * static_cast<double>(count);
  }
  return e / static_cast<double>(t);
}

}  // namespace qport
