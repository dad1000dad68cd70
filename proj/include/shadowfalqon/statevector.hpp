// Copyright 2026 The shadowfalqon Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "shadowfalqon/errors.hpp"
#include "shadowfalqon/graph.hpp"
#include "shadowfalqon/hamiltonian.hpp"
#include "shadowfalqon/pauli.hpp"

namespace shadowfalqon {

using Complex = std::complex<double>;

/// Largest register the dense simulator accepts.
inline constexpr std::size_t kMaxSimulatedQubits = 22;

/**
 * Dense n-qubit pure state. Amplitude index b encodes qubit q in bit
 * (n - 1 - q), matching PauliString.
 */
class StateVector {
 public:
  StateVector(std::size_t n, std::vector<Complex> amplitudes)
      : n_(n), amps_(std::move(amplitudes)) {
    if (n < 1 || n > kMaxSimulatedQubits) {
      throw SizeError("state vector needs 1.." + std::to_string(kMaxSimulatedQubits) +
                      " qubits, got " + std::to_string(n));
    }
    if (amps_.size() != (std::size_t{1} << n)) {
      throw DomainError("amplitude count does not match 2^n");
    }
  }

  /// Computational basis state |index>.
  static StateVector basis_state(std::size_t n, std::size_t index) {
    if (n < 1 || n > kMaxSimulatedQubits) {
      throw SizeError("basis_state qubit count out of range");
    }
    std::vector<Complex> a(std::size_t{1} << n, Complex(0.0, 0.0));
    if (index >= a.size()) throw DomainError("basis index out of range");
    a[index] = 1.0;
    return StateVector(n, std::move(a));
  }

  std::size_t num_qubits() const { return n_; }
  std::size_t dimension() const { return amps_.size(); }
  std::span<const Complex> amplitudes() const { return amps_; }
  std::span<Complex> amplitudes() { return amps_; }
  Complex operator[](std::size_t i) const { return amps_[i]; }

  double norm_squared() const {
    double s = 0.0;
    for (const Complex &a : amps_) s += std::norm(a);
    return s;
  }

  /// Applies a 2x2 unitary {{m00, m01}, {m10, m11}} to qubit q.
  void apply_single_qubit(std::size_t q, const std::array<Complex, 4> &m) {
    const std::size_t stride = std::size_t{1} << (n_ - 1 - q);
    const std::size_t dim = amps_.size();
    for (std::size_t base = 0; base < dim; base += 2 * stride) {
      for (std::size_t i = base; i < base + stride; ++i) {
        const Complex a0 = amps_[i];
        const Complex a1 = amps_[i + stride];
        amps_[i] = m[0] * a0 + m[1] * a1;
        amps_[i + stride] = m[2] * a0 + m[3] * a1;
      }
    }
  }

 private:
  std::size_t n_;
  std::vector<Complex> amps_;
};

/** |+>^n. */
inline StateVector init_plus_state(std::size_t n) {
  if (n < 1 || n > kMaxSimulatedQubits) {
    throw SizeError("init_plus_state needs 1.." + std::to_string(kMaxSimulatedQubits) +
                    " qubits, got " + std::to_string(n));
  }
  const std::size_t dim = std::size_t{1} << n;
  const double a = 1.0 / std::sqrt(static_cast<double>(dim));
  return StateVector(n, std::vector<Complex>(dim, Complex(a, 0.0)));
}

namespace detail {

inline void check_time_step(double dt) {
  if (!(dt >= 0.0) || !std::isfinite(dt)) {
    throw DomainError("time step must be finite and non-negative");
  }
}

} // namespace detail

/// psi <- exp(-i dt H_p) psi, with H_p given by its computational-basis diagonal.
inline void apply_problem_unitary(StateVector &psi, std::span<const double> diagonal, double dt) {
  detail::check_time_step(dt);
  if (diagonal.size() != psi.dimension()) {
    throw DomainError("problem diagonal does not match state dimension");
  }
  auto amps = psi.amplitudes();
  for (std::size_t b = 0; b < amps.size(); ++b) {
    const double phase = -dt * diagonal[b];
    amps[b] *= Complex(std::cos(phase), std::sin(phase));
  }
}

inline void apply_problem_unitary(StateVector &psi, const Graph &g, double dt) {
  if (g.num_vertices() != psi.num_qubits()) {
    throw DomainError("graph vertex count does not match qubit count");
  }
  const auto diag = dense_problem_hamiltonian(g);
  apply_problem_unitary(psi, diag, dt);
}

/// psi <- exp(-i beta dt sum_j X_j) psi, one exp(-i beta dt X) per qubit.
inline void apply_driver_unitary(StateVector &psi, double beta, double dt) {
  detail::check_time_step(dt);
  const double theta = beta * dt;
  if (theta == 0.0) return;
  const Complex c(std::cos(theta), 0.0);
  const Complex s(0.0, -std::sin(theta));
  const std::array<Complex, 4> rx{c, s, s, c};
  for (std::size_t q = 0; q < psi.num_qubits(); ++q) psi.apply_single_qubit(q, rx);
}

/** <psi|P|psi> for a phase-free Pauli string. */
inline double exact_expectation(const StateVector &psi, const PauliString &p) {
  const std::size_t n = psi.num_qubits();
  if (p.num_qubits() != n) {
    throw DomainError("Pauli string has " + std::to_string(p.num_qubits()) +
                      " qubits, state has " + std::to_string(n));
  }
  std::uint64_t flip = 0;  // X or Y
  std::uint64_t sign = 0;  // Z or Y
  std::size_t num_y = 0;
  for (std::size_t q = 0; q < n; ++q) {
    const std::uint64_t bit = std::uint64_t{1} << (n - 1 - q);
    switch (p[q]) {
      case Pauli::X:
        flip |= bit;
        break;
      case Pauli::Y:
        flip |= bit;
        sign |= bit;
        ++num_y;
        break;
      case Pauli::Z:
        sign |= bit;
        break;
      case Pauli::I:
        break;
    }
  }
  // P|b> = i^{#Y} (-1)^{popcount(b & sign)} |b ^ flip>
  static constexpr std::array<Complex, 4> kIPow{Complex(1, 0), Complex(0, 1), Complex(-1, 0),
                                                Complex(0, -1)};
  const auto amps = psi.amplitudes();
  Complex acc(0.0, 0.0);
  for (std::size_t b = 0; b < amps.size(); ++b) {
    const Complex term = std::conj(amps[b ^ flip]) * amps[b];
    if (std::popcount(b & sign) & 1U) {
      acc -= term;
    } else {
      acc += term;
    }
  }
  return (kIPow[num_y % 4] * acc).real();
}

/**
 * Per-qubit measurement basis. Each entry is X, Y or Z; measuring qubit q
 * in basis P rotates the P eigenbasis onto |0>/|1> (+1 eigenvalue -> 0).
 */
class BasisAssignment {
 public:
  explicit BasisAssignment(std::vector<Pauli> bases) : bases_(std::move(bases)) {
    if (bases_.empty()) throw DomainError("basis assignment needs at least one qubit");
    for (Pauli p : bases_) {
      if (p == Pauli::I) throw DomainError("measurement basis must be X, Y or Z");
    }
  }

  /// All-Z computational basis on n qubits.
  static BasisAssignment computational(std::size_t n) {
    return BasisAssignment(std::vector<Pauli>(n, Pauli::Z));
  }

  /// Basis measuring p's support in p's own labels, Z elsewhere.
  static BasisAssignment for_observable(const PauliString &p) {
    std::vector<Pauli> b(p.axes());
    for (Pauli &x : b) {
      if (x == Pauli::I) x = Pauli::Z;
    }
    return BasisAssignment(std::move(b));
  }

  std::size_t num_qubits() const { return bases_.size(); }
  Pauli operator[](std::size_t q) const { return bases_[q]; }
  const std::vector<Pauli> &bases() const { return bases_; }

  std::string label() const {
    std::string s;
    for (Pauli p : bases_) s.push_back(to_char(p));
    return s;
  }

  friend bool operator==(const BasisAssignment &, const BasisAssignment &) = default;

 private:
  std::vector<Pauli> bases_;
};

/**
 * Rotates psi into the measurement frame of `basis`: Hadamard for X,
 * S-dagger followed by Hadamard for Y, nothing for Z.
 */
inline StateVector rotate_to_basis(StateVector psi, const BasisAssignment &basis) {
  if (basis.num_qubits() != psi.num_qubits()) {
    throw DomainError("basis assignment does not match qubit count");
  }
  const double r = 1.0 / std::sqrt(2.0);
  const std::array<Complex, 4> h{Complex(r, 0), Complex(r, 0), Complex(r, 0), Complex(-r, 0)};
  // H * Sdg = r * {{1, -i}, {1, i}}
  const std::array<Complex, 4> hsdg{Complex(r, 0), Complex(0, -r), Complex(r, 0), Complex(0, r)};
  for (std::size_t q = 0; q < psi.num_qubits(); ++q) {
    switch (basis[q]) {
      case Pauli::X:
        psi.apply_single_qubit(q, h);
        break;
      case Pauli::Y:
        psi.apply_single_qubit(q, hsdg);
        break;
      default:
        break;
    }
  }
  return psi;
}

/// Born probabilities |amplitude|^2 after rotating into `basis`.
inline std::vector<double> born_probabilities(const StateVector &psi, const BasisAssignment &basis) {
  const StateVector rotated = rotate_to_basis(psi, basis);
  std::vector<double> p(rotated.dimension());
  for (std::size_t b = 0; b < p.size(); ++b) p[b] = std::norm(rotated[b]);
  return p;
}

/// Outcome histogram indexed by basis-state index; counts[b] is the number of shots giving b.
using OutcomeCounts = std::vector<std::uint64_t>;

/// Bitstring for basis index b, qubit 0 first.
inline std::string outcome_label(std::size_t b, std::size_t n) {
  std::string s(n, '0');
  for (std::size_t q = 0; q < n; ++q) {
    if ((b >> (n - 1 - q)) & 1U) s[q] = '1';
  }
  return s;
}

/**
 * Draws `shots` independent outcomes from a probability vector. Small shot
 * counts use inverse-CDF lookups; large ones a chain of conditional
 * binomials. Both are exact multinomial samplers.
 */
template <class URBG>
OutcomeCounts sample_counts(std::span<const double> probs, std::uint64_t shots, URBG &rng) {
  OutcomeCounts counts(probs.size(), 0);
  if (shots == 0 || probs.empty()) return counts;
  if (shots < probs.size() * 16) {
    std::vector<double> cdf(probs.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
      acc += probs[i];
      cdf[i] = acc;
    }
    std::uniform_real_distribution<double> u(0.0, acc);
    for (std::uint64_t s = 0; s < shots; ++s) {
      const double x = u(rng);
      auto it = std::upper_bound(cdf.begin(), cdf.end(), x);
      if (it == cdf.end()) --it;
      // skip zero-probability tail entries that share the final cdf value
      while (it != cdf.begin() && probs[static_cast<std::size_t>(it - cdf.begin())] == 0.0) --it;
      ++counts[static_cast<std::size_t>(it - cdf.begin())];
    }
    return counts;
  }
  double mass = 0.0;
  for (double p : probs) mass += p;
  std::uint64_t remaining = shots;
  std::size_t last_nonzero = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] > 0.0) last_nonzero = i;
  }
  for (std::size_t i = 0; i < probs.size() && remaining > 0; ++i) {
    if (probs[i] <= 0.0) continue;
    if (i == last_nonzero || probs[i] >= mass) {
      counts[i] += remaining;
      remaining = 0;
      break;
    }
    std::binomial_distribution<std::uint64_t> bin(remaining, probs[i] / mass);
    const std::uint64_t c = bin(rng);
    counts[i] += c;
    remaining -= c;
    mass -= probs[i];
  }
  return counts;
}

/**
 * Measures `shots` copies of psi in `basis` by sampling the rotated Born
 * distribution. psi is not modified.
 */
template <class URBG>
OutcomeCounts sample_bitstrings(const StateVector &psi, const BasisAssignment &basis,
                                std::uint64_t shots, URBG &rng) {
  if (shots < 1) throw DomainError("shots must be positive");
  const auto probs = born_probabilities(psi, basis);
  return sample_counts(std::span<const double>(probs), shots, rng);
}

} // namespace shadowfalqon
