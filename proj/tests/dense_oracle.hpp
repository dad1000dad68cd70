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

// Dense-matrix reference implementations for tests. Everything here goes
// through Eigen matrices and eigendecompositions, never through the
// state-vector kernels it is used to check.

#include <cmath>
#include <complex>
#include <cstddef>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "shadowfalqon/graph.hpp"
#include "shadowfalqon/pauli.hpp"

namespace shadowfalqon::oracle {

inline PauliString single_site(std::size_t n, std::size_t q, Pauli p) {
  std::vector<Pauli> axes(n, Pauli::I);
  axes[q] = p;
  return PauliString(axes);
}

inline PauliString two_site(std::size_t n, std::size_t a, Pauli pa, std::size_t b, Pauli pb) {
  std::vector<Pauli> axes(n, Pauli::I);
  axes[a] = pa;
  axes[b] = pb;
  return PauliString(axes);
}

/// H_p = -1/2 sum_e (1 - Z_u Z_v) as a dense matrix.
inline Eigen::MatrixXcd problem_hamiltonian(const Graph &g) {
  const std::size_t n = g.num_vertices();
  const Eigen::Index dim = Eigen::Index{1} << n;
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
  for (const Edge &e : g.edges()) {
    h -= 0.5 * (Eigen::MatrixXcd::Identity(dim, dim) -
                dense_matrix(two_site(n, e.u, Pauli::Z, e.v, Pauli::Z)));
  }
  return h;
}

/// H_d = sum_j X_j.
inline Eigen::MatrixXcd driver_hamiltonian(std::size_t n) {
  const Eigen::Index dim = Eigen::Index{1} << n;
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
  for (std::size_t q = 0; q < n; ++q) h += dense_matrix(single_site(n, q, Pauli::X));
  return h;
}

/// exp(-i t H) for Hermitian H via eigendecomposition.
inline Eigen::MatrixXcd expm_hermitian(const Eigen::MatrixXcd &h, double t) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  const Eigen::VectorXd evals = es.eigenvalues();
  Eigen::VectorXcd phases(evals.size());
  for (Eigen::Index i = 0; i < evals.size(); ++i) {
    phases(i) = std::exp(std::complex<double>(0.0, -t * evals(i)));
  }
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

inline double expectation(const Eigen::VectorXcd &psi, const Eigen::MatrixXcd &op) {
  return (psi.adjoint() * op * psi)(0, 0).real();
}

inline Eigen::VectorXcd plus_state(std::size_t n) {
  const Eigen::Index dim = Eigen::Index{1} << n;
  return Eigen::VectorXcd::Constant(dim, 1.0 / std::sqrt(static_cast<double>(dim)));
}

template <class URBG>
Eigen::VectorXcd random_state(std::size_t n, URBG &rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  const Eigen::Index dim = Eigen::Index{1} << n;
  Eigen::VectorXcd v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v(i) = {g(rng), g(rng)};
  return v / v.norm();
}

template <class URBG>
PauliString random_pauli(std::size_t n, URBG &rng, bool allow_x = true) {
  std::uniform_int_distribution<int> d(0, 3);
  std::vector<Pauli> axes(n);
  for (auto &a : axes) {
    do {
      a = static_cast<Pauli>(d(rng));
    } while (!allow_x && a == Pauli::X);
  }
  return PauliString(axes);
}

struct DenseRun {
  std::vector<double> beta;
  std::vector<double> control;
  std::vector<double> cost;
};

/**
 * Exact-feedback loop with dense propagators: layer k applies
 * exp(-i beta_k dt H_d) exp(-i dt H_p), then beta_{k+1} = -alpha <i[H_d, H_p]>.
 */
inline DenseRun falqon(const Graph &g, double dt, std::size_t layers, double alpha = 1.0) {
  const std::size_t n = g.num_vertices();
  const Eigen::MatrixXcd hp = problem_hamiltonian(g);
  const Eigen::MatrixXcd hd = driver_hamiltonian(n);
  const Eigen::MatrixXcd comm = std::complex<double>(0.0, 1.0) * (hd * hp - hp * hd);
  const Eigen::MatrixXcd up = expm_hermitian(hp, dt);
  Eigen::VectorXcd psi = plus_state(n);
  DenseRun run;
  double beta = 0.0;
  for (std::size_t k = 0; k < layers; ++k) {
    psi = expm_hermitian(hd, beta * dt) * (up * psi);
    run.beta.push_back(beta);
    const double a = expectation(psi, comm);
    run.control.push_back(a);
    run.cost.push_back(expectation(psi, hp));
    beta = -alpha * a;
  }
  return run;
}

} // namespace shadowfalqon::oracle
