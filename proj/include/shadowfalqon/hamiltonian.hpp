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

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "shadowfalqon/errors.hpp"
#include "shadowfalqon/graph.hpp"
#include "shadowfalqon/pauli.hpp"

namespace shadowfalqon {

/**
 * Pauli terms of the MaxCut problem Hamiltonian and of the feedback
 * commutator i[H_d, H_p], both laid out in the graph's edge order.
 *
 * cost_terms[e] is Z_u Z_v for edge e = (u, v); control_terms[2e] is Y_u Z_v
 * and control_terms[2e + 1] is Z_u Y_v.
 */
struct ObservableSet {
  std::size_t num_qubits = 0;
  std::vector<Edge> edges;
  std::vector<PauliString> cost_terms;
  std::vector<PauliString> control_terms;

  /// Control terms followed by cost terms, the order estimators are fed.
  std::vector<PauliString> all_terms() const {
    std::vector<PauliString> out(control_terms);
    out.insert(out.end(), cost_terms.begin(), cost_terms.end());
    return out;
  }
};

/** Transverse-field driver sum_j X_j on n qubits. */
struct DriverSpec {
  std::size_t num_qubits;

  explicit DriverSpec(std::size_t n) : num_qubits(n) {
    if (n < 1) throw DomainError("driver needs at least one qubit");
  }
};

namespace detail {

inline PauliString two_site(std::size_t n, std::size_t a, Pauli pa, std::size_t b, Pauli pb) {
  std::vector<Pauli> axes(n, Pauli::I);
  axes[a] = pa;
  axes[b] = pb;
  return PauliString(std::move(axes));
}

} // namespace detail

inline ObservableSet build_observables(const Graph &g) {
  if (g.num_edges() == 0) throw DomainError("graph has no edges");
  const std::size_t n = g.num_vertices();
  ObservableSet set;
  set.num_qubits = n;
  set.edges = g.edges();
  set.cost_terms.reserve(g.num_edges());
  set.control_terms.reserve(2 * g.num_edges());
  for (const Edge &e : g.edges()) {
    set.cost_terms.push_back(detail::two_site(n, e.u, Pauli::Z, e.v, Pauli::Z));
    set.control_terms.push_back(detail::two_site(n, e.u, Pauli::Y, e.v, Pauli::Z));
    set.control_terms.push_back(detail::two_site(n, e.u, Pauli::Z, e.v, Pauli::Y));
  }
  return set;
}

/// C = -1/2 sum_e (1 - <Z_u Z_v>), constant offset included.
inline double cost_from_expectations(const ObservableSet &set, std::span<const double> zz) {
  if (zz.size() != set.cost_terms.size()) {
    throw DomainError("expected " + std::to_string(set.cost_terms.size()) +
                      " ZZ expectations, got " + std::to_string(zz.size()));
  }
  double c = 0.0;
  for (double v : zz) c -= 0.5 * (1.0 - v);
  return c;
}

/// A = sum over control terms of <Y_u Z_v> and <Z_u Y_v>.
inline double control_from_expectations(const ObservableSet &set, std::span<const double> yz) {
  if (yz.size() != set.control_terms.size()) {
    throw DomainError("expected " + std::to_string(set.control_terms.size()) +
                      " control expectations, got " + std::to_string(yz.size()));
  }
  double a = 0.0;
  for (double v : yz) a += v;
  return a;
}

/**
 * Diagonal of H_p in the computational basis: entry b is minus the number
 * of edges cut by bitstring b (qubit q is bit n-1-q of b).
 */
inline std::vector<double> dense_problem_hamiltonian(const Graph &g) {
  const std::size_t n = g.num_vertices();
  if (n > kMaxExhaustiveVertices) {
    throw SizeError("dense_problem_hamiltonian limited to " +
                    std::to_string(kMaxExhaustiveVertices) + " vertices");
  }
  const std::size_t dim = std::size_t{1} << n;
  std::vector<double> diag(dim, 0.0);
  for (std::size_t b = 0; b < dim; ++b) {
    double cut = 0.0;
    for (const Edge &e : g.edges()) {
      cut += static_cast<double>(((b >> (n - 1 - e.u)) ^ (b >> (n - 1 - e.v))) & 1U);
    }
    diag[b] = -cut;
  }
  return diag;
}

} // namespace shadowfalqon
