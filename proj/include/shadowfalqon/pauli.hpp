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

#include <complex>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "shadowfalqon/errors.hpp"

namespace shadowfalqon {

/** Single-qubit Pauli label. */
enum class Pauli : std::uint8_t { I, X, Y, Z };

inline char to_char(Pauli p) {
  switch (p) {
    case Pauli::I:
      return 'I';
    case Pauli::X:
      return 'X';
    case Pauli::Y:
      return 'Y';
    case Pauli::Z:
      return 'Z';
  }
  return '?';
}

/**
 * Phase-free tensor product of single-qubit Paulis.
 *
 * Qubit 0 is the leftmost label and maps to the most significant bit of a
 * computational basis index, so for n qubits qubit q owns bit (n - 1 - q).
 * Immutable after construction.
 */
class PauliString {
 public:
  explicit PauliString(std::vector<Pauli> axes) : axes_(std::move(axes)) {
    if (axes_.empty()) {
      throw DomainError("PauliString needs at least one qubit");
    }
  }

  std::size_t num_qubits() const { return axes_.size(); }
  Pauli operator[](std::size_t q) const { return axes_[q]; }
  const std::vector<Pauli> &axes() const { return axes_; }

  std::size_t weight() const {
    std::size_t w = 0;
    for (Pauli p : axes_) w += (p != Pauli::I);
    return w;
  }

  /// Qubits carrying a non-identity label, ascending.
  std::vector<std::size_t> support() const {
    std::vector<std::size_t> out;
    for (std::size_t q = 0; q < axes_.size(); ++q) {
      if (axes_[q] != Pauli::I) out.push_back(q);
    }
    return out;
  }

  /// Basis-index bitmask of the support (valid for n <= 64).
  std::uint64_t support_mask() const {
    const std::size_t n = axes_.size();
    std::uint64_t m = 0;
    for (std::size_t q = 0; q < n; ++q) {
      if (axes_[q] != Pauli::I) m |= std::uint64_t{1} << (n - 1 - q);
    }
    return m;
  }

  bool contains(Pauli p) const {
    for (Pauli a : axes_) {
      if (a == p) return true;
    }
    return false;
  }

  std::string label() const {
    std::string s;
    s.reserve(axes_.size());
    for (Pauli p : axes_) s.push_back(to_char(p));
    return s;
  }

  friend bool operator==(const PauliString &, const PauliString &) = default;

 private:
  std::vector<Pauli> axes_;
};

inline std::size_t weight(const PauliString &p) { return p.weight(); }

/** Parses "IXYZ"-style labels; qubit 0 is the leftmost character. */
inline PauliString pauli_from_label(std::string_view label) {
  if (label.empty()) {
    throw ParseError("empty Pauli label", 0, 0);
  }
  std::vector<Pauli> axes;
  axes.reserve(label.size());
  for (std::size_t i = 0; i < label.size(); ++i) {
    switch (label[i]) {
      case 'I':
        axes.push_back(Pauli::I);
        break;
      case 'X':
        axes.push_back(Pauli::X);
        break;
      case 'Y':
        axes.push_back(Pauli::Y);
        break;
      case 'Z':
        axes.push_back(Pauli::Z);
        break;
      default:
        throw ParseError("invalid Pauli character '" + std::string(1, label[i]) +
                             "' at position " + std::to_string(i),
                         0, i);
    }
  }
  return PauliString(std::move(axes));
}

/// Largest qubit count accepted by dense_matrix.
inline constexpr std::size_t kMaxDenseQubits = 12;

inline Eigen::Matrix2cd single_qubit_matrix(Pauli p) {
  using C = std::complex<double>;
  Eigen::Matrix2cd m;
  switch (p) {
    case Pauli::I:
      m << 1, 0, 0, 1;
      break;
    case Pauli::X:
      m << 0, 1, 1, 0;
      break;
    case Pauli::Y:
      m << 0, C(0, -1), C(0, 1), 0;
      break;
    case Pauli::Z:
      m << 1, 0, 0, -1;
      break;
  }
  return m;
}

/**
 * Dense 2^n x 2^n matrix, Kronecker product in qubit order (qubit 0 is the
 * outermost factor). Intended for small-n cross-checks.
 */
inline Eigen::MatrixXcd dense_matrix(const PauliString &p) {
  const std::size_t n = p.num_qubits();
  if (n > kMaxDenseQubits) {
    throw SizeError("dense_matrix limited to " + std::to_string(kMaxDenseQubits) +
                    " qubits, got " + std::to_string(n));
  }
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(1, 1);
  for (std::size_t q = 0; q < n; ++q) {
    const Eigen::Matrix2cd f = single_qubit_matrix(p[q]);
    Eigen::MatrixXcd next(out.rows() * 2, out.cols() * 2);
    for (Eigen::Index r = 0; r < out.rows(); ++r) {
      for (Eigen::Index c = 0; c < out.cols(); ++c) {
        next.block<2, 2>(2 * r, 2 * c) = out(r, c) * f;
      }
    }
    out = std::move(next);
  }
  return out;
}

} // namespace shadowfalqon
