// Copyright 2026 The twirlkit Authors
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
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "twirlkit/errors.hpp"

namespace twirlkit {

using cplx = std::complex<double>;

/// Dense 2^N x 2^N operator (density matrices, Kraus operators, unitaries).
using DenseOperator = Eigen::MatrixXcd;

inline constexpr double kDefaultTol = 1e-10;

/**
 * Projective Pauli operator. Qubit 0 is the most significant bit of both
 * bit-strings, matching the Kronecker order P_0 (x) P_1 (x) ...
 *
 * The dense matrix is i^{|x&z|} X^x Z^z, so a single-qubit (x=1,z=1) is
 * Y = iXZ and every Pauli matrix is Hermitian.
 */
struct PauliOp {
  int n_qubits = 1;
  std::uint32_t x_bits = 0;
  std::uint32_t z_bits = 0;

  /// Basis index in the Pauli-Liouville order: (x_bits << N) | z_bits.
  std::size_t index() const {
    return (static_cast<std::size_t>(x_bits) << n_qubits) | z_bits;
  }
  static PauliOp from_index(int n_qubits, std::size_t index);
  /// Parses labels such as "XIZ" or "YY".
  static PauliOp from_label(std::string_view label);
  std::string label() const;
  bool is_identity() const { return x_bits == 0 && z_bits == 0; }
  bool operator==(const PauliOp&) const = default;
};

/// 0 if the two Paulis commute, 1 if they anticommute.
int commutation_symbol(const PauliOp& a, const PauliOp& b);
int commutation_symbol(std::size_t a, std::size_t b, int n_qubits);

DenseOperator pauli_matrix(const PauliOp& p);

/**
 * Pauli-Liouville matrix of a linear map on N qubits:
 * mat(i, j) = tr(sigma_i L(sigma_j)) with sigma = P / sqrt(2^N).
 */
class Superoperator {
 public:
  Superoperator() = default;
  Superoperator(int n_qubits, Eigen::MatrixXcd mat);

  static Superoperator identity(int n_qubits);

  int n_qubits() const { return n_qubits_; }
  std::size_t dim() const { return static_cast<std::size_t>(mat_.rows()); }
  const Eigen::MatrixXcd& mat() const { return mat_; }

  /// Composition: (a * b)(rho) = a(b(rho)).
  Superoperator operator*(const Superoperator& other) const;
  Superoperator adjoint() const;

 private:
  int n_qubits_ = 0;
  Eigen::MatrixXcd mat_;
};

/// Pauli-Liouville matrix to the matrix-unit basis |i><j|, row-major vec.
Eigen::MatrixXcd to_matrix_units(const Superoperator& s);
Superoperator from_matrix_units(int n_qubits, const Eigen::MatrixXcd& m);

Superoperator superop_of_kraus(std::span<const DenseOperator> kraus,
                               double tol = kDefaultTol);
Superoperator superop_of_unitary(const DenseOperator& u,
                                 double tol = kDefaultTol);

/// Diagonal of the Pauli-Liouville matrix, lambda_i = tr(P_i L(P_i)) / d.
std::vector<double> pauli_fidelities(const Superoperator& s);

struct ChiDiagonal {
  int n_qubits = 1;
  std::vector<double> values;
};

ChiDiagonal lambda_to_chi(std::span<const double> lambda);
std::vector<double> chi_to_lambda(const ChiDiagonal& chi);

double process_fidelity(const Superoperator& s);
double average_fidelity(double f_process, int d);

/// Frobenius norm of a - b.
double frobenius_distance(const Superoperator& a, const Superoperator& b);
/// Largest |entry| off the main diagonal.
double max_offdiagonal(const Eigen::MatrixXcd& m);

int qubits_from_dim(std::size_t dim, std::size_t base);

}  // namespace twirlkit
