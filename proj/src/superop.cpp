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

#include "twirlkit/superop.hpp"

#include <bit>
#include <cmath>

namespace twirlkit {

const char* error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotTracePreserving: return "NotTracePreserving";
    case ErrorKind::NotUnitary: return "NotUnitary";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::ParamOutOfRange: return "ParamOutOfRange";
    case ErrorKind::MixedModulus: return "MixedModulus";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::CapExceeded: return "CapExceeded";
    case ErrorKind::FitDiverged: return "FitDiverged";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::Numerical: return "Numerical";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(error_kind_name(kind)) + ": " + what),
      kind_(kind) {}

bool Error::is_validation() const {
  return kind_ != ErrorKind::FitDiverged && kind_ != ErrorKind::Numerical;
}

namespace {

// Entry of the unnormalized Pauli matrix in column c (row is c ^ x).
cplx pauli_column_phase(std::uint32_t x, std::uint32_t z, std::uint32_t c) {
  static const cplx kI[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  int k = std::popcount(x & z) % 4;
  if (std::popcount(z & c) & 1) k = (k + 2) % 4;
  return kI[k];
}

}  // namespace

PauliOp PauliOp::from_index(int n_qubits, std::size_t index) {
  std::size_t d = std::size_t{1} << n_qubits;
  if (index >= d * d)
    throw Error(ErrorKind::DimensionMismatch, "Pauli index out of range");
  return PauliOp{n_qubits, static_cast<std::uint32_t>(index >> n_qubits),
                 static_cast<std::uint32_t>(index & (d - 1))};
}

PauliOp PauliOp::from_label(std::string_view label) {
  if (label.empty() || label.size() > 16)
    throw Error(ErrorKind::InvalidArgument, "bad Pauli label");
  PauliOp p{static_cast<int>(label.size()), 0, 0};
  for (char ch : label) {
    p.x_bits <<= 1;
    p.z_bits <<= 1;
    switch (ch) {
      case 'I': break;
      case 'X': p.x_bits |= 1; break;
      case 'Z': p.z_bits |= 1; break;
      case 'Y': p.x_bits |= 1; p.z_bits |= 1; break;
      default:
        throw Error(ErrorKind::InvalidArgument,
                    "bad Pauli label character '" + std::string(1, ch) + "'");
    }
  }
  return p;
}

std::string PauliOp::label() const {
  std::string out;
  for (int q = 0; q < n_qubits; ++q) {
    int shift = n_qubits - 1 - q;
    bool x = (x_bits >> shift) & 1;
    bool z = (z_bits >> shift) & 1;
    out.push_back(x ? (z ? 'Y' : 'X') : (z ? 'Z' : 'I'));
  }
  return out;
}

int commutation_symbol(const PauliOp& a, const PauliOp& b) {
  return (std::popcount(a.x_bits & b.z_bits) + std::popcount(a.z_bits & b.x_bits)) & 1;
}

int commutation_symbol(std::size_t a, std::size_t b, int n_qubits) {
  return commutation_symbol(PauliOp::from_index(n_qubits, a),
                            PauliOp::from_index(n_qubits, b));
}

DenseOperator pauli_matrix(const PauliOp& p) {
  std::size_t d = std::size_t{1} << p.n_qubits;
  DenseOperator m = DenseOperator::Zero(d, d);
  for (std::uint32_t c = 0; c < d; ++c)
    m(c ^ p.x_bits, c) = pauli_column_phase(p.x_bits, p.z_bits, c);
  return m;
}

Superoperator::Superoperator(int n_qubits, Eigen::MatrixXcd mat)
    : n_qubits_(n_qubits), mat_(std::move(mat)) {
  std::size_t dim = std::size_t{1} << (2 * n_qubits);
  if (n_qubits < 1 || static_cast<std::size_t>(mat_.rows()) != dim ||
      static_cast<std::size_t>(mat_.cols()) != dim)
    throw Error(ErrorKind::DimensionMismatch,
                "superoperator must be 4^N x 4^N");
}

Superoperator Superoperator::identity(int n_qubits) {
  std::size_t dim = std::size_t{1} << (2 * n_qubits);
  return Superoperator(n_qubits, Eigen::MatrixXcd::Identity(dim, dim));
}

Superoperator Superoperator::operator*(const Superoperator& other) const {
  if (n_qubits_ != other.n_qubits_)
    throw Error(ErrorKind::DimensionMismatch, "qubit counts differ");
  return Superoperator(n_qubits_, mat_ * other.mat_);
}

Superoperator Superoperator::adjoint() const {
  return Superoperator(n_qubits_, mat_.adjoint());
}

// B has columns vec(sigma_p); each column holds d nonzeros at rows
// (c ^ x_p) * d + c. PL = B^dag MU B and MU = B PL B^dag.
Eigen::MatrixXcd to_matrix_units(const Superoperator& s) {
  const int n = s.n_qubits();
  const std::size_t d = std::size_t{1} << n;
  const std::size_t dim = d * d;
  const double norm = 1.0 / std::sqrt(static_cast<double>(d));
  const Eigen::MatrixXcd& pl = s.mat();

  // R = PL B^dag, indexed [pauli][(r,c)].
  Eigen::MatrixXcd r = Eigen::MatrixXcd::Zero(dim, dim);
  for (std::size_t row = 0; row < d; ++row) {
    for (std::size_t col = 0; col < d; ++col) {
      std::uint32_t x = static_cast<std::uint32_t>(row ^ col);
      std::size_t mu = row * d + col;
      for (std::uint32_t z = 0; z < d; ++z) {
        std::size_t q = (std::size_t(x) << n) | z;
        cplx b = std::conj(pauli_column_phase(x, z, static_cast<std::uint32_t>(col))) * norm;
        r.col(mu) += pl.col(q) * b;
      }
    }
  }
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
  for (std::size_t row = 0; row < d; ++row) {
    for (std::size_t col = 0; col < d; ++col) {
      std::uint32_t x = static_cast<std::uint32_t>(row ^ col);
      std::size_t mu = row * d + col;
      for (std::uint32_t z = 0; z < d; ++z) {
        std::size_t p = (std::size_t(x) << n) | z;
        cplx b = pauli_column_phase(x, z, static_cast<std::uint32_t>(col)) * norm;
        out.row(mu) += b * r.row(p);
      }
    }
  }
  return out;
}

Superoperator from_matrix_units(int n_qubits, const Eigen::MatrixXcd& m) {
  const std::size_t d = std::size_t{1} << n_qubits;
  const std::size_t dim = d * d;
  if (static_cast<std::size_t>(m.rows()) != dim ||
      static_cast<std::size_t>(m.cols()) != dim)
    throw Error(ErrorKind::DimensionMismatch, "matrix-unit superoperator size");
  const double norm = 1.0 / std::sqrt(static_cast<double>(d));

  // T = MU B, then PL = B^dag T.
  Eigen::MatrixXcd t = Eigen::MatrixXcd::Zero(dim, dim);
  for (std::uint32_t x = 0; x < d; ++x) {
    for (std::uint32_t z = 0; z < d; ++z) {
      std::size_t q = (std::size_t(x) << n_qubits) | z;
      for (std::uint32_t c = 0; c < d; ++c) {
        cplx b = pauli_column_phase(x, z, c) * norm;
        t.col(q) += m.col((c ^ x) * d + c) * b;
      }
    }
  }
  Eigen::MatrixXcd pl = Eigen::MatrixXcd::Zero(dim, dim);
  for (std::uint32_t x = 0; x < d; ++x) {
    for (std::uint32_t z = 0; z < d; ++z) {
      std::size_t p = (std::size_t(x) << n_qubits) | z;
      for (std::uint32_t c = 0; c < d; ++c) {
        cplx b = std::conj(pauli_column_phase(x, z, c)) * norm;
        pl.row(p) += b * t.row((c ^ x) * d + c);
      }
    }
  }
  return Superoperator(n_qubits, std::move(pl));
}

int qubits_from_dim(std::size_t dim, std::size_t base) {
  int n = 0;
  std::size_t v = 1;
  while (v < dim) {
    v *= base;
    ++n;
  }
  if (v != dim || n < 1)
    throw Error(ErrorKind::DimensionMismatch, "dimension is not a power of the base");
  return n;
}

Superoperator superop_of_kraus(std::span<const DenseOperator> kraus, double tol) {
  if (kraus.empty())
    throw Error(ErrorKind::InvalidArgument, "empty Kraus list");
  const std::size_t d = static_cast<std::size_t>(kraus.front().rows());
  const int n = qubits_from_dim(d, 2);
  Eigen::MatrixXcd tp = Eigen::MatrixXcd::Zero(d, d);
  for (const auto& k : kraus) {
    if (static_cast<std::size_t>(k.rows()) != d || static_cast<std::size_t>(k.cols()) != d)
      throw Error(ErrorKind::DimensionMismatch, "Kraus operators differ in size");
    tp += k.adjoint() * k;
  }
  double dev = (tp - Eigen::MatrixXcd::Identity(d, d)).norm();
  if (dev > tol)
    throw Error(ErrorKind::NotTracePreserving,
                "sum K^dag K deviates from identity by " + std::to_string(dev));
  // vec_rm(K rho K^dag) = (K kron conj(K)) vec_rm(rho)
  Eigen::MatrixXcd mu = Eigen::MatrixXcd::Zero(d * d, d * d);
  for (const auto& k : kraus) {
    Eigen::MatrixXcd kc = k.conjugate();
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t kk = 0; kk < d; ++kk) {
        cplx a = k(i, kk);
        if (a == cplx(0.0)) continue;
        mu.block(i * d, kk * d, d, d) += a * kc;
      }
  }
  return from_matrix_units(n, mu);
}

Superoperator superop_of_unitary(const DenseOperator& u, double tol) {
  if (u.rows() != u.cols())
    throw Error(ErrorKind::DimensionMismatch, "unitary must be square");
  double dev = (u.adjoint() * u - Eigen::MatrixXcd::Identity(u.rows(), u.cols())).norm();
  if (dev > tol)
    throw Error(ErrorKind::NotUnitary, "U^dag U deviates from identity by " + std::to_string(dev));
  DenseOperator k[1] = {u};
  return superop_of_kraus(k, tol);
}

std::vector<double> pauli_fidelities(const Superoperator& s) {
  std::vector<double> out(s.dim());
  for (std::size_t i = 0; i < s.dim(); ++i) out[i] = s.mat()(i, i).real();
  return out;
}

namespace {

// Walsh-Hadamard over the symplectic form: out_j = sum_i (-1)^{<i,j>} in_i.
std::vector<double> symplectic_transform(std::span<const double> in, int n) {
  const std::size_t dim = in.size();
  std::vector<double> out(dim, 0.0);
  for (std::size_t j = 0; j < dim; ++j) {
    PauliOp pj = PauliOp::from_index(n, j);
    double acc = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
      PauliOp pi = PauliOp::from_index(n, i);
      acc += commutation_symbol(pi, pj) ? -in[i] : in[i];
    }
    out[j] = acc;
  }
  return out;
}

}  // namespace

ChiDiagonal lambda_to_chi(std::span<const double> lambda) {
  const int n = qubits_from_dim(lambda.size(), 4);
  std::vector<double> chi = symplectic_transform(lambda, n);
  const double scale = 1.0 / static_cast<double>(lambda.size());
  for (double& v : chi) v *= scale;
  return ChiDiagonal{n, std::move(chi)};
}

std::vector<double> chi_to_lambda(const ChiDiagonal& chi) {
  if (chi.values.size() != (std::size_t{1} << (2 * chi.n_qubits)))
    throw Error(ErrorKind::DimensionMismatch, "chi vector length must be 4^N");
  return symplectic_transform(chi.values, chi.n_qubits);
}

double process_fidelity(const Superoperator& s) {
  return s.mat().trace().real() / static_cast<double>(s.dim());
}

double average_fidelity(double f_process, int d) {
  if (d < 2) throw Error(ErrorKind::ParamOutOfRange, "dimension must be >= 2");
  return (d * f_process + 1.0) / (d + 1.0);
}

double frobenius_distance(const Superoperator& a, const Superoperator& b) {
  if (a.n_qubits() != b.n_qubits())
    throw Error(ErrorKind::DimensionMismatch, "qubit counts differ");
  return (a.mat() - b.mat()).norm();
}

double max_offdiagonal(const Eigen::MatrixXcd& m) {
  double best = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      if (i != j) best = std::max(best, std::abs(m(i, j)));
  return best;
}

}  // namespace twirlkit
