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

#include "twirlkit/channelgen.hpp"

#include <cmath>
#include <random>

namespace twirlkit {

KrausChannel::KrausChannel(std::vector<DenseOperator> kraus, double tol)
    : kraus_(std::move(kraus)) {
  if (kraus_.empty())
    throw Error(ErrorKind::InvalidArgument, "channel needs at least one Kraus operator");
  n_qubits_ = qubits_from_dim(static_cast<std::size_t>(kraus_.front().rows()), 2);
  const auto d = kraus_.front().rows();
  Eigen::MatrixXcd tp = Eigen::MatrixXcd::Zero(d, d);
  for (const auto& k : kraus_) {
    if (k.rows() != d || k.cols() != d)
      throw Error(ErrorKind::DimensionMismatch, "Kraus operators differ in size");
    tp += k.adjoint() * k;
  }
  double dev = (tp - Eigen::MatrixXcd::Identity(d, d)).norm();
  if (dev > tol)
    throw Error(ErrorKind::NotTracePreserving,
                "sum K^dag K deviates from identity by " + std::to_string(dev));
}

Superoperator KrausChannel::superop() const {
  return superop_of_kraus(kraus_, 1e-8);
}

DenseOperator KrausChannel::apply(const DenseOperator& rho) const {
  DenseOperator out = DenseOperator::Zero(rho.rows(), rho.cols());
  for (const auto& k : kraus_) out += k * rho * k.adjoint();
  return out;
}

KrausChannel depolarizing(int n_qubits, double p) {
  if (!(p >= 0.0 && p <= 1.0))
    throw Error(ErrorKind::ParamOutOfRange, "depolarizing p must lie in [0,1]");
  if (n_qubits < 1 || n_qubits > 5)
    throw Error(ErrorKind::ParamOutOfRange, "qubit count must be 1..5");
  const std::size_t d = std::size_t{1} << n_qubits;
  const double d2 = static_cast<double>(d * d);
  std::vector<DenseOperator> kraus;
  kraus.push_back(std::sqrt(p + (1.0 - p) / d2) *
                  DenseOperator::Identity(d, d));
  if (p < 1.0) {
    const double w = std::sqrt((1.0 - p) / d2);
    for (std::size_t i = 1; i < d * d; ++i)
      kraus.push_back(w * pauli_matrix(PauliOp::from_index(n_qubits, i)));
  }
  return KrausChannel(std::move(kraus));
}

namespace {

DenseOperator kron(const DenseOperator& a, const DenseOperator& b) {
  DenseOperator out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

}  // namespace

KrausChannel amplitude_damping(int n_qubits, const std::vector<double>& gammas) {
  if (static_cast<int>(gammas.size()) != n_qubits)
    throw Error(ErrorKind::DimensionMismatch, "one damping strength per qubit");
  std::vector<DenseOperator> kraus{DenseOperator::Identity(1, 1)};
  for (double g : gammas) {
    if (!(g >= 0.0 && g <= 1.0))
      throw Error(ErrorKind::ParamOutOfRange, "damping strength must lie in [0,1]");
    DenseOperator k0 = DenseOperator::Zero(2, 2);
    k0(0, 0) = 1.0;
    k0(1, 1) = std::sqrt(1.0 - g);
    DenseOperator k1 = DenseOperator::Zero(2, 2);
    k1(0, 1) = std::sqrt(g);
    std::vector<DenseOperator> next;
    for (const auto& k : kraus) {
      next.push_back(kron(k, k0));
      if (g > 0.0) next.push_back(kron(k, k1));
    }
    kraus = std::move(next);
  }
  return KrausChannel(std::move(kraus));
}

KrausChannel random_cptp(int n_qubits, double strength, std::uint64_t seed,
                         int env_dim) {
  if (!(strength >= 0.0 && strength <= 1.0))
    throw Error(ErrorKind::ParamOutOfRange, "strength must lie in [0,1]");
  if (env_dim < 1) throw Error(ErrorKind::ParamOutOfRange, "env_dim must be >= 1");
  const Eigen::Index d = Eigen::Index{1} << n_qubits;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXcd g(d * env_dim, d);
  for (Eigen::Index i = 0; i < g.rows(); ++i)
    for (Eigen::Index j = 0; j < g.cols(); ++j) g(i, j) = cplx(normal(rng), normal(rng));
  // Thin Q factor is an isometry C^d -> C^d (x) C^env.
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  Eigen::MatrixXcd v = qr.householderQ() * Eigen::MatrixXcd::Identity(g.rows(), d);
  std::vector<DenseOperator> kraus;
  if (strength < 1.0)
    kraus.push_back(std::sqrt(1.0 - strength) * DenseOperator::Identity(d, d));
  if (strength > 0.0)
    for (int e = 0; e < env_dim; ++e)
      kraus.push_back(std::sqrt(strength) * v.block(e * d, 0, d, d));
  return KrausChannel(std::move(kraus), 1e-9);
}

Eigen::MatrixXcd choi_matrix(const Superoperator& s) {
  const std::size_t d = std::size_t{1} << s.n_qubits();
  Eigen::MatrixXcd mu = to_matrix_units(s);
  // J[(i,k),(j,l)] = <i| L(|k><l|) |j>
  Eigen::MatrixXcd j = Eigen::MatrixXcd::Zero(d * d, d * d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t jj = 0; jj < d; ++jj)
      for (std::size_t k = 0; k < d; ++k)
        for (std::size_t l = 0; l < d; ++l)
          j(i * d + k, jj * d + l) = mu(i * d + jj, k * d + l);
  return j;
}

namespace {

CptpReport choi_report(const Eigen::MatrixXcd& choi, double tp_violation) {
  CptpReport rep;
  rep.tp_violation = tp_violation;
  rep.hermiticity_violation = (choi - choi.adjoint()).norm();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(
      0.5 * (choi + choi.adjoint()), Eigen::EigenvaluesOnly);
  rep.min_choi_eigenvalue = es.eigenvalues().minCoeff();
  return rep;
}

}  // namespace

CptpReport cptp_check(const std::vector<DenseOperator>& kraus) {
  if (kraus.empty()) return CptpReport{1.0, 0.0, 0.0};
  const auto d = kraus.front().rows();
  Eigen::MatrixXcd tp = Eigen::MatrixXcd::Zero(d, d);
  for (const auto& k : kraus) tp += k.adjoint() * k;
  double tp_violation = (tp - Eigen::MatrixXcd::Identity(d, d)).norm();
  // Choi from the Kraus form directly: sum_K vec(K) vec(K)^dag.
  Eigen::MatrixXcd choi = Eigen::MatrixXcd::Zero(d * d, d * d);
  for (const auto& k : kraus) {
    Eigen::VectorXcd v(d * d);
    for (Eigen::Index i = 0; i < d; ++i)
      for (Eigen::Index c = 0; c < d; ++c) v(i * d + c) = k(i, c);
    choi += v * v.adjoint();
  }
  return choi_report(choi, tp_violation);
}

CptpReport cptp_check(const KrausChannel& c) { return cptp_check(c.kraus()); }

CptpReport cptp_check(const Superoperator& s) {
  Eigen::VectorXcd row0 = s.mat().row(0).transpose();
  row0(0) -= 1.0;
  return choi_report(choi_matrix(s), row0.norm());
}

}  // namespace twirlkit
