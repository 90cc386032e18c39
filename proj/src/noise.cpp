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

#include "twirlkit/noise.hpp"

#include <bit>
#include <cmath>
#include <random>

#include "twirlkit/channelgen.hpp"

namespace twirlkit {

std::size_t beta_count(int n_qubits) {
  return (std::size_t{1} << n_qubits) - static_cast<std::size_t>(n_qubits) - 1;
}

std::size_t alpha_count(int n_qubits) {
  return static_cast<std::size_t>(n_qubits) * (n_qubits - 1) / 2;
}

NoiseModel NoiseModel::sample(int n_qubits, std::uint64_t seed, double p_depol, double spam) {
  if (n_qubits < 1 || n_qubits > 5) throw Error(ErrorKind::ParamOutOfRange, "qubit count must be 1..5");
  NoiseModel m;
  m.n_qubits = n_qubits;
  m.p_depol = p_depol;
  m.seed = seed;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> gamma(0.0, 0.02), alpha(0.0, 0.01), beta(0.0, 0.1);
  for (int q = 0; q < n_qubits; ++q) m.gammas.push_back(gamma(rng));
  for (std::size_t i = 0; i < alpha_count(n_qubits); ++i) m.alphas.push_back(alpha(rng));
  for (std::size_t i = 0; i < beta_count(n_qubits); ++i) m.betas.push_back(beta(rng));
  m.spam.assign(n_qubits, spam);
  m.validate();
  return m;
}

NoiseModel NoiseModel::depolarizing_only(int n_qubits, double p_depol, double spam) {
  NoiseModel m;
  m.n_qubits = n_qubits;
  m.p_depol = p_depol;
  m.gammas.assign(n_qubits, 0.0);
  m.alphas.assign(alpha_count(n_qubits), 0.0);
  m.betas.assign(beta_count(n_qubits), 0.0);
  m.spam.assign(n_qubits, spam);
  m.validate();
  return m;
}

void NoiseModel::validate() const {
  auto in = [](double v, double lo, double hi) { return v >= lo && v <= hi; };
  if (n_qubits < 1 || n_qubits > 5) throw Error(ErrorKind::ParamOutOfRange, "qubit count must be 1..5");
  if (!in(p_depol, 0.0, 1.0)) throw Error(ErrorKind::ParamOutOfRange, "p_depol must lie in [0,1]");
  if (gammas.size() != static_cast<std::size_t>(n_qubits) || alphas.size() != alpha_count(n_qubits) ||
      betas.size() != beta_count(n_qubits) || spam.size() != static_cast<std::size_t>(n_qubits))
    throw Error(ErrorKind::DimensionMismatch, "noise parameter vector lengths do not match N");
  for (double g : gammas)
    if (!in(g, 0.0, 0.02)) throw Error(ErrorKind::ParamOutOfRange, "gamma outside [0,0.02]");
  for (double a : alphas)
    if (!in(a, 0.0, 0.01)) throw Error(ErrorKind::ParamOutOfRange, "alpha outside [0,0.01]");
  for (double b : betas)
    if (!in(b, 0.0, 0.1)) throw Error(ErrorKind::ParamOutOfRange, "beta outside [0,0.1]");
  for (double s : spam)
    if (!in(s, 0.0, 1.0)) throw Error(ErrorKind::ParamOutOfRange, "spam outside [0,1]");
}

namespace {

// SWAP of qubits j and k as a basis permutation.
std::uint32_t swap_bits(std::uint32_t x, std::uint32_t mj, std::uint32_t mk) {
  bool bj = x & mj, bk = x & mk;
  if (bj == bk) return x;
  return x ^ mj ^ mk;
}

}  // namespace

DenseOperator coherent_error_unitary(const NoiseModel& model) {
  model.validate();
  const int n = model.n_qubits;
  const std::size_t d = std::size_t{1} << n;
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(d, d);
  std::size_t idx = 0;
  for (int j = 0; j < n; ++j)
    for (int k = j + 1; k < n; ++k, ++idx) {
      const std::uint32_t mj = 1u << (n - 1 - j), mk = 1u << (n - 1 - k);
      for (std::uint32_t x = 0; x < d; ++x) h(swap_bits(x, mj, mk), x) += model.alphas[idx];
    }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  Eigen::VectorXcd phases = (es.eigenvalues().cast<cplx>() * cplx(0.0, 1.0)).array().exp();
  Eigen::MatrixXcd u_swap = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
  Eigen::VectorXcd zz = Eigen::VectorXcd::Ones(d);
  idx = 0;
  for (std::uint32_t z = 0; z < d; ++z)
    if (std::popcount(z) >= 2) zz(z) = std::polar(1.0, model.betas[idx++]);
  return zz.asDiagonal() * u_swap;
}

Superoperator build_noise(const NoiseModel& model) {
  model.validate();
  const int n = model.n_qubits;
  // Coherent error after damping, as one Kraus list; avoids dense products.
  const DenseOperator u = coherent_error_unitary(model);
  std::vector<DenseOperator> kraus;
  const KrausChannel damp = amplitude_damping(n, model.gammas);
  for (const auto& k : damp.kraus()) kraus.push_back(u * k);
  Eigen::MatrixXcd mat = superop_of_kraus(kraus, 1e-9).mat();
  // Global depolarizing first: diag(1, p, ..., p) on the right.
  mat.rightCols(mat.cols() - 1) *= model.p_depol;
  return Superoperator(n, std::move(mat));
}

DenseOperator noisy_initial_state(int n_qubits, Basis basis, const std::vector<double>& spam) {
  if (spam.size() != static_cast<std::size_t>(n_qubits))
    throw Error(ErrorKind::DimensionMismatch, "one SPAM probability per qubit");
  for (double s : spam)
    if (!(s >= 0.0 && s <= 1.0)) throw Error(ErrorKind::ParamOutOfRange, "spam outside [0,1]");
  const std::size_t d = std::size_t{1} << n_qubits;
  DenseOperator rho = DenseOperator::Zero(d, d);
  for (std::uint32_t z = 0; z < d; ++z) {
    double p = 1.0;
    for (int q = 0; q < n_qubits; ++q)
      p *= (z >> (n_qubits - 1 - q)) & 1 ? spam[q] : 1.0 - spam[q];
    rho(z, z) = p;
  }
  if (basis == Basis::X) {
    DenseOperator h = DenseOperator::Zero(d, d);
    const double norm = std::pow(2.0, -0.5 * n_qubits);
    for (std::uint32_t r = 0; r < d; ++r)
      for (std::uint32_t c = 0; c < d; ++c) h(r, c) = (std::popcount(r & c) & 1) ? -norm : norm;
    rho = h * rho * h;
  }
  return rho;
}

DenseOperator noisy_initial_state(int n_qubits, Basis basis, double spam) {
  return noisy_initial_state(n_qubits, basis, std::vector<double>(n_qubits, spam));
}

double true_fidelity(const NoiseModel& model) { return process_fidelity(build_noise(model)); }

}  // namespace twirlkit
