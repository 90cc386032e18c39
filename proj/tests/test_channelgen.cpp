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

#include <catch_amalgamated.hpp>

#include "oracles.hpp"
#include "twirlkit/channelgen.hpp"

using namespace twirlkit;
using Catch::Approx;

TEST_CASE("depolarizing channel", "[channelgen]") {
  CHECK(frobenius_distance(depolarizing(2, 1.0).superop(), Superoperator::identity(2)) < 1e-14);
  Eigen::MatrixXcd zero = Eigen::MatrixXcd::Zero(16, 16);
  zero(0, 0) = 1.0;
  CHECK((depolarizing(2, 0.0).superop().mat() - zero).norm() < 1e-14);
  CHECK(process_fidelity(depolarizing(2, 0.98).superop()) == Approx((1 + 15 * 0.98) / 16));
  // Action on a state: p rho + (1-p) I/d.
  const KrausChannel c = depolarizing(1, 0.3);
  DenseOperator rho(2, 2);
  rho << 0.7, cplx(0.1, 0.2), cplx(0.1, -0.2), 0.3;
  DenseOperator expect = 0.3 * rho + 0.7 * DenseOperator::Identity(2, 2) / 2.0;
  CHECK((c.apply(rho) - expect).norm() < 1e-14);
  CHECK_THROWS_AS(depolarizing(1, 1.5), Error);
}

TEST_CASE("amplitude damping", "[channelgen]") {
  CHECK(frobenius_distance(amplitude_damping(2, {0.0, 0.0}).superop(),
                           Superoperator::identity(2)) < 1e-14);
  // Full damping resets to |0>.
  DenseOperator one = DenseOperator::Zero(2, 2);
  one(1, 1) = 1.0;
  DenseOperator zero = DenseOperator::Zero(2, 2);
  zero(0, 0) = 1.0;
  CHECK((amplitude_damping(1, {1.0}).apply(one) - zero).norm() < 1e-14);
  const double g = 0.13;
  const auto lam = pauli_fidelities(amplitude_damping(1, {g}).superop());
  CHECK(lam[0] == Approx(1.0));
  CHECK(lam[PauliOp::from_label("X").index()] == Approx(std::sqrt(1 - g)));
  CHECK(lam[PauliOp::from_label("Y").index()] == Approx(std::sqrt(1 - g)));
  CHECK(lam[PauliOp::from_label("Z").index()] == Approx(1 - g));
  CHECK_THROWS_AS(amplitude_damping(1, {-0.1}), Error);
  CHECK_THROWS_AS(amplitude_damping(2, {0.1}), Error);
}

TEST_CASE("random channels", "[channelgen]") {
  CHECK(frobenius_distance(random_cptp(2, 0.0, 1).superop(), Superoperator::identity(2)) < 1e-12);
  CHECK(frobenius_distance(random_cptp(2, 0.5, 77).superop(), random_cptp(2, 0.5, 77).superop()) ==
        0.0);
  CHECK(frobenius_distance(random_cptp(2, 0.5, 77).superop(), random_cptp(2, 0.5, 78).superop()) >
        1e-3);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto c = random_cptp(1 + seed % 3, 0.6, seed);
    const auto rep = cptp_check(c.superop());
    CHECK(rep.passes(1e-10));
    // Independent Choi positivity: J = sum_k vec(K) vec(K)^dag from the Kraus set.
    const std::size_t d = c.kraus().front().rows();
    Eigen::MatrixXcd j = Eigen::MatrixXcd::Zero(d * d, d * d);
    for (const auto& k : c.kraus()) {
      Eigen::VectorXcd v(d * d);
      for (std::size_t r = 0; r < d; ++r)
        for (std::size_t s = 0; s < d; ++s) v(r * d + s) = k(r, s);
      j += v * v.adjoint();
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(j);
    CHECK(es.eigenvalues().minCoeff() >= -1e-10);
    // Full rank in the Liouville sense: generic off-diagonal support.
    CHECK(max_offdiagonal(c.superop().mat()) > 1e-4);
  }
  CHECK_THROWS_AS(random_cptp(1, 1.2, 0), Error);
}

TEST_CASE("CPTP checks", "[channelgen]") {
  CHECK(cptp_check(depolarizing(2, 0.5)).passes());
  const std::vector<DenseOperator> twice{2.0 * DenseOperator::Identity(2, 2)};
  CHECK_FALSE(cptp_check(twice).passes());
  CHECK(cptp_check(twice).tp_violation > 1.0);
  CHECK(cptp_check(random_cptp(2, 0.9, 4)).passes());
  // Transpose map is trace preserving but not completely positive.
  Eigen::MatrixXcd t = Eigen::MatrixXcd::Identity(4, 4);
  t(PauliOp::from_label("Y").index(), PauliOp::from_label("Y").index()) = -1.0;
  const auto rep = cptp_check(Superoperator(1, t));
  CHECK(rep.tp_violation < 1e-14);
  CHECK(rep.min_choi_eigenvalue < -0.1);
}

TEST_CASE("every constructor passes the CPTP check", "[channelgen]") {
  CHECK(cptp_check(depolarizing(3, 0.2).superop()).passes(1e-10));
  CHECK(cptp_check(amplitude_damping(3, {0.1, 0.5, 0.9}).superop()).passes(1e-10));
  for (std::uint64_t s = 0; s < 5; ++s)
    CHECK(cptp_check(random_cptp(2, 1.0, s).superop()).passes(1e-10));
}

TEST_CASE("real combinations of channels stay trace preserving", "[channelgen]") {
  std::mt19937_64 rng(12);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 10; ++trial) {
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(16, 16);
    double total = 0;
    for (int i = 0; i < 4; ++i) {
      const double c = g(rng);
      acc += c * random_cptp(2, 0.8, 1000 * trial + i).superop().mat();
      total += c;
    }
    acc /= total;
    Eigen::RowVectorXcd e0 = Eigen::RowVectorXcd::Zero(16);
    e0(0) = 1.0;
    CHECK((acc.row(0) - e0).norm() < 1e-12);
  }
}
