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

#include <random>

#include "oracles.hpp"
#include "twirlkit/channelgen.hpp"
#include "twirlkit/superop.hpp"

using namespace twirlkit;
using Catch::Approx;

namespace {

Eigen::MatrixXcd gaussian_unitary(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return oracle::haar_unitary(1 << n, rng);
}

}  // namespace

TEST_CASE("pauli matrices follow the Kronecker convention", "[superop]") {
  CHECK((pauli_matrix(PauliOp{1, 0, 0}) - Eigen::MatrixXcd::Identity(2, 2)).norm() == 0.0);
  // x=1,z=1 is Y = iXZ.
  CHECK((pauli_matrix(PauliOp{1, 1, 1}) - oracle::single_pauli('Y')).norm() < 1e-15);
  // x=10, z=01 is X (x) Z.
  const auto xz = oracle::kron(oracle::single_pauli('X'), oracle::single_pauli('Z'));
  CHECK((pauli_matrix(PauliOp{2, 0b10, 0b01}) - xz).norm() < 1e-15);
  for (int n = 1; n <= 3; ++n)
    for (std::size_t i = 0; i < (std::size_t{1} << (2 * n)); ++i) {
      const auto p = pauli_matrix(PauliOp::from_index(n, i));
      CHECK((p - oracle::pauli(n, i)).norm() < 1e-15);
      CHECK((p - p.adjoint()).norm() < 1e-15);
    }
}

TEST_CASE("labels and indices roundtrip", "[superop]") {
  const PauliOp p = PauliOp::from_label("XYZI");
  CHECK(p.label() == "XYZI");
  CHECK(PauliOp::from_index(4, p.index()) == p);
  CHECK_THROWS_AS(PauliOp::from_label("XQ"), Error);
}

TEST_CASE("normalized Paulis are orthonormal", "[superop]") {
  for (int n = 1; n <= 3; ++n) {
    const std::size_t dim = std::size_t{1} << (2 * n);
    const double d = std::ldexp(1.0, n);
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = 0; j < dim; ++j) {
        const cplx ip = (oracle::pauli(n, i).adjoint() * pauli_matrix(PauliOp::from_index(n, j)))
                            .trace() / d;
        CHECK(std::abs(ip - (i == j ? 1.0 : 0.0)) < 1e-14);
      }
  }
}

TEST_CASE("superoperator of Kraus operators", "[superop]") {
  SECTION("identity") {
    const std::vector<DenseOperator> k{DenseOperator::Identity(4, 4)};
    CHECK((superop_of_kraus(k).mat() - Eigen::MatrixXcd::Identity(16, 16)).norm() < 1e-14);
  }
  SECTION("single-qubit depolarizing from the analytic Kraus set") {
    const double p = 0.83;
    std::vector<DenseOperator> k{std::sqrt((1 + 3 * p) / 4) * oracle::single_pauli('I')};
    for (char c : {'X', 'Y', 'Z'}) k.push_back(std::sqrt((1 - p) / 4) * oracle::single_pauli(c));
    Eigen::MatrixXcd expect = Eigen::MatrixXcd::Zero(4, 4);
    expect.diagonal() << 1, p, p, p;
    CHECK((superop_of_kraus(k).mat() - expect).norm() < 1e-14);
  }
  SECTION("CZ against brute-force traces") {
    DenseOperator cz = DenseOperator::Identity(4, 4);
    cz(3, 3) = -1;
    const auto s = superop_of_unitary(cz);
    CHECK((s.mat() - oracle::liouville(2, cz)).norm() < 1e-13);
    CHECK(s.mat().imag().norm() < 1e-14);
  }
  SECTION("random Kraus sets against brute-force traces") {
    for (int n = 1; n <= 2; ++n) {
      const auto ch = random_cptp(n, 0.7, 40 + n);
      CHECK((ch.superop().mat() - oracle::liouville(n, ch.kraus())).norm() < 1e-12);
    }
  }
  SECTION("non trace preserving input is rejected") {
    const std::vector<DenseOperator> k{2.0 * DenseOperator::Identity(2, 2)};
    try {
      superop_of_kraus(k);
      FAIL("expected NotTracePreserving");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::NotTracePreserving);
    }
  }
}

TEST_CASE("unitary superoperators form a homomorphism", "[superop]") {
  for (int n = 1; n <= 3; ++n)
    for (std::uint64_t s = 0; s < 4; ++s) {
      const auto u = gaussian_unitary(n, 100 * n + s), v = gaussian_unitary(n, 200 * n + s);
      const auto lhs = superop_of_unitary(u * v);
      const auto rhs = superop_of_unitary(u) * superop_of_unitary(v);
      CHECK(frobenius_distance(lhs, rhs) <= 1e-10);
      // Real orthogonal.
      CHECK(lhs.mat().imag().norm() < 1e-12);
      CHECK((lhs.mat().transpose() * lhs.mat() -
             Eigen::MatrixXcd::Identity(lhs.dim(), lhs.dim())).norm() < 1e-10);
    }
  CHECK((superop_of_unitary(DenseOperator::Identity(2, 2)).mat() -
         Eigen::MatrixXcd::Identity(4, 4)).norm() < 1e-15);
  DenseOperator bad = DenseOperator::Identity(2, 2);
  bad(0, 0) = 2.0;
  CHECK_THROWS_AS(superop_of_unitary(bad), Error);
}

TEST_CASE("CS is the identity on Z strings and mixes only X_a Z blocks", "[superop]") {
  DenseOperator cs = DenseOperator::Identity(4, 4);
  cs(3, 3) = cplx(0, 1);
  const auto s = superop_of_unitary(cs);
  CHECK((s.mat() - oracle::liouville(2, cs)).norm() < 1e-13);
  for (std::size_t i = 0; i < 16; ++i)
    for (std::size_t j = 0; j < 16; ++j) {
      const double v = std::abs(s.mat()(i, j));
      if (i < 4 || j < 4) {
        CHECK(v == Approx(i == j ? 1.0 : 0.0).margin(1e-14));
      } else if ((i >> 2) != (j >> 2)) {
        CHECK(v < 1e-14);  // different X part
      }
    }
  // Each X_a block is a nontrivial 4x4 orthogonal block.
  for (std::size_t a = 1; a < 4; ++a) {
    Eigen::MatrixXcd blk = s.mat().block(4 * a, 4 * a, 4, 4);
    CHECK((blk.transpose() * blk - Eigen::MatrixXcd::Identity(4, 4)).norm() < 1e-12);
    CHECK(max_offdiagonal(blk) > 0.1);
  }
}

TEST_CASE("matrix-unit conversion roundtrips", "[superop]") {
  const auto s = random_cptp(2, 0.5, 3).superop();
  CHECK(frobenius_distance(from_matrix_units(2, to_matrix_units(s)), s) < 1e-13);
}

TEST_CASE("Pauli fidelities", "[superop]") {
  for (double v : pauli_fidelities(Superoperator::identity(2))) CHECK(v == Approx(1.0));
  const auto dep = pauli_fidelities(depolarizing(2, 0.9).superop());
  CHECK(dep[0] == Approx(1.0));
  for (std::size_t i = 1; i < dep.size(); ++i) CHECK(dep[i] == Approx(0.9).margin(1e-14));
  for (double v : pauli_fidelities(superop_of_unitary(gaussian_unitary(2, 9)))) {
    CHECK(v <= 1.0 + 1e-12);
    CHECK(v >= -1.0 - 1e-12);
  }
}

TEST_CASE("Walsh-Hadamard transforms between lambda and chi", "[superop]") {
  {
    const std::vector<double> ones(4, 1.0);
    const auto chi = lambda_to_chi(ones);
    CHECK(chi.values[0] == Approx(1.0));
    for (std::size_t i = 1; i < 4; ++i) CHECK(chi.values[i] == Approx(0.0).margin(1e-15));
  }
  {
    const double p = 0.77;
    const std::vector<double> lam{1, p, p, p};
    const auto chi = lambda_to_chi(lam);
    CHECK(chi.values[0] == Approx((1 + 3 * p) / 4));
    for (std::size_t i = 1; i < 4; ++i) CHECK(chi.values[i] == Approx((1 - p) / 4));
  }
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int n = 1; n <= 4; ++n) {
    const std::size_t dim = std::size_t{1} << (2 * n);
    std::vector<double> lam(dim);
    for (auto& v : lam) v = u(rng);
    const auto chi = lambda_to_chi(lam);
    // Explicit Walsh matrix oracle.
    const Eigen::MatrixXd w = oracle::walsh(n);
    const Eigen::VectorXd lv = Eigen::Map<const Eigen::VectorXd>(lam.data(), dim);
    const Eigen::VectorXd expect = w * lv / double(dim);
    for (std::size_t i = 0; i < dim; ++i) CHECK(std::abs(chi.values[i] - expect(i)) <= 1e-12);
    const auto back = chi_to_lambda(chi);
    for (std::size_t i = 0; i < dim; ++i) CHECK(std::abs(back[i] - lam[i]) <= 1e-12);
  }
  CHECK_THROWS_AS(lambda_to_chi(std::vector<double>(5, 1.0)), Error);
}

TEST_CASE("process and average fidelity", "[superop]") {
  CHECK(process_fidelity(Superoperator::identity(3)) == Approx(1.0));
  CHECK(process_fidelity(depolarizing(1, 0.6).superop()) == Approx((1 + 3 * 0.6) / 4));
  CHECK(average_fidelity(1.0, 2) == Approx(1.0));
  CHECK(average_fidelity(0.25, 2) == Approx(0.5));
  CHECK(average_fidelity(0.97, 8) == Approx((8 * 0.97 + 1) / 9));
  // Process fidelity equals chi_00.
  const auto s = random_cptp(2, 0.4, 8).superop();
  const auto chi = lambda_to_chi(pauli_fidelities(s));
  CHECK(process_fidelity(s) == Approx(chi.values[0]).margin(1e-14));
}

TEST_CASE("superoperator validates its size", "[superop]") {
  CHECK_THROWS_AS(Superoperator(1, Eigen::MatrixXcd::Identity(3, 3)), Error);
  CHECK_THROWS_AS(qubits_from_dim(12, 4), Error);
}
