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

#include <bit>

#include "oracles.hpp"
#include "twirlkit/channelgen.hpp"
#include "twirlkit/noise.hpp"
#include "twirlkit/parallel.hpp"
#include "twirlkit/twirl.hpp"

using namespace twirlkit;
using Catch::Approx;
using Mat = Eigen::MatrixXcd;

namespace {

Mat taylor_exp(const Mat& a) {
  Mat out = Mat::Identity(a.rows(), a.cols()), term = out;
  for (int k = 1; k < 40; ++k) {
    term = term * a / static_cast<double>(k);
    out += term;
  }
  return out;
}

Mat dense_swap(int n, int j, int k) {
  const std::size_t d = std::size_t{1} << n;
  Mat s = Mat::Zero(d, d);
  for (std::uint32_t x = 0; x < d; ++x) {
    const int bj = (x >> (n - 1 - j)) & 1, bk = (x >> (n - 1 - k)) & 1;
    std::uint32_t y = x;
    if (bj != bk) y ^= (1u << (n - 1 - j)) | (1u << (n - 1 - k));
    s(y, x) = 1.0;
  }
  return s;
}

Mat dense_coherent(const NoiseModel& nm) {
  const int n = nm.n_qubits;
  const std::size_t d = std::size_t{1} << n;
  Mat h = Mat::Zero(d, d);
  std::size_t idx = 0;
  for (int j = 0; j < n; ++j)
    for (int k = j + 1; k < n; ++k) h += nm.alphas[idx++] * dense_swap(n, j, k);
  Mat zz = Mat::Zero(d, d);
  idx = 0;
  for (std::uint32_t z = 0; z < d; ++z)
    if (std::popcount(z) >= 2) zz(z, z) = nm.betas[idx++];
  const cplx i(0.0, 1.0);
  return taylor_exp(i * zz) * taylor_exp(i * h);
}

Mat dense_noise(const NoiseModel& nm) {
  const int n = nm.n_qubits;
  const std::size_t d = std::size_t{1} << n;
  // Depolarizing as Liouville diag(1, p, ..., p).
  Mat dep = Mat::Identity(d * d, d * d) * nm.p_depol;
  dep(0, 0) = 1.0;
  std::vector<Mat> damp{Mat::Identity(1, 1)};
  for (int q = 0; q < n; ++q) {
    const double g = nm.gammas[q];
    Mat k0 = Mat::Zero(2, 2), k1 = Mat::Zero(2, 2);
    k0(0, 0) = 1.0;
    k0(1, 1) = std::sqrt(1.0 - g);
    k1(0, 1) = std::sqrt(g);
    std::vector<Mat> next;
    for (const auto& a : damp)
      for (const auto& b : {k0, k1}) next.push_back(oracle::kron(a, b));
    damp = next;
  }
  return oracle::liouville(n, dense_coherent(nm)) * oracle::liouville(n, damp) * dep;
}

}  // namespace

TEST_CASE("trivial noise models", "[noise]") {
  for (int n = 1; n <= 3; ++n) {
    const NoiseModel id = NoiseModel::depolarizing_only(n, 1.0);
    CHECK(frobenius_distance(build_noise(id), Superoperator::identity(n)) < 1e-12);
    CHECK(true_fidelity(id) == Approx(1.0).margin(1e-14));
    const NoiseModel dep = NoiseModel::depolarizing_only(n, 0.9);
    const Superoperator s = build_noise(dep);
    CHECK(max_offdiagonal(s.mat()) < 1e-14);
    CHECK(s.mat()(0, 0).real() == Approx(1.0));
    for (std::size_t i = 1; i < s.dim(); ++i) CHECK(s.mat()(i, i).real() == Approx(0.9));
    const double d2 = std::pow(4.0, n);
    CHECK(true_fidelity(dep) == Approx((1 + (d2 - 1) * 0.9) / d2).margin(1e-14));
  }
}

TEST_CASE("sampled models match the dense construction", "[noise]") {
  for (int n = 1; n <= 3; ++n)
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const NoiseModel nm = NoiseModel::sample(n, seed);
      CHECK(nm.gammas.size() == std::size_t(n));
      CHECK(nm.alphas.size() == alpha_count(n));
      CHECK(nm.betas.size() == beta_count(n));
      CHECK((coherent_error_unitary(nm) - dense_coherent(nm)).norm() < 1e-12);
      CHECK((build_noise(nm).mat() - dense_noise(nm)).norm() < 1e-12);
    }
  CHECK(alpha_count(4) == 6);
  CHECK(beta_count(4) == 11);
  CHECK(beta_count(1) == 0);
}

TEST_CASE("full model on three qubits", "[noise]") {
  const NoiseModel nm = NoiseModel::sample(3, 17);
  const Superoperator s = build_noise(nm);
  CHECK(cptp_check(s).passes(1e-10));
  CHECK(true_fidelity(nm) < 1.0);
  CHECK(true_fidelity(nm) > 0.9);
  // Fidelity is invariant under twirling.
  CHECK(process_fidelity(twirl_exact(s, CnzmGroup(2, 2).group())) == Approx(true_fidelity(nm)).margin(1e-12));
}

TEST_CASE("noise models are CPTP across seeds", "[noise]") {
  for (int n = 1; n <= 4; ++n) {
    const int seeds = 1000;
    for (int s = 0; s < seeds; ++s) {
      const NoiseModel nm = NoiseModel::sample(n, derive_seed(1234, n, s));
      REQUIRE_NOTHROW(nm.validate());
      REQUIRE(cptp_check(build_noise(nm)).passes(1e-10));
    }
  }
}

TEST_CASE("sampling is deterministic and in range", "[noise]") {
  const NoiseModel a = NoiseModel::sample(3, 99), b = NoiseModel::sample(3, 99), c = NoiseModel::sample(3, 100);
  CHECK(a.gammas == b.gammas);
  CHECK(a.alphas == b.alphas);
  CHECK(a.betas == b.betas);
  CHECK(a.gammas != c.gammas);
  for (double g : a.gammas) CHECK((g >= 0.0 && g <= 0.02));
  for (double v : a.alphas) CHECK((v >= 0.0 && v <= 0.01));
  for (double v : a.betas) CHECK((v >= 0.0 && v <= 0.1));
  CHECK(a.spam == std::vector<double>(3, 0.02));
  CHECK(a.p_depol == 0.98);
}

TEST_CASE("validation", "[noise]") {
  NoiseModel nm = NoiseModel::sample(2, 1);
  nm.gammas[0] = 0.5;
  CHECK_THROWS_AS(nm.validate(), Error);
  CHECK_THROWS_AS(build_noise(nm), Error);
  nm = NoiseModel::sample(2, 1);
  nm.alphas.push_back(0.0);
  CHECK_THROWS_AS(nm.validate(), Error);
  nm = NoiseModel::sample(2, 1);
  nm.betas[0] = 0.2;
  CHECK_THROWS_AS(nm.validate(), Error);
  nm = NoiseModel::sample(2, 1);
  nm.p_depol = 1.5;
  CHECK_THROWS_AS(nm.validate(), Error);
  try {
    nm.validate();
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ParamOutOfRange);
  }
}

TEST_CASE("noisy initial states", "[noise]") {
  for (int n = 1; n <= 3; ++n) {
    const std::size_t d = std::size_t{1} << n;
    Mat zero = Mat::Zero(d, d), ones = Mat::Zero(d, d);
    zero(0, 0) = 1.0;
    ones(d - 1, d - 1) = 1.0;
    CHECK((noisy_initial_state(n, Basis::Z, 0.0) - zero).norm() == 0.0);
    CHECK((noisy_initial_state(n, Basis::Z, 1.0) - ones).norm() == 0.0);
    // |+...+><+...+|
    CHECK((noisy_initial_state(n, Basis::X, 0.0) - Mat::Constant(d, d, 1.0 / d)).norm() < 1e-14);
  }
  const Mat rho = noisy_initial_state(2, Basis::Z, 0.02);
  CHECK(rho(0, 0).real() == Approx(0.9604));
  CHECK(rho(1, 1).real() == Approx(0.0196));
  CHECK(rho(2, 2).real() == Approx(0.0196));
  CHECK(rho(3, 3).real() == Approx(0.0004));
  // X basis: Hadamards applied to the Z-basis state.
  const Mat h1 = (Mat(2, 2) << 1, 1, 1, -1).finished() / std::sqrt(2.0);
  const Mat h = oracle::kron(h1, h1);
  CHECK((noisy_initial_state(2, Basis::X, 0.02) - h * rho * h).norm() < 1e-14);
  const Mat mixed = noisy_initial_state(2, Basis::Z, std::vector<double>{0.1, 0.3});
  CHECK(mixed(1, 1).real() == Approx(0.9 * 0.3));
  CHECK(mixed(2, 2).real() == Approx(0.1 * 0.7));
  CHECK_THROWS_AS(noisy_initial_state(2, Basis::Z, std::vector<double>{0.1}), Error);
  CHECK_THROWS_AS(noisy_initial_state(2, Basis::Z, 1.5), Error);
}
