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

#include <cmath>
#include <set>

#include "oracles.hpp"
#include "twirlkit/channelgen.hpp"
#include "twirlkit/parallel.hpp"
#include "twirlkit/rb.hpp"
#include "twirlkit/twirl.hpp"

using namespace twirlkit;
using Catch::Approx;

namespace {

RBConfig make_config(int n, int m, RBGroupKind g, RBProcedure p, NoiseModel noise) {
  RBConfig c;
  c.n = n;
  c.m = m;
  c.group = g;
  c.procedure = p;
  c.depths = {1, 2, 4, 6, 8};
  c.seqs_per_depth = {10};
  c.noise = std::move(noise);
  c.seed = 7;
  return c;
}

std::vector<DecayPoint> synthetic(double a, double lambda, double b, const std::vector<int>& depths) {
  std::vector<DecayPoint> pts;
  for (int m : depths) pts.push_back({double(m), a * std::pow(lambda, m) + b});
  return pts;
}

const std::vector<int> kDepths = {3, 6, 9, 12, 15, 18, 21, 24, 27, 30};

// Expectation of the Pauli P_k (unnormalized) after s acts on rho, through Pauli coordinates.
double pauli_expectation(const Superoperator& s, const Eigen::MatrixXcd& rho, std::size_t k) {
  const int n = s.n_qubits();
  const double sd = std::sqrt(double(std::size_t{1} << n));
  Eigen::VectorXcd r(s.dim());
  for (std::size_t j = 0; j < s.dim(); ++j) r(j) = (oracle::pauli(n, j) * rho).trace() / sd;
  return ((s.mat() * r)(k) * sd).real();
}

}  // namespace

TEST_CASE("noiseless sequences compose to the identity", "[rb]") {
  struct Case {
    int n, m;
    RBGroupKind g;
    RBProcedure p;
  };
  for (const Case& c : {Case{1, 4, RBGroupKind::Optimal, RBProcedure::Ours},
                        Case{1, 4, RBGroupKind::OptimalS, RBProcedure::Ours},
                        Case{1, 4, RBGroupKind::Cxd, RBProcedure::CXDt},
                        Case{2, 2, RBGroupKind::OptimalS, RBProcedure::Ours},
                        Case{2, 2, RBGroupKind::Cxd, RBProcedure::CXDn}}) {
    const RBConfig cfg = make_config(c.n, c.m, c.g, c.p, NoiseModel::depolarizing_only(c.n + 1, 1.0));
    const Eigen::MatrixXcd u = oracle::cnzm(c.n, c.m);
    const RBEngine engine(cfg, c.g);
    for (std::uint64_t s = 0; s < 100; ++s) {
      std::mt19937_64 rng(s);
      const int depth = 1 + int(s % 5);
      const RBSequence seq = engine.gen_sequence(depth, rng);
      REQUIRE(seq.twirls.size() == std::size_t(2 * depth));
      // Dense product in time order.
      Eigen::MatrixXcd acc = Eigen::MatrixXcd::Identity(u.rows(), u.cols());
      for (int t = 0; t < depth; ++t) {
        acc = u * seq.twirls[2 * t].to_matrix() * acc;
        acc = u.adjoint() * seq.twirls[2 * t + 1].to_matrix() * acc;
      }
      acc = seq.inverse.to_matrix() * acc;
      REQUIRE(oracle::phase_distance(acc, Eigen::MatrixXcd::Identity(u.rows(), u.cols())) <= 1e-10);
      REQUIRE(oracle::phase_distance(ideal_sequence_unitary(seq, engine.target()), acc) <= 1e-10);
    }
  }
}

TEST_CASE("sequence inverses are group members", "[rb]") {
  const CnzmGroup g(1, 4);
  const RBConfig cfg = make_config(1, 4, RBGroupKind::Optimal, RBProcedure::Ours, NoiseModel::depolarizing_only(2, 1.0));
  for (std::uint64_t s = 0; s < 100; ++s) {
    std::mt19937_64 rng(s);
    const RBSequence seq = gen_sequence(cfg, 3, rng);
    CHECK(g.is_member(CruElement::parse(seq.inverse_label, 4)));
  }
}

TEST_CASE("noiseless expectations keep their initial values", "[rb]") {
  RBConfig cfg = make_config(2, 2, RBGroupKind::OptimalS, RBProcedure::Ours, NoiseModel::depolarizing_only(3, 1.0, 0.05));
  const RBEngine engine(cfg, cfg.group);
  std::mt19937_64 rng(4);
  const RBSequence seq = engine.gen_sequence(5, rng);
  for (Basis b : {Basis::Z, Basis::X}) {
    const auto e = engine.simulate(seq, b, 0, nullptr);
    for (std::uint32_t k = 0; k < 8; ++k)
      CHECK(e[k] == Approx(std::pow(0.9, std::popcount(k))).margin(1e-12));
  }
}

TEST_CASE("depolarizing decay matches hand propagation", "[rb]") {
  const double p = 0.95, s = 0.02;
  for (RBGroupKind g : {RBGroupKind::OptimalS, RBGroupKind::Cxd}) {
    const RBConfig cfg = make_config(1, 4, g, g == RBGroupKind::Cxd ? RBProcedure::CXDt : RBProcedure::Ours,
                                     NoiseModel::depolarizing_only(2, p, s));
    const RBEngine engine(cfg, g);
    std::mt19937_64 rng(5);
    for (int depth : {1, 3, 7}) {
      const RBSequence seq = engine.gen_sequence(depth, rng);
      for (Basis b : {Basis::Z, Basis::X}) {
        const auto e = engine.simulate(seq, b, 0, nullptr);
        for (std::uint32_t k = 0; k < 4; ++k) {
          // Depolarizing commutes with every unitary: 2m applications shrink the Bloch part.
          const double expect = std::pow(1.0 - 2.0 * s, std::popcount(k)) * std::pow(p, 2 * depth);
          CHECK(e[k] == Approx(k == 0 ? 1.0 : expect).margin(1e-12));
        }
        const auto direct = simulate_sequence(seq, engine.target(), engine.noise(),
                                              noisy_initial_state(2, b, s), b);
        for (std::size_t k = 0; k < 4; ++k) CHECK(direct[k] == Approx(e[k]).margin(1e-14));
      }
    }
  }
}

TEST_CASE("shot sampling", "[rb]") {
  const RBConfig cfg = make_config(1, 4, RBGroupKind::OptimalS, RBProcedure::Ours, NoiseModel::sample(2, 3));
  const RBEngine engine(cfg, cfg.group);
  std::mt19937_64 rng(6);
  const RBSequence seq = engine.gen_sequence(4, rng);
  CHECK_THROWS_AS(engine.simulate(seq, Basis::Z, 100, nullptr), Error);
  const auto exact = engine.simulate(seq, Basis::Z, 0, nullptr);
  const int shots = 200000;
  const auto est = engine.simulate(seq, Basis::Z, shots, &rng);
  CHECK(est[0] == 1.0);
  for (std::size_t k = 1; k < 4; ++k) CHECK(std::abs(est[k] - exact[k]) <= 5.0 / std::sqrt(double(shots)));
  // Pure |00>: every shot reads 00.
  const RBConfig clean = make_config(1, 4, RBGroupKind::OptimalS, RBProcedure::Ours, NoiseModel::depolarizing_only(2, 1.0));
  const RBEngine e2(clean, clean.group);
  for (double v : e2.simulate(seq, Basis::Z, 10, &rng)) CHECK(v == 1.0);
}

TEST_CASE("exponential fits recover exact data", "[rb][fit]") {
  const auto fit = fit_exponential(synthetic(0.9, 0.97, 0.0, kDepths), false);
  CHECK(fit.ok);
  CHECK(fit.A == Approx(0.9).margin(1e-9));
  CHECK(fit.lambda == Approx(0.97).margin(1e-9));
  CHECK(fit.B == 0.0);
  CHECK(fit.residual < 1e-18);
  const auto off = fit_exponential(synthetic(0.6, 0.95, 0.1, kDepths), true);
  CHECK(off.A == Approx(0.6).margin(1e-6));
  CHECK(off.lambda == Approx(0.95).margin(1e-6));
  CHECK(off.B == Approx(0.1).margin(1e-6));
  // Constant data: no decay.
  const auto flat = fit_exponential(synthetic(0.0, 0.5, 1.0, kDepths), true);
  CHECK(flat.lambda == Approx(1.0).margin(1e-12));
  CHECK(flat.A + flat.B == Approx(1.0).margin(1e-12));
  const auto flat2 = fit_exponential(synthetic(1.0, 1.0, 0.0, kDepths), false);
  CHECK(flat2.lambda == Approx(1.0).margin(1e-12));
}

TEST_CASE("exponential fits under 1% relative noise", "[rb][fit]") {
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> noise(0.0, 0.01);
  int good = 0;
  for (int t = 0; t < 1000; ++t) {
    auto pts = synthetic(0.9, 0.97, 0.0, kDepths);
    for (auto& p : pts) p.value *= 1.0 + noise(rng);
    const auto fit = fit_exponential(pts, false);
    good += std::abs(fit.lambda - 0.97) <= 1e-3;
  }
  CHECK(good >= 950);
}

TEST_CASE("exponential fit limits and errors", "[rb][fit]") {
  const auto grow = fit_exponential(synthetic(0.5, 1.1, 0.0, kDepths), false);
  CHECK(grow.lambda == Approx(kLambdaMax));
  std::vector<DecayPoint> two{{1, 0.9}, {2, 0.8}};
  CHECK_THROWS_AS(fit_exponential(two, false), Error);
  auto three = synthetic(0.9, 0.9, 0.1, {1, 2, 3});
  CHECK_THROWS_AS(fit_exponential(three, true), Error);
  auto bad = synthetic(0.9, 0.9, 0.0, kDepths);
  bad[2].value = std::nan("");
  CHECK_THROWS_AS(fit_exponential(bad, false), Error);
  for (const auto& f : {grow, fit_exponential(synthetic(0.7, 0.2, 0.0, kDepths), false)})
    CHECK((f.lambda > 0.0 && f.lambda <= kLambdaMax));
}

TEST_CASE("fidelity from decays", "[rb]") {
  for (int n = 1; n <= 4; ++n) {
    const std::size_t d = std::size_t{1} << n;
    std::vector<double> ones(d, 1.0);
    CHECK(fidelity_from_decays(ones, ones, n) == Approx(1.0).margin(1e-15));
    std::vector<double> dep(d, 0.93);
    dep[0] = 1.0;
    const double d2 = double(d * d);
    CHECK(fidelity_from_decays(dep, dep, n) == Approx((1 + (d2 - 1) * 0.93) / d2).margin(1e-14));
    CHECK(fidelity_from_blocks(0.93, 0.93, n) == Approx((1 + (d2 - 1) * 0.93) / d2).margin(1e-14));
  }
  std::vector<double> short_list(3, 1.0), four(4, 1.0);
  CHECK_THROWS_AS(fidelity_from_decays(short_list, four, 2), Error);

  // With exact Pauli fidelities of a twirled channel the formula is its process fidelity.
  const CnzmGroup cs(1, 4);
  for (std::uint64_t s = 0; s < 5; ++s) {
    const Superoperator tw = twirl_exact(random_cptp(2, 0.4, s).superop(), cs.group());
    std::vector<double> lz(4), lx(4);
    for (std::uint32_t k = 0; k < 4; ++k) {
      lz[k] = tw.mat()(PauliOp{2, 0, k}.index(), PauliOp{2, 0, k}.index()).real();
      lx[k] = tw.mat()(PauliOp{2, k, 0}.index(), PauliOp{2, k, 0}.index()).real();
    }
    CHECK(fidelity_from_decays(lz, lx, 2) == Approx(process_fidelity(tw)).margin(1e-10));
  }
}

TEST_CASE("survival-probability combination against the exact CNOT-dihedral twirl", "[rb]") {
  const auto group = cxd_enumerate(2, 3);
  for (std::uint64_t s = 0; s < 5; ++s) {
    const Superoperator chan = random_cptp(2, 0.3, 40 + s).superop();
    const Superoperator tw = twirl_over(chan, std::span<const AffinePhaseElement>(group));
    const double pz = tw.mat()(PauliOp::from_label("ZI").index(), PauliOp::from_label("ZI").index()).real();
    const double px = tw.mat()(PauliOp::from_label("XI").index(), PauliOp::from_label("XI").index()).real();
    CHECK(fidelity_from_blocks(pz, px, 2) == Approx(process_fidelity(chan)).margin(1e-10));
    // Survival of |00> and |++> under m applications is (1 + 3 p^m) / 4.
    Superoperator acc = Superoperator::identity(2);
    Eigen::MatrixXcd zero = Eigen::MatrixXcd::Zero(4, 4), plus = Eigen::MatrixXcd::Constant(4, 4, 0.25);
    zero(0, 0) = 1.0;
    for (int m = 1; m <= 6; ++m) {
      acc = tw * acc;
      Eigen::VectorXcd vz(16), vp(16);
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
          vz(i * 4 + j) = zero(i, j);
          vp(i * 4 + j) = plus(i, j);
        }
      const Eigen::VectorXcd oz = to_matrix_units(acc) * vz, op = to_matrix_units(acc) * vp;
      cplx sp = 0.0;
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) sp += plus(j, i) * op(i * 4 + j);
      CHECK(oz(0).real() == Approx((1 + 3 * std::pow(pz, m)) / 4).margin(1e-12));
      CHECK(sp.real() == Approx((1 + 3 * std::pow(px, m)) / 4).margin(1e-12));
    }
  }
}

TEST_CASE("depolarizing noise gives the closed-form fidelity", "[rb]") {
  const double p = 0.97;
  for (auto [n, m] : std::vector<std::pair<int, int>>{{1, 4}, {2, 2}}) {
    const int nq = n + 1;
    const double d2 = std::pow(4.0, nq);
    const double expect = (1 + (d2 - 1) * p) / d2;
    RBConfig cfg = make_config(n, m, RBGroupKind::OptimalS, RBProcedure::Ours,
                               NoiseModel::depolarizing_only(nq, p, 0.02));
    cfg.depths = {1, 3, 5, 7, 9};
    cfg.seqs_per_depth = {3};
    const auto res = run_comparison(cfg);
    REQUIRE(res.size() == 3);
    for (const auto& r : res) {
      CHECK(r.fits_ok);
      CHECK(r.fidelity_estimate == Approx(expect).margin(1e-6));
      CHECK(r.truth == Approx(expect).margin(1e-12));
    }
    CHECK(res[0].procedure == RBProcedure::Ours);
    CHECK(res[1].procedure == RBProcedure::CXDn);
    CHECK(res[2].procedure == RBProcedure::CXDt);
    CHECK(res[0].z.size() == std::size_t((1 << nq) - 1));
    CHECK(res[0].z.front().lambda_gate == Approx(p).margin(1e-9));
  }
}

TEST_CASE("zero noise gives unit fidelity", "[rb]") {
  RBConfig cfg = make_config(1, 4, RBGroupKind::OptimalS, RBProcedure::Ours, NoiseModel::depolarizing_only(2, 1.0));
  for (const auto& r : run_comparison(cfg)) {
    CHECK(r.fits_ok);
    CHECK(r.fidelity_estimate == Approx(1.0).margin(1e-12));
  }
}

TEST_CASE("decay rates are robust to state preparation errors", "[rb]") {
  const CnzmGroup cs(1, 4);
  const Superoperator chan = build_noise(NoiseModel::sample(2, 8));
  const Superoperator spam = random_cptp(2, 0.2, 99).superop();
  Eigen::MatrixXcd rho = noisy_initial_state(2, Basis::Z, 0.02);
  // Apply the extra preparation map in the matrix-unit picture.
  const Eigen::MatrixXcd mu = to_matrix_units(spam);
  Eigen::VectorXcd v(16);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) v(i * 4 + j) = rho(i, j);
  const Eigen::VectorXcd w = mu * v;
  Eigen::MatrixXcd rho2(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) rho2(i, j) = w(i * 4 + j);
  std::mt19937_64 rng(1);
  for (std::uint32_t k = 1; k < 4; ++k) {
    std::vector<DecayPoint> a, b;
    for (int m : kDepths) {
      const Superoperator s = sequence_channel(chan, cs.target(), cs.group(), 2 * m, SequenceMode::Expectation, rng);
      a.push_back({double(m), pauli_expectation(s, rho, PauliOp{2, 0, k}.index())});
      b.push_back({double(m), pauli_expectation(s, rho2, PauliOp{2, 0, k}.index())});
    }
    const auto fa = fit_exponential(a, false), fb = fit_exponential(b, false);
    CHECK(std::abs(fa.lambda - fb.lambda) <= 1e-6);
    CHECK(std::abs(fa.A - fb.A) > 1e-6);
  }
}

TEST_CASE("phase gates reduce the number of decay parameters", "[rb]") {
  auto distinct = [](const Superoperator& s) {
    std::vector<double> vals;
    for (std::size_t i = 1; i < s.dim(); ++i) {
      const double v = s.mat()(i, i).real();
      if (std::none_of(vals.begin(), vals.end(), [&](double u) { return std::abs(u - v) < 1e-9; }))
        vals.push_back(v);
    }
    return vals.size();
  };
  // X gates with Z and CZ phases, then the same with S in place of Z.
  for (int n : {1, 2}) {
    const int nq = n + 1;
    const std::size_t dn = std::size_t{1} << nq;
    const Superoperator chan = random_cptp(nq, 0.5, 70 + n).superop();
    CHECK(distinct(twirl_exact(chan, cz_family_group(nq, 1, false))) == 3 * (dn - 1));
    CHECK(distinct(twirl_exact(chan, cz_family_group(nq, 1, true))) == 2 * (dn - 1));
    CHECK(distinct(twirl_exact(chan, optimal_s_group(n, 2))) == 2 * (dn - 1));
  }
}

TEST_CASE("RB runs are deterministic and thread independent", "[rb]") {
  RBConfig cfg = make_config(1, 4, RBGroupKind::OptimalS, RBProcedure::Ours, NoiseModel::sample(2, 12));
  cfg.threads = 1;
  const auto a = run_comparison(cfg);
  cfg.threads = 3;
  const auto b = run_comparison(cfg);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].fidelity_estimate == b[i].fidelity_estimate);
    for (std::size_t k = 0; k < a[i].z.size(); ++k) CHECK(a[i].z[k].mean == b[i].z[k].mean);
  }
  cfg.seed = 8;
  CHECK(run_comparison(cfg)[0].fidelity_estimate != a[0].fidelity_estimate);
  cfg.shots = 500;
  cfg.seed = 7;
  const auto s1 = run_protocol(cfg), s2 = run_protocol(cfg);
  CHECK(s1.fidelity_estimate == s2.fidelity_estimate);
}

TEST_CASE("RB configuration validation", "[rb]") {
  const RBConfig good = make_config(1, 4, RBGroupKind::OptimalS, RBProcedure::Ours, NoiseModel::sample(2, 1));
  CHECK_NOTHROW(good.validate());
  auto expect_throw = [](RBConfig c) { CHECK_THROWS_AS(c.validate(), Error); };
  RBConfig c = good;
  c.depths = {1, 2};
  expect_throw(c);
  c = good;
  c.depths = {1, 3, 2};
  expect_throw(c);
  c = good;
  c.depths = {0, 1, 2};
  expect_throw(c);
  c = good;
  c.seqs_per_depth = {1, 2};
  expect_throw(c);
  c = good;
  c.procedure = RBProcedure::CXDn;
  expect_throw(c);
  c = good;
  c.group = RBGroupKind::Cxd;
  expect_throw(c);
  c = good;
  c.noise = NoiseModel::sample(3, 1);
  expect_throw(c);
  c = good;
  c.n = 5;
  c.noise.n_qubits = 6;
  try {
    c.validate();
    FAIL("expected TooLarge");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::TooLarge);
  }
  c = make_config(1, 4, RBGroupKind::Cxd, RBProcedure::CXDn, NoiseModel::sample(2, 1));
  c.depths = {1, 2, 3};
  expect_throw(c);
  c.depths = {1, 2, 3, 4};
  CHECK_NOTHROW(c.validate());
  c.kprime = 1;
  expect_throw(c);
  CHECK(parse_group_kind("optimal_S") == RBGroupKind::OptimalS);
  CHECK(parse_procedure("CXDn") == RBProcedure::CXDn);
  CHECK(std::string(to_string(RBGroupKind::Cxd)) == "cxd");
  CHECK_THROWS_AS(parse_procedure("ours"), Error);
}

TEST_CASE("sampled composite noise on CS is estimated closely", "[rb]") {
  RBConfig cfg = make_config(1, 4, RBGroupKind::OptimalS, RBProcedure::Ours, NoiseModel::sample(2, 5));
  cfg.depths = kDepths;
  cfg.seqs_per_depth = {100};
  for (const auto& r : run_comparison(cfg)) {
    CHECK(r.fits_ok);
    CHECK(std::abs(r.fidelity_estimate - r.truth) <= 1e-2);
  }
}
