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

#include "twirlkit/rb.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <numeric>

#include "twirlkit/errors.hpp"
#include "twirlkit/parallel.hpp"

namespace twirlkit {

namespace {

constexpr int kMaxQubits = 5;

void apply_monomial(const MonomialGate& g, Eigen::MatrixXcd& v, Eigen::MatrixXcd& tmp) {
  const std::size_t d = g.image.size();
  tmp.resize(v.rows(), v.cols());
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      const cplx c = g.phase[i] * std::conj(g.phase[j]);
      tmp.row(g.image[i] * d + g.image[j]) = c * v.row(i * d + j);
    }
  v.swap(tmp);
}

Eigen::VectorXcd vec_state(const DenseOperator& rho) {
  const Eigen::Index d = rho.rows();
  Eigen::VectorXcd v(d * d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) v(i * d + j) = rho(i, j);
  return v;
}

// Runs the sequence on every column of v (vectorized states).
void evolve(const RBSequence& seq, const Eigen::MatrixXcd& noisy_u,
            const Eigen::MatrixXcd& noisy_udag, Eigen::MatrixXcd& v) {
  if (seq.twirls.size() != static_cast<std::size_t>(2 * seq.depth))
    throw Error(ErrorKind::DimensionMismatch, "sequence needs 2*depth twirling gates");
  Eigen::MatrixXcd tmp(v.rows(), v.cols());
  for (int t = 0; t < seq.depth; ++t) {
    apply_monomial(seq.twirls[2 * t], v, tmp);
    tmp.noalias() = noisy_u * v;
    v.swap(tmp);
    apply_monomial(seq.twirls[2 * t + 1], v, tmp);
    tmp.noalias() = noisy_udag * v;
    v.swap(tmp);
  }
  apply_monomial(seq.inverse, v, tmp);
}

std::vector<double> expectations(const Eigen::VectorXcd& v, std::size_t d, Basis basis) {
  std::vector<double> e(d, 0.0);
  for (std::uint32_t k = 0; k < d; ++k) {
    double s = 0.0;
    for (std::uint32_t j = 0; j < d; ++j) {
      if (basis == Basis::Z)
        s += (std::popcount(k & j) & 1 ? -1.0 : 1.0) * v(j * d + j).real();
      else
        s += v((j ^ k) * d + j).real();
    }
    e[k] = s;
  }
  return e;
}

// Replaces exact expectations with estimates from `shots` outcomes.
std::vector<double> sample_shots(const std::vector<double>& e, int shots, std::mt19937_64& rng) {
  const std::size_t d = e.size();
  std::vector<double> p(d, 0.0);
  for (std::uint32_t b = 0; b < d; ++b) {
    double s = 0.0;
    for (std::uint32_t k = 0; k < d; ++k) s += (std::popcount(b & k) & 1 ? -1.0 : 1.0) * e[k];
    p[b] = std::max(0.0, s / static_cast<double>(d));
  }
  std::discrete_distribution<std::uint32_t> dist(p.begin(), p.end());
  std::vector<double> counts(d, 0.0);
  for (int s = 0; s < shots; ++s) counts[dist(rng)] += 1.0;
  std::vector<double> out(d, 0.0);
  for (std::uint32_t k = 0; k < d; ++k) {
    double s = 0.0;
    for (std::uint32_t b = 0; b < d; ++b)
      s += (std::popcount(b & k) & 1 ? -1.0 : 1.0) * counts[b];
    out[k] = s / shots;
  }
  return out;
}

std::vector<double> finish(const Eigen::VectorXcd& v, std::size_t d, Basis basis, int shots,
                           std::mt19937_64* rng) {
  auto e = expectations(v, d, basis);
  if (shots > 0) {
    if (!rng) throw Error(ErrorKind::InvalidArgument, "shot sampling needs an rng");
    e = sample_shots(e, shots, *rng);
  }
  return e;
}

struct Moments {
  std::vector<double> mean, se;
};

Moments moments(const std::vector<std::vector<double>>& rows) {
  const std::size_t k = rows.size(), w = rows.front().size();
  Moments out{std::vector<double>(w, 0.0), std::vector<double>(w, 0.0)};
  for (const auto& r : rows)
    for (std::size_t i = 0; i < w; ++i) out.mean[i] += r[i];
  for (auto& m : out.mean) m /= static_cast<double>(k);
  if (k > 1) {
    for (const auto& r : rows)
      for (std::size_t i = 0; i < w; ++i) out.se[i] += (r[i] - out.mean[i]) * (r[i] - out.mean[i]);
    for (auto& s : out.se) s = std::sqrt(s / static_cast<double>(k - 1) / static_cast<double>(k));
  }
  return out;
}

bool compatible(RBProcedure p, RBGroupKind g) {
  return (p == RBProcedure::Ours) == (g != RBGroupKind::Cxd);
}

}  // namespace

const char* to_string(RBGroupKind g) {
  switch (g) {
    case RBGroupKind::Optimal: return "optimal";
    case RBGroupKind::OptimalS: return "optimal_S";
    case RBGroupKind::Cxd: return "cxd";
  }
  return "?";
}

const char* to_string(RBProcedure p) {
  switch (p) {
    case RBProcedure::Ours: return "OURS";
    case RBProcedure::CXDn: return "CXDn";
    case RBProcedure::CXDt: return "CXDt";
  }
  return "?";
}

RBGroupKind parse_group_kind(const std::string& s) {
  if (s == "optimal") return RBGroupKind::Optimal;
  if (s == "optimal_S") return RBGroupKind::OptimalS;
  if (s == "cxd") return RBGroupKind::Cxd;
  throw Error(ErrorKind::InvalidArgument, "unknown group '" + s + "'");
}

RBProcedure parse_procedure(const std::string& s) {
  if (s == "OURS") return RBProcedure::Ours;
  if (s == "CXDn") return RBProcedure::CXDn;
  if (s == "CXDt") return RBProcedure::CXDt;
  throw Error(ErrorKind::InvalidArgument, "unknown procedure '" + s + "'");
}

int RBConfig::sequences_at(std::size_t i) const {
  return seqs_per_depth.size() == 1 ? seqs_per_depth.front() : seqs_per_depth.at(i);
}

void RBConfig::validate() const {
  if (n < 1 || m < 2) throw Error(ErrorKind::ParamOutOfRange, "target needs n >= 1, m >= 2");
  if (n_qubits() > kMaxQubits)
    throw Error(ErrorKind::TooLarge, "dense simulation is limited to 5 qubits");
  if (!compatible(procedure, group))
    throw Error(ErrorKind::InvalidArgument,
                std::string("procedure ") + to_string(procedure) + " cannot use group " +
                    to_string(group));
  const std::size_t min_depths = procedure == RBProcedure::CXDn ? 4 : 3;
  if (depths.size() < min_depths)
    throw Error(ErrorKind::InvalidArgument,
                "need at least " + std::to_string(min_depths) + " depths");
  for (std::size_t i = 0; i < depths.size(); ++i) {
    if (depths[i] < 1) throw Error(ErrorKind::ParamOutOfRange, "depths must be positive");
    if (i > 0 && depths[i] <= depths[i - 1])
      throw Error(ErrorKind::InvalidArgument, "depths must be strictly increasing");
  }
  if (seqs_per_depth.size() != 1 && seqs_per_depth.size() != depths.size())
    throw Error(ErrorKind::DimensionMismatch, "seqs_per_depth needs one entry or one per depth");
  for (int k : seqs_per_depth)
    if (k < 1) throw Error(ErrorKind::ParamOutOfRange, "seqs_per_depth entries must be >= 1");
  if (shots < 0) throw Error(ErrorKind::ParamOutOfRange, "shots must be >= 0");
  if (noise.n_qubits != n_qubits())
    throw Error(ErrorKind::DimensionMismatch, "noise model acts on the wrong number of qubits");
  if (!(noise.p_depol >= 0.0 && noise.p_depol <= 1.0))
    throw Error(ErrorKind::ParamOutOfRange, "p_depol outside [0,1]");
  if (group == RBGroupKind::Cxd && kprime != 0 && ((1 << kprime) % m) != 0)
    throw Error(ErrorKind::ParamOutOfRange, "m must divide 2^kprime");
}

RBEngine::RBEngine(const RBConfig& cfg, RBGroupKind group)
    : n_qubits_(cfg.n_qubits()), kind_(group) {
  if (group == RBGroupKind::Cxd) {
    kprime_ = cfg.kprime > 0 ? cfg.kprime : default_kprime(cfg.n, cfg.m);
    cxd_target_ = cxd_target(cfg.n, cfg.m, kprime_);
    target_gate_ = to_monomial(cxd_target_);
  } else {
    CnzmGroup base(cfg.n, cfg.m);
    cru_group_ = group == RBGroupKind::Optimal ? base.group() : optimal_s_group(cfg.n, cfg.m);
    cru_target_ =
        base.target().with_modulus(std::lcm(cfg.m, cru_group_->modulus()));
    target_gate_ = to_monomial(cru_target_);
  }
  noise_ = build_noise(cfg.noise);
  spam_ = cfg.noise.spam.empty() ? std::vector<double>(n_qubits_, 0.0) : cfg.noise.spam;
  const Eigen::MatrixXcd lam = to_matrix_units(noise_);
  noisy_u_ = monomial_matrix_units(target_gate_) * lam;
  noisy_udag_ = monomial_matrix_units(target_gate_.inverse()) * lam;
}

RBSequence RBEngine::gen_sequence(int depth, std::mt19937_64& rng) const {
  if (depth < 1) throw Error(ErrorKind::ParamOutOfRange, "depth must be >= 1");
  RBSequence seq;
  seq.depth = depth;
  seq.twirls.reserve(2 * depth);
  if (cru_group_) {
    const int mod = cru_target_.modulus;
    const CruElement udag = cru_inverse(cru_target_);
    CruElement prod = CruElement::identity(n_qubits_, mod);
    for (int t = 0; t < depth; ++t) {
      CruElement g1 = cru_group_->sample(rng).with_modulus(mod);
      CruElement g2 = cru_group_->sample(rng).with_modulus(mod);
      seq.twirls.push_back(to_monomial(g1));
      seq.twirls.push_back(to_monomial(g2));
      prod = cru_multiply(udag, cru_multiply(g2, cru_multiply(cru_target_, cru_multiply(g1, prod))));
    }
    const CruElement inv = cru_inverse(prod);
    seq.inverse = to_monomial(inv);
    seq.inverse_label = inv.to_string();
  } else {
    const AffinePhaseElement udag = cxd_inverse(cxd_target_);
    AffinePhaseElement prod = AffinePhaseElement::identity(n_qubits_, kprime_);
    for (int t = 0; t < depth; ++t) {
      AffinePhaseElement g1 = cxd_sample(n_qubits_, kprime_, rng);
      AffinePhaseElement g2 = cxd_sample(n_qubits_, kprime_, rng);
      seq.twirls.push_back(to_monomial(g1));
      seq.twirls.push_back(to_monomial(g2));
      prod = cxd_multiply(udag, cxd_multiply(g2, cxd_multiply(cxd_target_, cxd_multiply(g1, prod))));
    }
    const AffinePhaseElement inv = cxd_inverse(prod);
    seq.inverse = to_monomial(inv);
    seq.inverse_label = inv.to_string();
  }
  return seq;
}

std::vector<double> RBEngine::simulate(const RBSequence& seq, Basis basis, int shots,
                                       std::mt19937_64* rng) const {
  return simulate(seq, noisy_initial_state(n_qubits_, basis, spam_), basis, shots, rng);
}

std::vector<double> RBEngine::simulate(const RBSequence& seq, const DenseOperator& rho0,
                                       Basis basis, int shots, std::mt19937_64* rng) const {
  const std::size_t d = std::size_t{1} << n_qubits_;
  if (static_cast<std::size_t>(rho0.rows()) != d || rho0.cols() != rho0.rows())
    throw Error(ErrorKind::DimensionMismatch, "initial state has the wrong dimension");
  Eigen::MatrixXcd v = vec_state(rho0);
  evolve(seq, noisy_u_, noisy_udag_, v);
  return finish(v.col(0), d, basis, shots, rng);
}

void RBEngine::evolve_states(const RBSequence& seq, Eigen::MatrixXcd& v) const {
  evolve(seq, noisy_u_, noisy_udag_, v);
}

RBSequence gen_sequence(const RBConfig& cfg, int depth, std::mt19937_64& rng) {
  cfg.validate();
  return RBEngine(cfg, cfg.group).gen_sequence(depth, rng);
}

std::vector<double> simulate_sequence(const RBSequence& seq, const MonomialGate& target,
                                      const Superoperator& noise, const DenseOperator& rho0,
                                      Basis basis, int shots, std::mt19937_64* rng) {
  const std::size_t d = target.image.size();
  if (noise.dim() != d * d || static_cast<std::size_t>(rho0.rows()) != d)
    throw Error(ErrorKind::DimensionMismatch, "sequence, noise and state dimensions differ");
  const Eigen::MatrixXcd lam = to_matrix_units(noise);
  const Eigen::MatrixXcd nu = monomial_matrix_units(target) * lam;
  const Eigen::MatrixXcd nud = monomial_matrix_units(target.inverse()) * lam;
  Eigen::MatrixXcd v = vec_state(rho0);
  evolve(seq, nu, nud, v);
  return finish(v.col(0), d, basis, shots, rng);
}

DenseOperator ideal_sequence_unitary(const RBSequence& seq, const MonomialGate& target) {
  const MonomialGate udag = target.inverse();
  MonomialGate acc = MonomialGate::identity(target.n_qubits);
  for (int t = 0; t < seq.depth; ++t) {
    acc = target.compose(seq.twirls[2 * t].compose(acc));
    acc = udag.compose(seq.twirls[2 * t + 1].compose(acc));
  }
  return seq.inverse.compose(acc).to_matrix();
}

double fidelity_from_decays(std::span<const double> lz, std::span<const double> lx,
                            int n_qubits) {
  const std::size_t d = std::size_t{1} << n_qubits;
  if (lz.size() != d || lx.size() != d)
    throw Error(ErrorKind::DimensionMismatch, "need 2^N decays per setting");
  const double sz = std::accumulate(lz.begin(), lz.end(), 0.0);
  const double sx = std::accumulate(lx.begin(), lx.end(), 0.0);
  const double dd = static_cast<double>(d);
  return (sz + dd * (sx - 1.0)) / (dd * dd);
}

double fidelity_from_blocks(double pz, double px, int n_qubits) {
  const double d = std::ldexp(1.0, n_qubits);
  return (1.0 + (d - 1.0) * pz + (d * d - d) * px) / (d * d);
}

RBData simulate_experiment(const RBConfig& cfg, RBGroupKind group) {
  RBConfig local = cfg;
  local.group = group;
  local.procedure = group == RBGroupKind::Cxd ? RBProcedure::CXDt : RBProcedure::Ours;
  local.validate();
  const RBEngine engine(local, group);
  const int nq = local.n_qubits();
  const std::size_t d = std::size_t{1} << nq;
  const Eigen::VectorXcd rho_z = vec_state(noisy_initial_state(nq, Basis::Z, engine.spam()));
  const Eigen::VectorXcd rho_x = vec_state(noisy_initial_state(nq, Basis::X, engine.spam()));

  struct Job {
    std::size_t depth_index;
    int idx;
  };
  std::vector<Job> jobs;
  for (std::size_t i = 0; i < local.depths.size(); ++i)
    for (int k = 0; k < local.sequences_at(i); ++k) jobs.push_back({i, k});
  std::vector<std::vector<double>> ez(jobs.size()), ex(jobs.size());
  parallel_for(jobs.size(), local.threads, [&](std::size_t j) {
    const int depth = local.depths[jobs[j].depth_index];
    std::mt19937_64 rng(derive_seed(local.seed, static_cast<std::uint64_t>(group) + 1,
                                    static_cast<std::uint64_t>(depth),
                                    static_cast<std::uint64_t>(jobs[j].idx)));
    const RBSequence seq = engine.gen_sequence(depth, rng);
    Eigen::MatrixXcd v(d * d, 2);
    v.col(0) = rho_z;
    v.col(1) = rho_x;
    engine.evolve_states(seq, v);
    ez[j] = finish(v.col(0), d, Basis::Z, local.shots, &rng);
    ex[j] = finish(v.col(1), d, Basis::X, local.shots, &rng);
  });

  RBData data;
  data.group = group;
  data.depths = local.depths;
  std::size_t pos = 0;
  for (std::size_t i = 0; i < local.depths.size(); ++i) {
    const std::size_t k = static_cast<std::size_t>(local.sequences_at(i));
    std::vector<std::vector<double>> rz(ez.begin() + pos, ez.begin() + pos + k);
    std::vector<std::vector<double>> rx(ex.begin() + pos, ex.begin() + pos + k);
    pos += k;
    auto survival = [d](const std::vector<std::vector<double>>& rows) {
      std::vector<std::vector<double>> out;
      for (const auto& r : rows)
        out.push_back({std::accumulate(r.begin(), r.end(), 0.0) / static_cast<double>(d)});
      return moments(out);
    };
    Moments mz = moments(rz), mx = moments(rx), sz = survival(rz), sx = survival(rx);
    data.mean_z.push_back(mz.mean);
    data.se_z.push_back(mz.se);
    data.mean_x.push_back(mx.mean);
    data.se_x.push_back(mx.se);
    data.surv_z.push_back(sz.mean[0]);
    data.surv_z_se.push_back(sz.se[0]);
    data.surv_x.push_back(sx.mean[0]);
    data.surv_x_se.push_back(sx.se[0]);
  }
  return data;
}

RBResult estimate(const RBConfig& cfg, RBProcedure procedure, const RBData& data) {
  if (!compatible(procedure, data.group))
    throw Error(ErrorKind::InvalidArgument, "simulation data come from the wrong group");
  const int nq = cfg.n_qubits();
  const std::size_t d = std::size_t{1} << nq;
  RBResult res;
  res.procedure = procedure;
  res.group = data.group;
  res.depths = data.depths;
  res.config = cfg;
  res.config.procedure = procedure;
  res.config.group = data.group;
  res.truth = true_fidelity(cfg.noise);

  auto fit_series = [&](ObservableSeries& s, bool offset) {
    std::vector<DecayPoint> pts;
    for (std::size_t i = 0; i < data.depths.size(); ++i) pts.push_back({double(data.depths[i]), s.mean[i]});
    try {
      s.fit = fit_exponential(pts, offset);
      s.lambda_gate = std::sqrt(s.fit.lambda);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::FitDiverged) throw;
      s.fit = DecayFit{};
      s.fit.ok = false;
      s.lambda_gate = std::numeric_limits<double>::quiet_NaN();
      res.fits_ok = false;
    }
    s.fit.observable = s.label;
  };

  if (procedure == RBProcedure::CXDn) {
    ObservableSeries sz{"Z:survival", data.surv_z, data.surv_z_se, {}, 0.0};
    ObservableSeries sx{"X:survival", data.surv_x, data.surv_x_se, {}, 0.0};
    fit_series(sz, true);
    fit_series(sx, true);
    res.fidelity_estimate = res.fits_ok ? fidelity_from_blocks(sz.lambda_gate, sx.lambda_gate, nq)
                                        : std::numeric_limits<double>::quiet_NaN();
    res.z.push_back(std::move(sz));
    res.x.push_back(std::move(sx));
    return res;
  }

  std::vector<double> lz(d, 1.0), lx(d, 1.0);
  for (std::uint32_t k = 1; k < d; ++k) {
    ObservableSeries sz, sx;
    sz.label = "Z:" + PauliOp{nq, 0, k}.label();
    sx.label = "X:" + PauliOp{nq, k, 0}.label();
    for (std::size_t i = 0; i < data.depths.size(); ++i) {
      sz.mean.push_back(data.mean_z[i][k]);
      sz.stderr_.push_back(data.se_z[i][k]);
      sx.mean.push_back(data.mean_x[i][k]);
      sx.stderr_.push_back(data.se_x[i][k]);
    }
    fit_series(sz, false);
    fit_series(sx, false);
    lz[k] = sz.lambda_gate;
    lx[k] = sx.lambda_gate;
    res.z.push_back(std::move(sz));
    res.x.push_back(std::move(sx));
  }
  res.fidelity_estimate = res.fits_ok ? fidelity_from_decays(lz, lx, nq)
                                      : std::numeric_limits<double>::quiet_NaN();
  return res;
}

RBResult run_protocol(const RBConfig& cfg) {
  cfg.validate();
  return estimate(cfg, cfg.procedure, simulate_experiment(cfg, cfg.group));
}

std::vector<RBResult> run_comparison(const RBConfig& cfg) {
  RBConfig ours = cfg;
  ours.procedure = RBProcedure::Ours;
  if (ours.group == RBGroupKind::Cxd) ours.group = RBGroupKind::OptimalS;
  ours.validate();
  RBConfig cxd = cfg;
  cxd.procedure = RBProcedure::CXDn;
  cxd.group = RBGroupKind::Cxd;
  cxd.validate();
  const RBData d_ours = simulate_experiment(ours, ours.group);
  const RBData d_cxd = simulate_experiment(cxd, RBGroupKind::Cxd);
  return {estimate(ours, RBProcedure::Ours, d_ours), estimate(cxd, RBProcedure::CXDn, d_cxd),
          estimate(cxd, RBProcedure::CXDt, d_cxd)};
}

}  // namespace twirlkit
