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

#include "twirlkit/twirl.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>

#include "twirlkit/channelgen.hpp"
#include "twirlkit/parallel.hpp"

namespace twirlkit {

namespace {

void check_qubits(const Superoperator& chan, int n_qubits) {
  if (chan.n_qubits() != n_qubits)
    throw Error(ErrorKind::DimensionMismatch, "channel and group act on different qubit counts");
}

// Sum of g M g^dag over the gates, matrix-unit basis.
Eigen::MatrixXcd conjugation_sum(const Eigen::MatrixXcd& mu, std::span<const MonomialGate> gates) {
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(mu.rows(), mu.cols());
  Eigen::MatrixXcd tmp;
  for (const auto& g : gates) {
    conjugate_matrix_units(g, mu, tmp);
    acc += tmp;
  }
  return acc;
}

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  }
  void join(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

}  // namespace

Eigen::MatrixXcd tree_sum(std::vector<Eigen::MatrixXcd> parts) {
  if (parts.empty()) throw Error(ErrorKind::InvalidArgument, "nothing to sum");
  while (parts.size() > 1) {
    std::vector<Eigen::MatrixXcd> next;
    for (std::size_t i = 0; i + 1 < parts.size(); i += 2) next.push_back(parts[i] + parts[i + 1]);
    if (parts.size() % 2) next.push_back(std::move(parts.back()));
    parts = std::move(next);
  }
  return std::move(parts.front());
}

Superoperator twirl_exact(const Superoperator& chan, const SemidirectGroup& grp) {
  check_qubits(chan, grp.n_qubits());
  const int n = grp.n_qubits();
  const std::size_t d = std::size_t{1} << n;
  const std::size_t dim = d * d;
  const Eigen::MatrixXcd mu = to_matrix_units(chan);
  const std::vector<int> classes = grp.pair_classes();
  const auto& perms = grp.perm_parts();
  const double scale = 1.0 / static_cast<double>(perms.size());
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
  for (std::size_t c = 0; c < dim; ++c)
    for (std::size_t r = 0; r < dim; ++r) {
      if (classes[r] != classes[c]) continue;
      const cplx v = mu(r, c) * scale;
      for (std::uint32_t x : perms) {
        const std::size_t shift = (std::size_t(x) << n) | x;
        out(r ^ shift, c ^ shift) += v;
      }
    }
  return from_matrix_units(n, out);
}

Superoperator twirl_exact(const Superoperator& chan, const CnzmGroup& grp) {
  return twirl_exact(chan, grp.group());
}

Superoperator twirl_exact(const Superoperator& chan, const ClosureGroup& grp) {
  check_qubits(chan, grp.n_qubits());
  const int n = grp.n_qubits();
  const std::size_t d = std::size_t{1} << n;
  const std::size_t dim = d * d;
  const Eigen::MatrixXcd mu = to_matrix_units(chan);
  std::vector<const CruElement*> diagonal;
  std::map<std::uint32_t, const CruElement*> reps;
  for (const auto& e : grp.elements()) {
    if (e.x == 0) diagonal.push_back(&e);
    reps.try_emplace(e.x, &e);
  }
  const int m = grp.modulus();
  std::vector<cplx> roots(m);
  for (int t = 0; t < m; ++t) roots[t] = std::polar(1.0, 2.0 * std::numbers::pi * t / m);
  Eigen::MatrixXcd avg = Eigen::MatrixXcd::Zero(dim, dim);
  std::vector<int> e(dim);
  for (const CruElement* w : diagonal) {
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) e[i * d + j] = ((w->w[i] - w->w[j]) % m + m) % m;
    for (std::size_t c = 0; c < dim; ++c)
      for (std::size_t r = 0; r < dim; ++r) avg(r, c) += roots[(e[r] - e[c] + m) % m] * mu(r, c);
  }
  avg /= static_cast<double>(diagonal.size());
  std::vector<MonomialGate> cosets;
  for (const auto& [x, g] : reps) cosets.push_back(to_monomial(*g));
  Eigen::MatrixXcd out = conjugation_sum(avg, cosets) / static_cast<double>(cosets.size());
  return from_matrix_units(n, out);
}

Superoperator twirl_over(const Superoperator& chan, std::span<const MonomialGate> gates) {
  if (gates.empty()) throw Error(ErrorKind::InvalidArgument, "no gates to average over");
  check_qubits(chan, gates.front().n_qubits);
  Eigen::MatrixXcd mu = to_matrix_units(chan);
  return from_matrix_units(chan.n_qubits(),
                           conjugation_sum(mu, gates) / static_cast<double>(gates.size()));
}

Superoperator twirl_over(const Superoperator& chan, std::span<const CruElement> elements) {
  std::vector<MonomialGate> gates;
  gates.reserve(elements.size());
  for (const auto& e : elements) gates.push_back(to_monomial(e));
  return twirl_over(chan, gates);
}

Superoperator twirl_over(const Superoperator& chan, std::span<const AffinePhaseElement> elements) {
  std::vector<MonomialGate> gates;
  gates.reserve(elements.size());
  for (const auto& e : elements) gates.push_back(to_monomial(e));
  return twirl_over(chan, gates);
}

TwirlEstimate twirl_monte_carlo(const Superoperator& chan, const GateSampler& sampler,
                                std::size_t samples, std::mt19937_64& rng, int threads) {
  if (samples < 1) throw Error(ErrorKind::ParamOutOfRange, "need at least one sample");
  std::vector<MonomialGate> gates;
  gates.reserve(samples);
  for (std::size_t s = 0; s < samples; ++s) gates.push_back(sampler(rng));
  check_qubits(chan, gates.front().n_qubits);
  const Eigen::MatrixXcd mu = to_matrix_units(chan);
  const std::size_t batches = std::min<std::size_t>(64, samples);
  std::vector<Eigen::MatrixXcd> sums(batches);
  std::vector<std::size_t> sizes(batches);
  parallel_for(batches, threads, [&](std::size_t b) {
    const std::size_t lo = b * samples / batches;
    const std::size_t hi = (b + 1) * samples / batches;
    sizes[b] = hi - lo;
    sums[b] = conjugation_sum(mu, std::span<const MonomialGate>(gates).subspan(lo, hi - lo));
  });
  const int n = chan.n_qubits();
  std::vector<Eigen::MatrixXcd> batch_means(batches);
  for (std::size_t b = 0; b < batches; ++b)
    batch_means[b] = from_matrix_units(n, sums[b] / static_cast<double>(sizes[b])).mat();
  Eigen::MatrixXcd total = tree_sum(std::move(sums)) / static_cast<double>(samples);
  Superoperator mean = from_matrix_units(n, total);
  Eigen::MatrixXd var = Eigen::MatrixXd::Zero(mean.dim(), mean.dim());
  if (batches > 1) {
    for (const auto& bm : batch_means) var += (bm - mean.mat()).cwiseAbs2();
    var /= static_cast<double>(batches * (batches - 1));
  }
  return TwirlEstimate{std::move(mean), var.cwiseSqrt(), samples};
}

GateSampler sampler_for(const SemidirectGroup& grp) {
  return [grp](std::mt19937_64& rng) { return to_monomial(grp.sample(rng)); };
}

GateSampler sampler_for(const ClosureGroup& grp) {
  return [&grp](std::mt19937_64& rng) { return to_monomial(grp.sample(rng)); };
}

GateSampler cxd_sampler(int n_qubits, int kprime) {
  return [=](std::mt19937_64& rng) { return to_monomial(cxd_sample(n_qubits, kprime, rng)); };
}

BlockPartition normalized_partition(BlockPartition p) {
  for (auto& b : p) std::sort(b.begin(), b.end());
  std::sort(p.begin(), p.end());
  return p;
}

TwirlReport diagonality_report(const Superoperator& twirled, const BlockPartition& partition) {
  const Eigen::MatrixXcd& m = twirled.mat();
  const std::size_t dim = twirled.dim();
  std::vector<std::size_t> block_of(dim, dim);
  for (std::size_t b = 0; b < partition.size(); ++b)
    for (std::size_t i : partition[b]) {
      if (i >= dim || block_of[i] != dim)
        throw Error(ErrorKind::InvalidArgument, "blocks must partition the Pauli basis");
      block_of[i] = b;
    }
  if (std::find(block_of.begin(), block_of.end(), dim) != block_of.end())
    throw Error(ErrorKind::InvalidArgument, "blocks must cover the Pauli basis");
  TwirlReport rep{twirled, normalized_partition(partition)};
  for (std::size_t c = 0; c < dim; ++c)
    for (std::size_t r = 0; r < dim; ++r)
      if (block_of[r] != block_of[c]) rep.max_offblock = std::max(rep.max_offblock, std::abs(m(r, c)));
  for (const auto& block : partition) {
    cplx mean = 0.0;
    for (std::size_t i : block) mean += m(i, i);
    mean /= static_cast<double>(block.size());
    for (std::size_t i : block)
      for (std::size_t j : block) {
        cplx expect = i == j ? mean : cplx(0.0);
        rep.max_block_deviation = std::max(rep.max_block_deviation, std::abs(m(i, j) - expect));
      }
  }
  return rep;
}

TwirlReport diagonality_report(const Superoperator& twirled, double tol) {
  const Eigen::MatrixXcd& m = twirled.mat();
  const std::size_t dim = twirled.dim();
  UnionFind uf(dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = i + 1; j < dim; ++j)
      if (std::abs(m(i, j)) > tol || std::abs(m(j, i)) > tol ||
          std::abs(m(i, i) - m(j, j)) <= tol)
        uf.join(i, j);
  std::map<std::size_t, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < dim; ++i) groups[uf.find(i)].push_back(i);
  BlockPartition partition;
  for (auto& [root, members] : groups) partition.push_back(std::move(members));
  TwirlReport rep = diagonality_report(twirled, partition);
  rep.threshold = tol;
  return rep;
}

namespace {

template <class Twirler>
double max_pairwise_commutator(const Twirler& twirl, int n_qubits, int trials,
                               std::mt19937_64& rng) {
  std::vector<Superoperator> twirled;
  for (int t = 0; t < trials; ++t) {
    auto chan = random_cptp(n_qubits, 0.6, rng()).superop();
    twirled.push_back(twirl(chan));
  }
  double best = 0.0;
  for (std::size_t a = 0; a < twirled.size(); ++a)
    for (std::size_t b = a + 1; b < twirled.size(); ++b) {
      const auto& x = twirled[a].mat();
      const auto& y = twirled[b].mat();
      best = std::max(best, (x * y - y * x).norm());
    }
  return best;
}

double trace_fourth_power(const CruElement& w) {
  if (w.x != 0) return 0.0;
  cplx tr = 0.0;
  for (int v : w.w) tr += std::polar(1.0, 2.0 * std::numbers::pi * v / w.modulus);
  return std::pow(std::norm(tr), 2);
}

}  // namespace

MultiplicityEvidence multiplicity_free_evidence(const SemidirectGroup& grp, int trials,
                                                std::mt19937_64& rng) {
  MultiplicityEvidence ev;
  ev.trials = trials;
  ev.max_commutator = max_pairwise_commutator(
      [&](const Superoperator& c) { return twirl_exact(c, grp); }, grp.n_qubits(), trials, rng);
  const double perms = static_cast<double>(grp.perm_parts().size());
  if (grp.lattice_order() != 0 && grp.lattice_order() <= kEnumerationCap) {
    double acc = 0.0;
    auto lattice = grp.enumerate_lattice();
    for (const auto& w : lattice) acc += trace_fourth_power(w);
    ev.commutant_dimension = acc / (static_cast<double>(lattice.size()) * perms);
    ev.commutant_exact = true;
  } else {
    const int draws = 1 << 16;
    double acc = 0.0;
    for (int s = 0; s < draws; ++s) {
      CruElement g = grp.sample(rng);
      g.x = 0;
      acc += trace_fourth_power(g);
    }
    ev.commutant_dimension = acc / (draws * perms);
  }
  return ev;
}

MultiplicityEvidence multiplicity_free_evidence(const ClosureGroup& grp, int trials,
                                                std::mt19937_64& rng) {
  MultiplicityEvidence ev;
  ev.trials = trials;
  ev.max_commutator = max_pairwise_commutator(
      [&](const Superoperator& c) { return twirl_exact(c, grp); }, grp.n_qubits(), trials, rng);
  double acc = 0.0;
  for (const auto& g : grp.elements()) acc += trace_fourth_power(g);
  ev.commutant_dimension = acc / static_cast<double>(grp.size());
  ev.commutant_exact = true;
  return ev;
}

double commutation_with_target(const Superoperator& twirled, const Superoperator& target) {
  return (target.mat() * twirled.mat() - twirled.mat() * target.mat()).norm();
}

Superoperator pauli_character_projector(const PauliOp& sigma) {
  const int n = sigma.n_qubits;
  const std::size_t dim = std::size_t{1} << (2 * n);
  // Each P(.)P is diagonal in the Pauli-Liouville basis with entries (-1)^{<P,Q>}.
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(dim);
  for (std::size_t p = 0; p < dim; ++p) {
    const PauliOp pp = PauliOp::from_index(n, p);
    const double chi = commutation_symbol(pp, sigma) ? -1.0 : 1.0;
    for (std::size_t q = 0; q < dim; ++q)
      diag(q) += commutation_symbol(pp, PauliOp::from_index(n, q)) ? -chi : chi;
  }
  diag /= static_cast<double>(dim);
  return Superoperator(n, diag.cast<cplx>().asDiagonal());
}

Superoperator target_superop(const CruElement& target) {
  return monomial_superop(to_monomial(target));
}

namespace {

std::pair<CruElement, int> promote(const CruElement& target, int group_modulus) {
  const int m = std::lcm(target.modulus, group_modulus);
  return {target.with_modulus(m), m};
}

}  // namespace

Superoperator sequence_channel(const Superoperator& chan, const CruElement& target,
                               const SemidirectGroup& grp, int depth, SequenceMode mode,
                               std::mt19937_64& rng) {
  if (depth < 1) throw Error(ErrorKind::ParamOutOfRange, "depth must be >= 1");
  check_qubits(chan, grp.n_qubits());
  const Superoperator u = target_superop(target);
  if (mode == SequenceMode::Expectation) {
    const Superoperator step = u * twirl_exact(chan, grp);
    Superoperator acc = Superoperator::identity(chan.n_qubits());
    for (int i = 0; i < depth; ++i) acc = u.adjoint() * acc * step;
    return acc;
  }
  auto [ut, m] = promote(target, grp.modulus());
  const int n = chan.n_qubits();
  const Eigen::MatrixXcd noisy_u = to_matrix_units(u) * to_matrix_units(chan);
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Identity(noisy_u.rows(), noisy_u.cols());
  CruElement product = CruElement::identity(n, m);
  for (int i = 0; i < depth; ++i) {
    CruElement g = grp.sample(rng).with_modulus(m);
    acc = noisy_u * monomial_matrix_units(to_monomial(g)) * acc;
    product = cru_multiply(ut, cru_multiply(g, product));
  }
  acc = monomial_matrix_units(to_monomial(cru_inverse(product))) * acc;
  return from_matrix_units(n, acc);
}

LowerBoundCheck fidelity_lower_bound_check(const Superoperator& chan, const CruElement& target,
                                           const SemidirectGroup& grp, int m, double tol) {
  if (m < 1) throw Error(ErrorKind::ParamOutOfRange, "m must be >= 1");
  const Superoperator u = target_superop(target);
  const Superoperator lg = twirl_exact(chan, grp);
  const Superoperator step = u * lg;
  Superoperator mm = Superoperator::identity(chan.n_qubits());
  for (int i = 0; i < m; ++i) mm = u.adjoint() * mm * step;
  LowerBoundCheck out;
  out.max_offdiagonal = max_offdiagonal(mm.mat());
  if (out.max_offdiagonal > tol)
    throw Error(ErrorKind::Numerical, "sequence channel is not diagonal in the Pauli basis");
  for (std::size_t i = 0; i < mm.dim(); ++i) {
    const cplx v = mm.mat()(i, i);
    if (std::abs(v.imag()) > tol || v.real() <= 0.0)
      throw Error(ErrorKind::Numerical,
                  "diagonal entry " + std::to_string(i) + " has no real positive m-th root");
    out.lhs += std::pow(v.real(), 1.0 / m);
  }
  out.rhs = chan.mat().trace().real();
  return out;
}

}  // namespace twirlkit
