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

#include "twirlkit/rc.hpp"

#include <numeric>

#include "twirlkit/errors.hpp"
#include "twirlkit/monomial.hpp"
#include "twirlkit/parallel.hpp"

namespace twirlkit {

namespace {

int common_modulus(const std::vector<CruElement>& targets, int group_modulus) {
  int m = group_modulus;
  for (const auto& t : targets) m = std::lcm(m, t.modulus);
  return m;
}

void check_targets(const std::vector<CruElement>& targets, const SemidirectGroup& grp) {
  if (targets.empty()) throw Error(ErrorKind::InvalidArgument, "circuit has no gates");
  for (const auto& t : targets)
    if (t.n_qubits != grp.n_qubits())
      throw Error(ErrorKind::DimensionMismatch, "targets and group act on different registers");
}

// Reduces a canonical phase vector to a Z string if it is one.
bool is_z_string(const CruElement& r) {
  if (r.x != 0) return false;
  const int m = r.modulus;
  if (m % 2) return std::all_of(r.w.begin(), r.w.end(), [](int v) { return v == 0; });
  const int half = m / 2;
  std::uint32_t c = 0;
  for (int q = 0; q < r.n_qubits; ++q) {
    const std::uint32_t bit = qubit_mask(r.n_qubits, q);
    if (r.w[bit] == half) c |= bit;
    else if (r.w[bit] != 0) return false;
  }
  for (std::size_t j = 0; j < r.w.size(); ++j)
    if (r.w[j] != (std::popcount(c & static_cast<std::uint32_t>(j)) & 1 ? half : 0)) return false;
  return true;
}

}  // namespace

CruElement cnzm_on(int n_register, int n, int m, const std::vector<int>& qubits) {
  if (static_cast<int>(qubits.size()) != n + 1)
    throw Error(ErrorKind::DimensionMismatch, "C^nZ_m acts on n+1 qubits");
  std::uint32_t mask = 0;
  for (int q : qubits) {
    if (q < 0 || q >= n_register)
      throw Error(ErrorKind::ParamOutOfRange, "qubit index outside the register");
    const std::uint32_t b = qubit_mask(n_register, q);
    if (mask & b) throw Error(ErrorKind::InvalidArgument, "repeated qubit");
    mask |= b;
  }
  return CruElement::make(n_register, m, 0, controlled_phase_vector(n_register, mask, 1, m));
}

std::vector<CruElement> CompiledCircuit::dressed() const {
  std::vector<CruElement> out;
  for (std::size_t i = 0; i < original.size(); ++i) {
    out.push_back(dressing[i]);
    out.push_back(original[i].with_modulus(dressing[i].modulus));
  }
  out.push_back(dressing.back());
  return out;
}

bool in_pauli_dressing_set(const CruElement& v, const CruElement& u) {
  const int m = std::lcm(std::lcm(v.modulus, u.modulus), 2);
  const CruElement vv = v.with_modulus(m), uu = u.with_modulus(m);
  const CruElement udag = cru_inverse(uu);
  const std::uint32_t d = 1u << v.n_qubits;
  for (std::uint32_t b = 0; b < d; ++b) {
    const CruElement xb = CruElement::permutation(v.n_qubits, m, b);
    const CruElement xa = CruElement::permutation(v.n_qubits, m, vv.x ^ b);
    // Candidate X_a U X_b U^dag; the remainder must be a Z string.
    const CruElement core = cru_multiply(xa, cru_multiply(uu, cru_multiply(xb, udag)));
    if (core.x != vv.x) continue;
    if (is_z_string(cru_multiply(cru_inverse(core), vv))) return true;
  }
  return false;
}

CompiledCircuit compile(const std::vector<CruElement>& targets, const SemidirectGroup& grp,
                        std::mt19937_64& rng, DressingCheck check) {
  check_targets(targets, grp);
  const int m = common_modulus(targets, grp.modulus());
  CompiledCircuit out;
  out.original = targets;
  std::vector<CruElement> g, gp;
  for (const auto& t : targets) {
    const CruElement u = t.with_modulus(m);
    g.push_back(grp.sample(rng).with_modulus(m));
    gp.push_back(cru_multiply(u, cru_multiply(cru_inverse(g.back()), cru_inverse(u))));
  }
  out.dressing.push_back(g.front());
  for (std::size_t i = 0; i + 1 < targets.size(); ++i)
    out.dressing.push_back(cru_multiply(g[i + 1], gp[i]));
  out.dressing.push_back(gp.back());
  if (check == DressingCheck::Pauli) {
    for (std::size_t i = 0; i < out.dressing.size(); ++i) {
      // D_i sits between U_i and U_{i+1}; it belongs to V of either.
      bool ok = false;
      if (i > 0) ok = in_pauli_dressing_set(out.dressing[i], targets[i - 1]);
      if (!ok && i < targets.size()) ok = in_pauli_dressing_set(out.dressing[i], targets[i]);
      if (!ok)
        throw Error(ErrorKind::Numerical,
                    "merged element " + std::to_string(i) + " is outside X U X U^dag Z");
    }
    out.membership_checked = true;
  }
  return out;
}

DenseOperator circuit_unitary(std::span<const CruElement> gates) {
  if (gates.empty()) throw Error(ErrorKind::InvalidArgument, "empty circuit");
  const std::size_t d = std::size_t{1} << gates.front().n_qubits;
  DenseOperator u = DenseOperator::Identity(d, d);
  for (const auto& g : gates) u = to_matrix(g) * u;
  return u;
}

Superoperator effective_gate_channel(const CruElement& target, const SemidirectGroup& grp,
                                     const Superoperator& noise) {
  check_targets({target}, grp);
  std::vector<CruElement> elems;
  try {
    elems = grp.enumerate();
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::CapExceeded) throw;
    throw Error(ErrorKind::TooLarge, "group too large for exact averaging");
  }
  const int m = std::lcm(grp.modulus(), target.modulus);
  const CruElement u = target.with_modulus(m);
  const CruElement udag = cru_inverse(u);
  const Eigen::MatrixXcd noisy = monomial_matrix_units(to_monomial(u)) * to_matrix_units(noise);
  const Eigen::Index dim = noisy.rows();
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& e : elems) {
    const CruElement g = e.with_modulus(m);
    const CruElement gp = cru_multiply(u, cru_multiply(cru_inverse(g), udag));
    acc += monomial_matrix_units(to_monomial(gp)) * noisy * monomial_matrix_units(to_monomial(g));
  }
  return from_matrix_units(target.n_qubits, acc / static_cast<double>(elems.size()));
}

TwirlEstimate effective_channel(const std::vector<CruElement>& targets,
                                const SemidirectGroup& grp,
                                const std::vector<Superoperator>& noise_per_target,
                                EffectiveMode mode, std::size_t samples, std::mt19937_64& rng,
                                int threads) {
  check_targets(targets, grp);
  if (noise_per_target.size() != targets.size())
    throw Error(ErrorKind::DimensionMismatch, "one noise channel per target");
  const int n = grp.n_qubits();
  if (mode == EffectiveMode::Exact) {
    Superoperator acc = Superoperator::identity(n);
    for (std::size_t i = 0; i < targets.size(); ++i)
      acc = effective_gate_channel(targets[i], grp, noise_per_target[i]) * acc;
    return TwirlEstimate{std::move(acc), Eigen::MatrixXd(), 0};
  }
  if (samples < 1) throw Error(ErrorKind::ParamOutOfRange, "need at least one sample");
  std::vector<Eigen::MatrixXcd> noisy;
  for (std::size_t i = 0; i < targets.size(); ++i)
    noisy.push_back(monomial_matrix_units(to_monomial(targets[i])) *
                    to_matrix_units(noise_per_target[i]));
  const std::uint64_t root = rng();
  const std::size_t batches = std::min<std::size_t>(64, samples);
  std::vector<Eigen::MatrixXcd> sums(batches);
  std::vector<std::size_t> sizes(batches);
  parallel_for(batches, threads, [&](std::size_t b) {
    const std::size_t lo = b * samples / batches, hi = (b + 1) * samples / batches;
    sizes[b] = hi - lo;
    Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(noisy.front().rows(), noisy.front().cols());
    for (std::size_t s = lo; s < hi; ++s) {
      std::mt19937_64 local(derive_seed(root, s));
      const CompiledCircuit c = compile(targets, grp, local);
      Eigen::MatrixXcd acc = monomial_matrix_units(to_monomial(c.dressing[0]));
      for (std::size_t i = 0; i < targets.size(); ++i)
        acc = monomial_matrix_units(to_monomial(c.dressing[i + 1])) * noisy[i] * acc;
      sum += acc;
    }
    sums[b] = std::move(sum);
  });
  std::vector<Eigen::MatrixXcd> batch_means(batches);
  for (std::size_t b = 0; b < batches; ++b)
    batch_means[b] = from_matrix_units(n, sums[b] / static_cast<double>(sizes[b])).mat();
  Superoperator mean =
      from_matrix_units(n, tree_sum(std::move(sums)) / static_cast<double>(samples));
  Eigen::MatrixXd var = Eigen::MatrixXd::Zero(mean.dim(), mean.dim());
  if (batches > 1) {
    for (const auto& bm : batch_means) var += (bm - mean.mat()).cwiseAbs2();
    var /= static_cast<double>(batches * (batches - 1));
  }
  return TwirlEstimate{std::move(mean), var.cwiseSqrt(), samples};
}

}  // namespace twirlkit
