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

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <queue>
#include <random>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "twirlkit/monomial.hpp"
#include "twirlkit/superop.hpp"

namespace twirlkit {

inline constexpr std::size_t kEnumerationCap = std::size_t{1} << 20;

/**
 * CRU element Pi_x diag(omega_m^{w_j}). The phase vector is kept with
 * w[0] = 0 so equal gates (up to global phase) compare equal.
 */
struct CruElement {
  int n_qubits = 1;
  int modulus = 2;
  std::uint32_t x = 0;
  std::vector<int> w;

  static CruElement identity(int n_qubits, int modulus);
  static CruElement permutation(int n_qubits, int modulus, std::uint32_t x);
  /// Canonicalizes the supplied exponents.
  static CruElement make(int n_qubits, int modulus, std::uint32_t x, std::vector<int> w);
  /// Parses "X[bits] W[w0,...]"; the modulus is not part of the text.
  static CruElement parse(std::string_view text, int modulus);

  std::string to_string() const;
  bool is_identity() const;
  bool is_diagonal() const { return x == 0; }
  /// Same gate expressed over a multiple of the modulus.
  CruElement with_modulus(int new_modulus) const;
  bool operator==(const CruElement&) const = default;
};

struct CruElementHash {
  std::size_t operator()(const CruElement& e) const;
};

std::size_t hash_phase_vector(const std::vector<int>& w, std::size_t seed = 0);

CruElement cru_multiply(const CruElement& a, const CruElement& b);
CruElement cru_inverse(const CruElement& a);
DenseOperator to_matrix(const CruElement& g);
MonomialGate to_monomial(const CruElement& g);

/// Exponent vector with value `exponent` on every basis state whose bits
/// include all of `support_mask` (a controlled phase on those qubits).
std::vector<int> controlled_phase_vector(int n_qubits, std::uint32_t support_mask,
                                         int exponent, int modulus);
/// Bit mask of qubit q (qubit 0 is the most significant bit).
inline std::uint32_t qubit_mask(int n_qubits, int q) {
  return std::uint32_t{1} << (n_qubits - 1 - q);
}

/// Order of the additive subgroup of Z_m^D spanned by the vectors.
std::uint64_t subgroup_order(std::vector<std::vector<int>> gens, int modulus,
                             double* log2_order = nullptr);

/**
 * Group X' x| L: permutation parts are the GF(2) span of perm_generators,
 * diagonal parts the Z_m span of lattice_generators modulo global phase.
 * L must be invariant under the permutations for this to be a group.
 */
class SemidirectGroup {
 public:
  SemidirectGroup(int n_qubits, int modulus, std::vector<std::uint32_t> perm_generators,
                  std::vector<std::vector<int>> lattice_generators, std::string name);

  int n_qubits() const { return n_qubits_; }
  int modulus() const { return modulus_; }
  const std::string& name() const { return name_; }
  const std::vector<std::uint32_t>& perm_generators() const { return perm_generators_; }
  const std::vector<std::vector<int>>& lattice_generators() const { return lattice_; }
  /// All permutation parts, the GF(2) span of the generators.
  const std::vector<std::uint32_t>& perm_parts() const { return perm_parts_; }

  /// Number of diagonal elements modulo global phase.
  std::uint64_t lattice_order() const { return lattice_order_; }
  double log2_order() const;
  std::optional<std::uint64_t> order() const;

  CruElement sample(std::mt19937_64& rng) const;
  std::vector<CruElement> enumerate_lattice(std::size_t cap = kEnumerationCap) const;
  std::vector<CruElement> enumerate(std::size_t cap = kEnumerationCap) const;
  std::vector<CruElement> generators() const;

  /// Class label of each ordered pair (i,j): pairs share a label iff the
  /// lattice average of omega^{w_i - w_j - w_k + w_l} is 1.
  std::vector<int> pair_classes() const;

 private:
  int n_qubits_;
  int modulus_;
  std::vector<std::uint32_t> perm_generators_;
  std::vector<std::vector<int>> lattice_;
  std::string name_;
  std::vector<std::uint32_t> perm_parts_;
  std::uint64_t lattice_order_ = 0;
  double log2_lattice_order_ = 0.0;
};

struct NamedGenerator {
  std::string name;
  CruElement element;
};

/// Optimal twirling group X x| W_X of the gate C^nZ_m.
class CnzmGroup {
 public:
  CnzmGroup(int n, int m);

  int n() const { return n_; }
  int m() const { return m_; }
  int n_qubits() const { return n_ + 1; }
  int k() const { return k_; }
  int kappa() const { return kappa_; }

  /// U = C^nZ_m as (x=0, w=e_last).
  CruElement target() const;
  DenseOperator target_matrix() const;
  const SemidirectGroup& group() const { return group_; }
  /// v_i = e_i - e_last for i < 2^N - 1 followed by u = 2^kappa e_last.
  std::vector<std::vector<int>> lattice_basis() const;

  /// 2^N m^{2^N - 1} / 2^kappa when it fits in 64 bits.
  std::optional<std::uint64_t> order() const;
  std::optional<std::uint64_t> wx_order() const;
  double log2_order() const;

  bool is_member(const CruElement& g) const;
  CruElement sample_uniform(std::mt19937_64& rng) const;
  std::vector<CruElement> enumerate(std::size_t cap = kEnumerationCap) const;
  CruElement conjugate_by_target(const CruElement& a) const;
  /// {Pi_x^dag U Pi_x U^dag : x} together with the single-qubit X gates.
  std::vector<CruElement> theorem_generators() const;
  /// Named generating set of W_X following the case analysis on m.
  std::vector<NamedGenerator> wx_structure() const;

 private:
  int n_;
  int m_;
  int k_;
  int kappa_;
  SemidirectGroup group_;
};

SemidirectGroup pauli_group(int n_qubits);
/// X x| Z_m on each qubit.
SemidirectGroup local_dihedral_group(int n_qubits, int m);
/// X x| <C^lZ (1 <= l <= max_controls), Z or S>.
SemidirectGroup cz_family_group(int n_qubits, int max_controls, bool with_s);
/// Optimal group of C^nZ_m enlarged by S on every qubit and CZ on every pair.
SemidirectGroup optimal_s_group(int n, int m);
/// Optimal group with the X generator of the last qubit removed.
SemidirectGroup crippled_group(int n, int m);

/**
 * Finite group generated by CRU elements, enumerated breadth first from
 * the identity. When a target is given the set is also closed under
 * conjugation by it.
 */
class ClosureGroup {
 public:
  ClosureGroup(std::vector<CruElement> generators, std::size_t cap = kEnumerationCap,
               std::optional<CruElement> target = std::nullopt);

  const std::vector<CruElement>& generators() const { return generators_; }
  const std::vector<CruElement>& elements() const { return elements_; }
  std::size_t size() const { return elements_.size(); }
  bool contains(const CruElement& g) const { return index_.count(g) > 0; }
  int n_qubits() const { return elements_.front().n_qubits; }
  int modulus() const { return elements_.front().modulus; }
  CruElement sample(std::mt19937_64& rng) const;

 private:
  std::vector<CruElement> generators_;
  std::vector<CruElement> elements_;
  std::unordered_set<CruElement, CruElementHash> index_;
};

/// Burnside count of orbits of XOR-translations on {0,1}^N.
int quotient_orbits(const std::vector<std::uint32_t>& perm_parts, int n_qubits);
int quotient_orbits(const SemidirectGroup& g);
int quotient_orbits(const ClosureGroup& g);

/**
 * Breadth-first closure of generators under right multiplication, with an
 * optional extra unary map applied to every new element.
 */
template <class T, class Hash, class Mul, class Extra>
std::vector<T> bfs_closure(const T& identity, const std::vector<T>& gens, Mul mul,
                           Extra extra, std::size_t cap) {
  std::vector<T> out;
  std::unordered_set<T, Hash> seen;
  std::queue<T> todo;
  auto visit = [&](const T& e) {
    if (seen.insert(e).second) {
      if (seen.size() > cap)
        throw Error(ErrorKind::CapExceeded,
                    "closure exceeds cap of " + std::to_string(cap) + " elements");
      out.push_back(e);
      todo.push(e);
    }
  };
  visit(identity);
  while (!todo.empty()) {
    T cur = todo.front();
    todo.pop();
    for (const auto& g : gens) visit(mul(cur, g));
    if (auto e = extra(cur)) visit(*e);
  }
  return out;
}

}  // namespace twirlkit
