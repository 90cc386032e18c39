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

#include "twirlkit/cru_group.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <sstream>

#include <fmt/format.h>

namespace twirlkit {

namespace {

int mod(long long a, int m) {
  long long r = a % m;
  return static_cast<int>(r < 0 ? r + m : r);
}

void canonicalize(CruElement& e) {
  const int w0 = e.w.empty() ? 0 : e.w[0];
  for (int& v : e.w) v = mod(static_cast<long long>(v) - w0, e.modulus);
}

void check_shape(int n_qubits, int modulus) {
  if (n_qubits < 1 || n_qubits > 10)
    throw Error(ErrorKind::ParamOutOfRange, "qubit count must be 1..10");
  if (modulus < 1) throw Error(ErrorKind::ParamOutOfRange, "modulus must be >= 1");
}

int two_adic_valuation(int m) {
  int k = 0;
  while (m % 2 == 0) {
    m /= 2;
    ++k;
  }
  return k;
}

std::string qubit_list(int n_qubits, std::uint32_t mask) {
  std::string out = "[";
  bool first = true;
  for (int q = 0; q < n_qubits; ++q)
    if (mask & qubit_mask(n_qubits, q)) {
      if (!first) out += ",";
      out += std::to_string(q);
      first = false;
    }
  return out + "]";
}

std::string cz_name(int n_qubits, std::uint32_t mask, int order) {
  int controls = std::popcount(mask) - 1;
  std::string head = controls == 0   ? "Z"
                     : controls == 1 ? "CZ"
                     : controls == 2 ? "CCZ"
                                     : fmt::format("C^{}Z", controls);
  return fmt::format("{}_{}{}", head, order, qubit_list(n_qubits, mask));
}

std::vector<std::uint32_t> masks_of_weight(int n_qubits, int weight) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t s = 0; s < (1u << n_qubits); ++s)
    if (std::popcount(s) == weight) out.push_back(s);
  // Lexicographic in qubit order: qubit 0 is the top bit.
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

}  // namespace

CruElement CruElement::identity(int n_qubits, int modulus) {
  check_shape(n_qubits, modulus);
  return CruElement{n_qubits, modulus, 0, std::vector<int>(std::size_t{1} << n_qubits, 0)};
}

CruElement CruElement::permutation(int n_qubits, int modulus, std::uint32_t x) {
  CruElement e = identity(n_qubits, modulus);
  if (x >= (1u << n_qubits)) throw Error(ErrorKind::ParamOutOfRange, "permutation bits");
  e.x = x;
  return e;
}

CruElement CruElement::make(int n_qubits, int modulus, std::uint32_t x, std::vector<int> w) {
  check_shape(n_qubits, modulus);
  if (w.size() != (std::size_t{1} << n_qubits))
    throw Error(ErrorKind::DimensionMismatch, "phase vector must have 2^N entries");
  if (x >= (1u << n_qubits)) throw Error(ErrorKind::ParamOutOfRange, "permutation bits");
  CruElement e{n_qubits, modulus, x, std::move(w)};
  canonicalize(e);
  return e;
}

CruElement CruElement::parse(std::string_view text, int modulus) {
  auto fail = [&]() {
    return Error(ErrorKind::InvalidArgument, "cannot parse element '" + std::string(text) + "'");
  };
  auto xs = text.find("X[");
  auto ws = text.find("W[");
  if (xs == std::string_view::npos || ws == std::string_view::npos) throw fail();
  auto xe = text.find(']', xs);
  auto we = text.find(']', ws);
  if (xe == std::string_view::npos || we == std::string_view::npos) throw fail();
  std::string_view bits = text.substr(xs + 2, xe - xs - 2);
  std::uint32_t x = 0;
  for (char c : bits) {
    if (c != '0' && c != '1') throw fail();
    x = (x << 1) | static_cast<std::uint32_t>(c - '0');
  }
  std::vector<int> w;
  std::stringstream ss(std::string(text.substr(ws + 2, we - ws - 2)));
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      w.push_back(std::stoi(item));
    } catch (const std::exception&) {
      throw fail();
    }
  }
  int n = static_cast<int>(bits.size());
  if (n < 1 || w.size() != (std::size_t{1} << n)) throw fail();
  return make(n, modulus, x, std::move(w));
}

std::string CruElement::to_string() const {
  std::string out = "X[";
  for (int q = 0; q < n_qubits; ++q) out.push_back((x & qubit_mask(n_qubits, q)) ? '1' : '0');
  out += "] W[";
  for (std::size_t j = 0; j < w.size(); ++j) {
    if (j) out += ",";
    out += std::to_string(w[j]);
  }
  return out + "]";
}

bool CruElement::is_identity() const {
  return x == 0 && std::all_of(w.begin(), w.end(), [](int v) { return v == 0; });
}

CruElement CruElement::with_modulus(int new_modulus) const {
  if (new_modulus % modulus != 0)
    throw Error(ErrorKind::MixedModulus, "new modulus must be a multiple of the old one");
  CruElement e = *this;
  e.modulus = new_modulus;
  for (int& v : e.w) v *= new_modulus / modulus;
  return e;
}

std::size_t hash_phase_vector(const std::vector<int>& w, std::size_t seed) {
  std::size_t h = seed ^ 0x9e3779b97f4a7c15ull;
  for (int v : w) h ^= std::hash<int>{}(v) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  return h;
}

std::size_t CruElementHash::operator()(const CruElement& e) const {
  return hash_phase_vector(e.w, (std::size_t(e.x) << 8) ^ std::size_t(e.modulus));
}

CruElement cru_multiply(const CruElement& a, const CruElement& b) {
  if (a.modulus != b.modulus)
    throw Error(ErrorKind::MixedModulus, "elements use different phase orders");
  if (a.n_qubits != b.n_qubits)
    throw Error(ErrorKind::DimensionMismatch, "elements act on different qubit counts");
  CruElement out{a.n_qubits, a.modulus, a.x ^ b.x, std::vector<int>(a.w.size())};
  for (std::size_t j = 0; j < a.w.size(); ++j)
    out.w[j] = mod(static_cast<long long>(a.w[j ^ b.x]) + b.w[j], a.modulus);
  canonicalize(out);
  return out;
}

CruElement cru_inverse(const CruElement& a) {
  CruElement out{a.n_qubits, a.modulus, a.x, std::vector<int>(a.w.size())};
  for (std::size_t j = 0; j < a.w.size(); ++j) out.w[j] = mod(-a.w[j ^ a.x], a.modulus);
  canonicalize(out);
  return out;
}

MonomialGate to_monomial(const CruElement& g) {
  const std::size_t d = g.w.size();
  MonomialGate out{g.n_qubits, std::vector<std::uint32_t>(d), std::vector<cplx>(d)};
  const double step = 2.0 * std::numbers::pi / g.modulus;
  for (std::size_t j = 0; j < d; ++j) {
    out.image[j] = static_cast<std::uint32_t>(j) ^ g.x;
    out.phase[j] = std::polar(1.0, step * g.w[j]);
  }
  return out;
}

DenseOperator to_matrix(const CruElement& g) { return to_monomial(g).to_matrix(); }

std::vector<int> controlled_phase_vector(int n_qubits, std::uint32_t support_mask,
                                         int exponent, int modulus) {
  std::vector<int> w(std::size_t{1} << n_qubits, 0);
  for (std::uint32_t j = 0; j < w.size(); ++j)
    if ((j & support_mask) == support_mask) w[j] = mod(exponent, modulus);
  return w;
}

std::uint64_t subgroup_order(std::vector<std::vector<int>> rows, int modulus,
                             double* log2_order) {
  if (rows.empty()) {
    if (log2_order) *log2_order = 0.0;
    return 1;
  }
  const std::size_t cols = rows.front().size();
  for (auto& r : rows)
    for (int& v : r) v = mod(v, modulus);
  double log2 = 0.0;
  std::uint64_t order = 1;
  bool overflow = false;
  for (std::size_t c = 0; c < cols; ++c) {
    // Reduce every row with a nonzero entry in column c to a single pivot.
    std::vector<int> pivot;
    std::vector<std::vector<int>> rest;
    for (auto& r : rows) {
      if (r[c] == 0) {
        rest.push_back(std::move(r));
        continue;
      }
      if (pivot.empty()) {
        pivot = std::move(r);
        continue;
      }
      // Unimodular combination leaving gcd in the pivot and zero in r.
      long long a = pivot[c], b = r[c];
      long long s = 1, t = 0, s1 = 0, t1 = 1, g0 = a, g1 = b;
      while (g1 != 0) {
        long long q = g0 / g1;
        std::tie(g0, g1) = std::make_pair(g1, g0 - q * g1);
        std::tie(s, s1) = std::make_pair(s1, s - q * s1);
        std::tie(t, t1) = std::make_pair(t1, t - q * t1);
      }
      std::vector<int> np(cols), nr(cols);
      for (std::size_t i = 0; i < cols; ++i) {
        np[i] = mod(s * pivot[i] + t * r[i], modulus);
        nr[i] = mod((a / g0) * r[i] - (b / g0) * pivot[i], modulus);
      }
      pivot = std::move(np);
      rest.push_back(std::move(nr));
    }
    rows.clear();
    for (auto& r : rest)
      if (std::any_of(r.begin(), r.end(), [](int v) { return v != 0; })) rows.push_back(std::move(r));
    if (pivot.empty()) continue;
    const int ord = modulus / std::gcd(pivot[c], modulus);
    log2 += std::log2(static_cast<double>(ord));
    if (order > std::numeric_limits<std::uint64_t>::max() / ord) overflow = true;
    else order *= ord;
    std::vector<int> shifted(cols);
    for (std::size_t i = 0; i < cols; ++i) shifted[i] = mod(static_cast<long long>(ord) * pivot[i], modulus);
    if (std::any_of(shifted.begin(), shifted.end(), [](int v) { return v != 0; }))
      rows.push_back(std::move(shifted));
  }
  if (log2_order) *log2_order = log2;
  return overflow ? 0 : order;
}

SemidirectGroup::SemidirectGroup(int n_qubits, int modulus,
                                 std::vector<std::uint32_t> perm_generators,
                                 std::vector<std::vector<int>> lattice_generators,
                                 std::string name)
    : n_qubits_(n_qubits),
      modulus_(modulus),
      perm_generators_(std::move(perm_generators)),
      lattice_(std::move(lattice_generators)),
      name_(std::move(name)) {
  check_shape(n_qubits, modulus);
  const std::size_t d = std::size_t{1} << n_qubits;
  for (auto& g : lattice_) {
    if (g.size() != d) throw Error(ErrorKind::DimensionMismatch, "lattice generator length");
    for (int& v : g) v = mod(v, modulus);
  }
  std::vector<bool> seen(d, false);
  perm_parts_ = {0};
  seen[0] = true;
  for (std::uint32_t g : perm_generators_) {
    if (g >= d) throw Error(ErrorKind::ParamOutOfRange, "permutation generator bits");
    std::size_t count = perm_parts_.size();
    for (std::size_t i = 0; i < count; ++i) {
      std::uint32_t y = perm_parts_[i] ^ g;
      if (!seen[y]) {
        seen[y] = true;
        perm_parts_.push_back(y);
      }
    }
  }
  std::sort(perm_parts_.begin(), perm_parts_.end());
  // Invariance of the lattice under the permutations.
  for (std::uint32_t g : perm_generators_)
    for (const auto& v : lattice_) {
      std::vector<int> shifted(d);
      for (std::size_t j = 0; j < d; ++j) shifted[j] = v[j ^ g];
      auto with = lattice_;
      with.push_back(std::vector<int>(d, 1));
      double before = 0.0, after = 0.0;
      subgroup_order(with, modulus_, &before);
      with.push_back(shifted);
      subgroup_order(with, modulus_, &after);
      if (after > before + 1e-9)
        throw Error(ErrorKind::InvalidArgument,
                    "diagonal part is not invariant under the permutations");
    }
  auto with_phase = lattice_;
  with_phase.push_back(std::vector<int>(d, 1));
  double lg = 0.0;
  std::uint64_t full = subgroup_order(with_phase, modulus_, &lg);
  log2_lattice_order_ = lg - std::log2(static_cast<double>(modulus_));
  lattice_order_ = full == 0 ? 0 : full / static_cast<std::uint64_t>(modulus_);
}

double SemidirectGroup::log2_order() const {
  return log2_lattice_order_ + std::log2(static_cast<double>(perm_parts_.size()));
}

std::optional<std::uint64_t> SemidirectGroup::order() const {
  if (lattice_order_ == 0 || log2_order() > 63.0) return std::nullopt;
  return lattice_order_ * perm_parts_.size();
}

CruElement SemidirectGroup::sample(std::mt19937_64& rng) const {
  std::uniform_int_distribution<int> coef(0, modulus_ - 1);
  std::uniform_int_distribution<int> bit(0, 1);
  std::uint32_t x = 0;
  for (std::uint32_t g : perm_generators_)
    if (bit(rng)) x ^= g;
  std::vector<long long> acc(std::size_t{1} << n_qubits_, 0);
  for (const auto& g : lattice_) {
    int c = coef(rng);
    for (std::size_t j = 0; j < acc.size(); ++j) acc[j] += static_cast<long long>(c) * g[j];
  }
  std::vector<int> w(acc.size());
  for (std::size_t j = 0; j < acc.size(); ++j) w[j] = mod(acc[j], modulus_);
  return CruElement::make(n_qubits_, modulus_, x, std::move(w));
}

std::vector<CruElement> SemidirectGroup::enumerate_lattice(std::size_t cap) const {
  if (lattice_order_ == 0 || lattice_order_ > cap)
    throw Error(ErrorKind::TooLarge, "diagonal subgroup exceeds the enumeration cap");
  std::vector<CruElement> gens;
  for (const auto& g : lattice_) gens.push_back(CruElement::make(n_qubits_, modulus_, 0, g));
  return bfs_closure<CruElement, CruElementHash>(
      CruElement::identity(n_qubits_, modulus_), gens, cru_multiply,
      [](const CruElement&) { return std::optional<CruElement>{}; }, cap);
}

std::vector<CruElement> SemidirectGroup::enumerate(std::size_t cap) const {
  auto ord = order();
  if (!ord || *ord > cap) throw Error(ErrorKind::TooLarge, "group exceeds the enumeration cap");
  std::vector<CruElement> out;
  out.reserve(*ord);
  auto lattice = enumerate_lattice(cap);
  for (std::uint32_t x : perm_parts_)
    for (const auto& w : lattice) {
      CruElement e = w;
      e.x = x;
      out.push_back(std::move(e));
    }
  return out;
}

std::vector<CruElement> SemidirectGroup::generators() const {
  std::vector<CruElement> out;
  for (std::uint32_t x : perm_generators_)
    out.push_back(CruElement::permutation(n_qubits_, modulus_, x));
  for (const auto& g : lattice_) out.push_back(CruElement::make(n_qubits_, modulus_, 0, g));
  return out;
}

std::vector<int> SemidirectGroup::pair_classes() const {
  const std::size_t d = std::size_t{1} << n_qubits_;
  std::vector<int> out(d * d);
  std::map<std::vector<int>, int> ids;
  std::vector<int> key(lattice_.size());
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      for (std::size_t g = 0; g < lattice_.size(); ++g)
        key[g] = mod(static_cast<long long>(lattice_[g][i]) - lattice_[g][j], modulus_);
      auto it = ids.try_emplace(key, static_cast<int>(ids.size())).first;
      out[i * d + j] = it->second;
    }
  return out;
}

CnzmGroup::CnzmGroup(int n, int m)
    : n_(n),
      m_(m),
      k_(m >= 1 ? two_adic_valuation(m) : 0),
      kappa_(std::min(n + 1, k_)),
      group_(pauli_group(1)) {
  if (n < 1 || n > 9) throw Error(ErrorKind::ParamOutOfRange, "control count must be 1..9");
  if (m < 2) throw Error(ErrorKind::ParamOutOfRange, "phase order must be >= 2");
  const int nq = n + 1;
  std::vector<std::uint32_t> perms;
  for (int q = 0; q < nq; ++q) perms.push_back(qubit_mask(nq, q));
  group_ = SemidirectGroup(nq, m, perms, lattice_basis(), fmt::format("optimal(n={},m={})", n, m));
}

CruElement CnzmGroup::target() const {
  const int nq = n_qubits();
  std::vector<int> w(std::size_t{1} << nq, 0);
  w.back() = 1;
  return CruElement::make(nq, m_, 0, std::move(w));
}

DenseOperator CnzmGroup::target_matrix() const { return to_matrix(target()); }

std::vector<std::vector<int>> CnzmGroup::lattice_basis() const {
  const std::size_t d = std::size_t{1} << n_qubits();
  std::vector<std::vector<int>> out;
  for (std::size_t i = 0; i + 1 < d; ++i) {
    std::vector<int> v(d, 0);
    v[i] = 1;
    v[d - 1] = m_ - 1;
    out.push_back(std::move(v));
  }
  std::vector<int> u(d, 0);
  u[d - 1] = mod(1LL << kappa_, m_);
  out.push_back(std::move(u));
  return out;
}

double CnzmGroup::log2_order() const {
  const double d = std::ldexp(1.0, n_qubits());
  return n_qubits() + (d - 1.0) * std::log2(static_cast<double>(m_)) - kappa_;
}

std::optional<std::uint64_t> CnzmGroup::wx_order() const {
  if (log2_order() - n_qubits() > 62.5) return std::nullopt;
  unsigned __int128 v = 1;
  const std::size_t d = std::size_t{1} << n_qubits();
  for (std::size_t i = 0; i + 1 < d; ++i) v *= static_cast<unsigned>(m_);
  v >>= kappa_;
  return static_cast<std::uint64_t>(v);
}

std::optional<std::uint64_t> CnzmGroup::order() const {
  if (log2_order() > 62.5) return std::nullopt;
  return *wx_order() << n_qubits();
}

bool CnzmGroup::is_member(const CruElement& g) const {
  if (g.n_qubits != n_qubits() || g.modulus != m_)
    throw Error(ErrorKind::MixedModulus, "element does not match the group");
  long long sum = 0;
  for (int v : g.w) sum += v;
  return mod(sum, 1 << kappa_) == 0;
}

CruElement CnzmGroup::sample_uniform(std::mt19937_64& rng) const {
  const int nq = n_qubits();
  const std::size_t d = std::size_t{1} << nq;
  std::uniform_int_distribution<int> coef(0, m_ - 1);
  std::uniform_int_distribution<int> ucoef(0, m_ / (1 << kappa_) - 1);
  std::uniform_int_distribution<std::uint32_t> xs(0, static_cast<std::uint32_t>(d - 1));
  std::uint32_t x = xs(rng);
  std::vector<long long> acc(d, 0);
  for (std::size_t i = 0; i + 1 < d; ++i) {
    int c = coef(rng);
    acc[i] += c;
    acc[d - 1] -= c;
  }
  acc[d - 1] += static_cast<long long>(ucoef(rng)) << kappa_;
  std::vector<int> w(d);
  for (std::size_t j = 0; j < d; ++j) w[j] = mod(acc[j], m_);
  return CruElement::make(nq, m_, x, std::move(w));
}

std::vector<CruElement> CnzmGroup::enumerate(std::size_t cap) const {
  auto ord = order();
  if (!ord || *ord > cap) throw Error(ErrorKind::TooLarge, "group exceeds the enumeration cap");
  return group_.enumerate(cap);
}

CruElement CnzmGroup::conjugate_by_target(const CruElement& a) const {
  CruElement u = target();
  return cru_multiply(cru_multiply(u, a), cru_inverse(u));
}

std::vector<CruElement> CnzmGroup::theorem_generators() const {
  const int nq = n_qubits();
  std::vector<CruElement> out;
  CruElement u = target();
  for (std::uint32_t x = 1; x < (1u << nq); ++x) {
    CruElement p = CruElement::permutation(nq, m_, x);
    out.push_back(cru_multiply(cru_multiply(cru_multiply(cru_inverse(p), u), p), cru_inverse(u)));
  }
  for (int q = 0; q < nq; ++q) out.push_back(CruElement::permutation(nq, m_, qubit_mask(nq, q)));
  return out;
}

std::vector<NamedGenerator> CnzmGroup::wx_structure() const {
  const int nq = n_qubits();
  std::vector<NamedGenerator> out;
  auto gate = [&](std::uint32_t mask, int exponent) {
    return CruElement::make(nq, m_, 0, controlled_phase_vector(nq, mask, exponent, m_));
  };
  // Unconstrained controlled phases C^lZ_m, l = 0..n-k.
  for (int l = 0; l <= n_ - k_; ++l)
    for (std::uint32_t s : masks_of_weight(nq, l + 1)) out.push_back({cz_name(nq, s, m_), gate(s, 1)});
  // A_j recursion, j up to min(k, n+1). A_1 = {C^nZ_{m/2}}.
  const int depth = std::min(k_, n_ + 1);
  std::vector<NamedGenerator> a;
  for (int j = 1; j <= depth; ++j) {
    const int weight = n_ - j + 2;
    std::vector<NamedGenerator> next;
    for (std::uint32_t s : masks_of_weight(nq, weight)) next.push_back({cz_name(nq, s, m_ / 2), gate(s, 2)});
    for (const auto& g : a)
      for (std::uint32_t s : masks_of_weight(nq, weight))
        next.push_back({g.name + "*" + cz_name(nq, s, m_), cru_multiply(g.element, gate(s, 1))});
    a = std::move(next);
  }
  for (auto& g : a) out.push_back(std::move(g));
  std::erase_if(out, [](const NamedGenerator& g) { return g.element.is_identity(); });
  return out;
}

SemidirectGroup pauli_group(int n_qubits) {
  std::vector<std::uint32_t> perms;
  std::vector<std::vector<int>> lattice;
  for (int q = 0; q < n_qubits; ++q) {
    perms.push_back(qubit_mask(n_qubits, q));
    lattice.push_back(controlled_phase_vector(n_qubits, qubit_mask(n_qubits, q), 1, 2));
  }
  return SemidirectGroup(n_qubits, 2, perms, lattice, fmt::format("pauli(N={})", n_qubits));
}

SemidirectGroup local_dihedral_group(int n_qubits, int m) {
  std::vector<std::uint32_t> perms;
  std::vector<std::vector<int>> lattice;
  for (int q = 0; q < n_qubits; ++q) {
    perms.push_back(qubit_mask(n_qubits, q));
    lattice.push_back(controlled_phase_vector(n_qubits, qubit_mask(n_qubits, q), 1, m));
  }
  return SemidirectGroup(n_qubits, m, perms, lattice,
                         fmt::format("dihedral(N={},m={})", n_qubits, m));
}

SemidirectGroup cz_family_group(int n_qubits, int max_controls, bool with_s) {
  const int m = with_s ? 4 : 2;
  std::vector<std::uint32_t> perms;
  std::vector<std::vector<int>> lattice;
  for (int q = 0; q < n_qubits; ++q) {
    perms.push_back(qubit_mask(n_qubits, q));
    lattice.push_back(controlled_phase_vector(n_qubits, qubit_mask(n_qubits, q), 1, m));
  }
  for (int l = 1; l <= max_controls && l < n_qubits; ++l)
    for (std::uint32_t s : masks_of_weight(n_qubits, l + 1))
      lattice.push_back(controlled_phase_vector(n_qubits, s, m / 2, m));
  return SemidirectGroup(n_qubits, m, perms, lattice,
                         fmt::format("cz_family(N={},l<={},{})", n_qubits, max_controls,
                                     with_s ? "S" : "Z"));
}

SemidirectGroup optimal_s_group(int n, int m) {
  CnzmGroup base(n, m);
  const int nq = base.n_qubits();
  const int big = std::lcm(m, 4);
  std::vector<std::vector<int>> lattice;
  for (auto v : base.lattice_basis()) {
    for (int& e : v) e *= big / m;
    lattice.push_back(std::move(v));
  }
  for (int q = 0; q < nq; ++q)
    lattice.push_back(controlled_phase_vector(nq, qubit_mask(nq, q), big / 4, big));
  for (std::uint32_t s : masks_of_weight(nq, 2))
    lattice.push_back(controlled_phase_vector(nq, s, big / 2, big));
  return SemidirectGroup(nq, big, base.group().perm_generators(), lattice,
                         fmt::format("optimal_S(n={},m={})", n, m));
}

SemidirectGroup crippled_group(int n, int m) {
  CnzmGroup base(n, m);
  auto perms = base.group().perm_generators();
  perms.pop_back();
  return SemidirectGroup(base.n_qubits(), m, perms, base.lattice_basis(),
                         fmt::format("crippled(n={},m={})", n, m));
}

ClosureGroup::ClosureGroup(std::vector<CruElement> generators, std::size_t cap,
                           std::optional<CruElement> target)
    : generators_(std::move(generators)) {
  if (generators_.empty()) throw Error(ErrorKind::InvalidArgument, "no generators");
  const int n = generators_.front().n_qubits;
  const int m = generators_.front().modulus;
  for (const auto& g : generators_)
    if (g.n_qubits != n || g.modulus != m)
      throw Error(ErrorKind::MixedModulus, "generators differ in qubit count or modulus");
  std::optional<CruElement> u_inv;
  if (target) u_inv = cru_inverse(*target);
  elements_ = bfs_closure<CruElement, CruElementHash>(
      CruElement::identity(n, m), generators_, cru_multiply,
      [&](const CruElement& e) -> std::optional<CruElement> {
        if (!target) return std::nullopt;
        return cru_multiply(cru_multiply(*target, e), *u_inv);
      },
      cap);
  index_.insert(elements_.begin(), elements_.end());
}

CruElement ClosureGroup::sample(std::mt19937_64& rng) const {
  std::uniform_int_distribution<std::size_t> pick(0, elements_.size() - 1);
  return elements_[pick(rng)];
}

int quotient_orbits(const std::vector<std::uint32_t>& perm_parts, int n_qubits) {
  std::vector<std::uint32_t> distinct = perm_parts;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  const std::size_t d = std::size_t{1} << n_qubits;
  std::size_t fixed = 0;
  for (std::uint32_t x : distinct)
    for (std::size_t j = 0; j < d; ++j)
      if ((j ^ x) == j) ++fixed;
  return static_cast<int>(fixed / distinct.size());
}

int quotient_orbits(const SemidirectGroup& g) {
  return quotient_orbits(g.perm_parts(), g.n_qubits());
}

int quotient_orbits(const ClosureGroup& g) {
  std::vector<std::uint32_t> xs;
  for (const auto& e : g.elements()) xs.push_back(e.x);
  return quotient_orbits(xs, g.n_qubits());
}

}  // namespace twirlkit
