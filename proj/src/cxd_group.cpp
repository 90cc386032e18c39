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

#include "twirlkit/cxd_group.hpp"

#include <bit>
#include <cmath>
#include <numbers>

#include "twirlkit/cru_group.hpp"

namespace twirlkit {

namespace {

int mod(long long a, int m) {
  long long r = a % m;
  return static_cast<int>(r < 0 ? r + m : r);
}

void canonicalize(AffinePhaseElement& e) {
  const int w0 = e.w[0];
  for (int& v : e.w) v = mod(static_cast<long long>(v) - w0, e.modulus());
}

void check_shape(int n_qubits, int kprime) {
  if (n_qubits < 1 || n_qubits > 5)
    throw Error(ErrorKind::ParamOutOfRange, "CNOT-dihedral elements support 1..5 qubits");
  if (kprime < 1 || kprime > 16)
    throw Error(ErrorKind::ParamOutOfRange, "kprime must be 1..16");
}

}  // namespace

std::uint32_t AffinePhaseElement::apply_linear(std::uint32_t x) const {
  std::uint32_t out = 0;
  for (int q = 0; q < n_qubits; ++q)
    if (x & qubit_mask(n_qubits, q)) out ^= a_cols[q];
  return out;
}

AffinePhaseElement AffinePhaseElement::identity(int n_qubits, int kprime) {
  check_shape(n_qubits, kprime);
  AffinePhaseElement e{n_qubits, kprime, {}, 0, std::vector<int>(std::size_t{1} << n_qubits, 0)};
  for (int q = 0; q < n_qubits; ++q) e.a_cols.push_back(qubit_mask(n_qubits, q));
  return e;
}

AffinePhaseElement AffinePhaseElement::make(int n_qubits, int kprime,
                                            std::vector<std::uint32_t> a_cols, std::uint32_t b,
                                            std::vector<int> w) {
  check_shape(n_qubits, kprime);
  if (static_cast<int>(a_cols.size()) != n_qubits || w.size() != (std::size_t{1} << n_qubits))
    throw Error(ErrorKind::DimensionMismatch, "affine element shape");
  if (!gl2_invertible(a_cols, n_qubits))
    throw Error(ErrorKind::InvalidArgument, "linear part is not invertible");
  AffinePhaseElement e{n_qubits, kprime, std::move(a_cols), b, std::move(w)};
  for (int& v : e.w) v = mod(v, e.modulus());
  canonicalize(e);
  return e;
}

AffinePhaseElement AffinePhaseElement::cx(int n_qubits, int kprime, int control, int target) {
  AffinePhaseElement e = identity(n_qubits, kprime);
  if (control == target || control < 0 || target < 0 || control >= n_qubits || target >= n_qubits)
    throw Error(ErrorKind::ParamOutOfRange, "bad CNOT qubits");
  e.a_cols[control] ^= qubit_mask(n_qubits, target);
  return e;
}

AffinePhaseElement AffinePhaseElement::x_gate(int n_qubits, int kprime, int qubit) {
  AffinePhaseElement e = identity(n_qubits, kprime);
  e.b = qubit_mask(n_qubits, qubit);
  return e;
}

AffinePhaseElement AffinePhaseElement::phase_gate(int n_qubits, int kprime, int qubit, int power) {
  AffinePhaseElement e = identity(n_qubits, kprime);
  for (std::uint32_t x = 0; x < e.w.size(); ++x)
    if (x & qubit_mask(n_qubits, qubit)) e.w[x] = mod(power, e.modulus());
  return e;
}

std::string AffinePhaseElement::to_string() const {
  std::string out = "A[";
  for (int r = 0; r < n_qubits; ++r) {
    if (r) out += ";";
    for (int c = 0; c < n_qubits; ++c)
      out.push_back((a_cols[c] & qubit_mask(n_qubits, r)) ? '1' : '0');
  }
  out += "] B[";
  for (int q = 0; q < n_qubits; ++q) out.push_back((b & qubit_mask(n_qubits, q)) ? '1' : '0');
  out += "] W[";
  for (std::size_t j = 0; j < w.size(); ++j) {
    if (j) out += ",";
    out += std::to_string(w[j]);
  }
  return out + "]";
}

std::size_t AffinePhaseElementHash::operator()(const AffinePhaseElement& e) const {
  std::size_t seed = e.b;
  for (auto c : e.a_cols) seed = seed * 1315423911u + c;
  return hash_phase_vector(e.w, seed);
}

bool gl2_invertible(const std::vector<std::uint32_t>& cols, int n_qubits) {
  // Basis indexed by leading bit.
  std::vector<std::uint32_t> lead(32, 0);
  int rank = 0;
  for (std::uint32_t v : cols) {
    for (int bit = 31; bit >= 0 && v; --bit) {
      if (!((v >> bit) & 1)) continue;
      if (!lead[bit]) {
        lead[bit] = v;
        ++rank;
        v = 0;
      } else {
        v ^= lead[bit];
      }
    }
  }
  return rank == n_qubits;
}

AffinePhaseElement cxd_multiply(const AffinePhaseElement& a, const AffinePhaseElement& b) {
  if (a.kprime != b.kprime) throw Error(ErrorKind::MixedModulus, "different phase orders");
  if (a.n_qubits != b.n_qubits) throw Error(ErrorKind::DimensionMismatch, "different qubit counts");
  AffinePhaseElement out = a;
  for (int q = 0; q < a.n_qubits; ++q) out.a_cols[q] = a.apply_linear(b.a_cols[q]);
  out.b = a.apply_linear(b.b) ^ a.b;
  for (std::uint32_t x = 0; x < out.w.size(); ++x)
    out.w[x] = mod(static_cast<long long>(a.w[b.apply(x)]) + b.w[x], a.modulus());
  canonicalize(out);
  return out;
}

AffinePhaseElement cxd_inverse(const AffinePhaseElement& a) {
  const std::size_t d = a.w.size();
  // Tabulate the inverse affine map, then read off its linear part.
  std::vector<std::uint32_t> inv(d);
  for (std::uint32_t x = 0; x < d; ++x) inv[a.apply(x)] = x;
  AffinePhaseElement out = a;
  out.b = inv[0];
  for (int q = 0; q < a.n_qubits; ++q) out.a_cols[q] = inv[qubit_mask(a.n_qubits, q)] ^ out.b;
  for (std::uint32_t y = 0; y < d; ++y) out.w[y] = mod(-a.w[inv[y]], a.modulus());
  canonicalize(out);
  return out;
}

AffinePhaseElement cxd_sample(int n_qubits, int kprime, std::mt19937_64& rng) {
  check_shape(n_qubits, kprime);
  const std::uint32_t d = 1u << n_qubits;
  std::uniform_int_distribution<std::uint32_t> vec(0, d - 1);
  std::vector<std::uint32_t> cols(n_qubits);
  do {
    for (auto& c : cols) c = vec(rng);
  } while (!gl2_invertible(cols, n_qubits));
  std::uint32_t b = vec(rng);
  std::uniform_int_distribution<int> coef(0, (1 << kprime) - 1);
  std::vector<int> w(d, 0);
  for (std::uint32_t a = 1; a < d; ++a) {
    int c = coef(rng);
    for (std::uint32_t x = 0; x < d; ++x)
      if (std::popcount(a & x) & 1) w[x] += c;
  }
  return AffinePhaseElement::make(n_qubits, kprime, std::move(cols), b, std::move(w));
}

MonomialGate to_monomial(const AffinePhaseElement& g) {
  const std::size_t d = g.w.size();
  MonomialGate out{g.n_qubits, std::vector<std::uint32_t>(d), std::vector<cplx>(d)};
  const double step = 2.0 * std::numbers::pi / g.modulus();
  for (std::uint32_t x = 0; x < d; ++x) {
    out.image[x] = g.apply(x);
    out.phase[x] = std::polar(1.0, step * g.w[x]);
  }
  return out;
}

DenseOperator cxd_to_matrix(const AffinePhaseElement& g) { return to_monomial(g).to_matrix(); }

std::vector<AffinePhaseElement> cxd_enumerate(int n_qubits, int kprime, std::size_t cap) {
  std::vector<AffinePhaseElement> gens;
  for (int q = 0; q < n_qubits; ++q) {
    gens.push_back(AffinePhaseElement::x_gate(n_qubits, kprime, q));
    gens.push_back(AffinePhaseElement::phase_gate(n_qubits, kprime, q, 1));
    for (int t = 0; t < n_qubits; ++t)
      if (t != q) gens.push_back(AffinePhaseElement::cx(n_qubits, kprime, q, t));
  }
  return bfs_closure<AffinePhaseElement, AffinePhaseElementHash>(
      AffinePhaseElement::identity(n_qubits, kprime), gens, cxd_multiply,
      [](const AffinePhaseElement&) { return std::optional<AffinePhaseElement>{}; }, cap);
}

int default_kprime(int n, int m) {
  if (m == 2) return n + 1;
  int k = 0;
  while ((1 << k) < 2 * m) ++k;
  if ((1 << k) != 2 * m)
    throw Error(ErrorKind::ParamOutOfRange, "CNOT-dihedral comparison needs m a power of two");
  return k;
}

AffinePhaseElement cxd_target(int n, int m, int kprime) {
  const int nq = n + 1;
  if ((1 << kprime) % m != 0)
    throw Error(ErrorKind::MixedModulus, "target phase order does not divide 2^kprime");
  AffinePhaseElement u = AffinePhaseElement::identity(nq, kprime);
  u.w.back() = (1 << kprime) / m;
  return u;
}

}  // namespace twirlkit
