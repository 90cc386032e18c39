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

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "twirlkit/monomial.hpp"

namespace twirlkit {

/**
 * CNOT-dihedral element |x> -> omega^{w[x]} |A x + b>, with omega a
 * primitive 2^kprime-th root of unity. A is stored as N column masks:
 * column q is the image of the basis vector of qubit q.
 */
struct AffinePhaseElement {
  int n_qubits = 1;
  int kprime = 1;
  std::vector<std::uint32_t> a_cols;
  std::uint32_t b = 0;
  std::vector<int> w;

  int modulus() const { return 1 << kprime; }
  std::uint32_t apply_linear(std::uint32_t x) const;
  std::uint32_t apply(std::uint32_t x) const { return apply_linear(x) ^ b; }

  static AffinePhaseElement identity(int n_qubits, int kprime);
  /// Canonicalizes the phase vector.
  static AffinePhaseElement make(int n_qubits, int kprime, std::vector<std::uint32_t> a_cols,
                                 std::uint32_t b, std::vector<int> w);
  /// CNOT with the given control and target qubits.
  static AffinePhaseElement cx(int n_qubits, int kprime, int control, int target);
  static AffinePhaseElement x_gate(int n_qubits, int kprime, int qubit);
  /// Phase omega^{power} on |1> of one qubit.
  static AffinePhaseElement phase_gate(int n_qubits, int kprime, int qubit, int power);

  std::string to_string() const;
  bool operator==(const AffinePhaseElement&) const = default;
};

struct AffinePhaseElementHash {
  std::size_t operator()(const AffinePhaseElement& e) const;
};

bool gl2_invertible(const std::vector<std::uint32_t>& cols, int n_qubits);

AffinePhaseElement cxd_multiply(const AffinePhaseElement& a, const AffinePhaseElement& b);
AffinePhaseElement cxd_inverse(const AffinePhaseElement& a);
AffinePhaseElement cxd_sample(int n_qubits, int kprime, std::mt19937_64& rng);
DenseOperator cxd_to_matrix(const AffinePhaseElement& g);
MonomialGate to_monomial(const AffinePhaseElement& g);

/// Every element of <CX, X, Z_{2^kprime}> on N qubits (small N only).
std::vector<AffinePhaseElement> cxd_enumerate(int n_qubits, int kprime,
                                              std::size_t cap = std::size_t{1} << 20);

/// Default kprime for a C^nZ_m target: n+1 when m = 2, else log2(2m).
int default_kprime(int n, int m);

/// C^nZ_m as an element of the CNOT-dihedral group with the given kprime.
AffinePhaseElement cxd_target(int n, int m, int kprime);

}  // namespace twirlkit
