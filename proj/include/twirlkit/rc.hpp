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
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "twirlkit/cru_group.hpp"
#include "twirlkit/superop.hpp"
#include "twirlkit/twirl.hpp"

namespace twirlkit {

/// C^nZ_m acting on the listed qubits of an N-qubit register.
CruElement cnzm_on(int n_register, int n, int m, const std::vector<int>& qubits);

enum class DressingCheck { None, Pauli };

/**
 * Dressed circuit D_0 U_1 D_1 ... U_L D_L in time order, where
 * D_0 = G_1, D_i = G_{i+1} G'_i and D_L = G'_L with G'_i = U_i G_i^-1 U_i^-1.
 */
struct CompiledCircuit {
  std::vector<CruElement> original;
  std::vector<CruElement> dressing;  ///< L+1 merged twirling elements
  std::uint64_t seed = 0;
  bool membership_checked = false;

  /// Interleaved list D_0, U_1, D_1, ..., U_L, D_L.
  std::vector<CruElement> dressed() const;
};

/**
 * Draws one twirling element per target and merges neighbours. With
 * DressingCheck::Pauli every merged element is verified to lie in
 * X U X U^dag Z of its neighbouring target.
 */
CompiledCircuit compile(const std::vector<CruElement>& targets, const SemidirectGroup& grp,
                        std::mt19937_64& rng, DressingCheck check = DressingCheck::None);

/// Whether v lies in X_a U X_b U^dag Z_c for some a, b, c (U diagonal or CRU).
bool in_pauli_dressing_set(const CruElement& v, const CruElement& u);

/// Unitary of a list of CRU elements applied in order, first element first.
DenseOperator circuit_unitary(std::span<const CruElement> gates_in_time_order);

/**
 * Literal average over every group element g of G'_g (U L) g, the channel
 * one dressed gate implements on average. Throws TooLarge when the group
 * cannot be enumerated.
 */
Superoperator effective_gate_channel(const CruElement& target, const SemidirectGroup& grp,
                                     const Superoperator& noise);

enum class EffectiveMode { Exact, MonteCarlo };

/**
 * Channel of the whole noisy dressed circuit averaged over dressings.
 * Exact mode multiplies the per-gate averages; Monte-Carlo mode samples
 * compiled circuits (std_error is empty in exact mode).
 */
TwirlEstimate effective_channel(const std::vector<CruElement>& targets,
                                const SemidirectGroup& grp,
                                const std::vector<Superoperator>& noise_per_target,
                                EffectiveMode mode, std::size_t samples, std::mt19937_64& rng,
                                int threads = 1);

}  // namespace twirlkit
