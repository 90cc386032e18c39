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
#include <vector>

#include "twirlkit/superop.hpp"

namespace twirlkit {

/**
 * Composite gate noise L = L_u o L_a o L_d: global depolarizing, local
 * amplitude damping, then the coherent error U_ZZ U_SWAP. Parameters
 * are drawn once per seed and then held fixed.
 */
struct NoiseModel {
  int n_qubits = 1;
  double p_depol = 0.98;
  std::vector<double> gammas;  ///< one per qubit
  std::vector<double> alphas;  ///< pairs (j,k), j<k, lexicographic
  std::vector<double> betas;   ///< basis states z with |z| >= 2, increasing z
  std::vector<double> spam;    ///< |0> -> |1> flip probability per qubit
  std::uint64_t seed = 0;

  /// Draws gamma in [0,0.02], alpha in [0,0.01], beta in [0,0.1]; spam fixed.
  static NoiseModel sample(int n_qubits, std::uint64_t seed, double p_depol = 0.98,
                           double spam = 0.02);
  static NoiseModel depolarizing_only(int n_qubits, double p_depol, double spam = 0.0);
  /// Throws ParamOutOfRange unless all parameters are in their sampling ranges.
  void validate() const;
};

/// Number of basis states of weight >= 2.
std::size_t beta_count(int n_qubits);
std::size_t alpha_count(int n_qubits);

/// U_ZZ U_SWAP.
DenseOperator coherent_error_unitary(const NoiseModel& model);
Superoperator build_noise(const NoiseModel& model);

enum class Basis { Z, X };

DenseOperator noisy_initial_state(int n_qubits, Basis basis, const std::vector<double>& spam);
DenseOperator noisy_initial_state(int n_qubits, Basis basis, double spam);

double true_fidelity(const NoiseModel& model);

}  // namespace twirlkit
