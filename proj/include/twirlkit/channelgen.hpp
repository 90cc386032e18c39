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

class KrausChannel {
 public:
  /// Validates sum K^dag K = I within tol.
  KrausChannel(std::vector<DenseOperator> kraus, double tol = kDefaultTol);

  int n_qubits() const { return n_qubits_; }
  const std::vector<DenseOperator>& kraus() const { return kraus_; }
  Superoperator superop() const;
  /// Applies the channel to an operator.
  DenseOperator apply(const DenseOperator& rho) const;

 private:
  int n_qubits_ = 0;
  std::vector<DenseOperator> kraus_;
};

/// rho -> p rho + (1 - p) I / 2^N.
KrausChannel depolarizing(int n_qubits, double p);

/// Independent damping on every qubit, gamma_i the decay probability.
KrausChannel amplitude_damping(int n_qubits, const std::vector<double>& gammas);

/**
 * Random channel from a Gaussian Stinespring isometry with environment
 * dimension env_dim, mixed with the identity channel with weight 1 - strength.
 */
KrausChannel random_cptp(int n_qubits, double strength, std::uint64_t seed,
                         int env_dim = 4);

struct CptpReport {
  double tp_violation = 0.0;        ///< ||sum K^dag K - I||_F or row-0 error
  double min_choi_eigenvalue = 0.0;
  double hermiticity_violation = 0.0;
  bool passes(double tol = kDefaultTol) const {
    return tp_violation <= tol && min_choi_eigenvalue >= -tol &&
           hermiticity_violation <= tol;
  }
};

/// Never throws on a bad channel; reports violations instead.
CptpReport cptp_check(const std::vector<DenseOperator>& kraus);
CptpReport cptp_check(const KrausChannel& c);
CptpReport cptp_check(const Superoperator& s);

/// Choi matrix sum_{kl} L(|k><l|) (x) |k><l| built from the Liouville matrix.
Eigen::MatrixXcd choi_matrix(const Superoperator& s);

}  // namespace twirlkit
