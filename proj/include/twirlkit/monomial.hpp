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
 * Unitary of the form g|k> = phase[k] |image[k]>, the common dense-free
 * representation of CRU and CNOT-dihedral elements.
 */
struct MonomialGate {
  int n_qubits = 1;
  std::vector<std::uint32_t> image;
  std::vector<cplx> phase;

  static MonomialGate identity(int n_qubits);
  DenseOperator to_matrix() const;
  MonomialGate inverse() const;
  /// this * other as operators.
  MonomialGate compose(const MonomialGate& other) const;
};

/// rho -> g rho g^dag.
DenseOperator conjugate_state(const MonomialGate& g, const DenseOperator& rho);
void conjugate_state_inplace(const MonomialGate& g, DenseOperator& rho,
                             DenseOperator& scratch);

/// Matrix-unit superoperator conjugated by the gate channel: G M G^dag.
void conjugate_matrix_units(const MonomialGate& g, const Eigen::MatrixXcd& in,
                            Eigen::MatrixXcd& out);

/// Matrix-unit superoperator of the unitary channel rho -> g rho g^dag.
Eigen::MatrixXcd monomial_matrix_units(const MonomialGate& g);
Superoperator monomial_superop(const MonomialGate& g);

}  // namespace twirlkit
