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

#include "twirlkit/monomial.hpp"

namespace twirlkit {

MonomialGate MonomialGate::identity(int n_qubits) {
  const std::size_t d = std::size_t{1} << n_qubits;
  MonomialGate g{n_qubits, std::vector<std::uint32_t>(d), std::vector<cplx>(d, 1.0)};
  for (std::size_t k = 0; k < d; ++k) g.image[k] = static_cast<std::uint32_t>(k);
  return g;
}

DenseOperator MonomialGate::to_matrix() const {
  const std::size_t d = image.size();
  DenseOperator m = DenseOperator::Zero(d, d);
  for (std::size_t k = 0; k < d; ++k) m(image[k], k) = phase[k];
  return m;
}

MonomialGate MonomialGate::inverse() const {
  MonomialGate out{n_qubits, image, phase};
  for (std::size_t k = 0; k < image.size(); ++k) {
    out.image[image[k]] = static_cast<std::uint32_t>(k);
    out.phase[image[k]] = std::conj(phase[k]);
  }
  return out;
}

MonomialGate MonomialGate::compose(const MonomialGate& other) const {
  if (other.image.size() != image.size())
    throw Error(ErrorKind::DimensionMismatch, "monomial gates differ in size");
  MonomialGate out{n_qubits, image, phase};
  for (std::size_t k = 0; k < image.size(); ++k) {
    std::uint32_t mid = other.image[k];
    out.image[k] = image[mid];
    out.phase[k] = phase[mid] * other.phase[k];
  }
  return out;
}

void conjugate_state_inplace(const MonomialGate& g, DenseOperator& rho,
                             DenseOperator& scratch) {
  const std::size_t d = g.image.size();
  scratch.resize(d, d);
  for (std::size_t j = 0; j < d; ++j) {
    const cplx cj = std::conj(g.phase[j]);
    const std::uint32_t pj = g.image[j];
    for (std::size_t i = 0; i < d; ++i)
      scratch(g.image[i], pj) = g.phase[i] * cj * rho(i, j);
  }
  rho.swap(scratch);
}

DenseOperator conjugate_state(const MonomialGate& g, const DenseOperator& rho) {
  DenseOperator out = rho;
  DenseOperator scratch;
  conjugate_state_inplace(g, out, scratch);
  return out;
}

// (G M G^dag)[(pi i, pi j), (pi k, pi l)] = c_i conj(c_j) conj(c_k) c_l M[(i,j),(k,l)]
void conjugate_matrix_units(const MonomialGate& g, const Eigen::MatrixXcd& in,
                            Eigen::MatrixXcd& out) {
  const std::size_t d = g.image.size();
  const std::size_t dim = d * d;
  out.resize(dim, dim);
  std::vector<cplx> left(dim), right(dim);
  std::vector<std::size_t> dest(dim);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      left[i * d + j] = g.phase[i] * std::conj(g.phase[j]);
      right[i * d + j] = std::conj(left[i * d + j]);
      dest[i * d + j] = std::size_t(g.image[i]) * d + g.image[j];
    }
  for (std::size_t c = 0; c < dim; ++c) {
    const cplx rc = right[c];
    const std::size_t dc = dest[c];
    for (std::size_t r = 0; r < dim; ++r) out(dest[r], dc) = left[r] * rc * in(r, c);
  }
}

Eigen::MatrixXcd monomial_matrix_units(const MonomialGate& g) {
  const std::size_t d = g.image.size();
  Eigen::MatrixXcd mu = Eigen::MatrixXcd::Zero(d * d, d * d);
  for (std::size_t k = 0; k < d; ++k)
    for (std::size_t l = 0; l < d; ++l)
      mu(std::size_t(g.image[k]) * d + g.image[l], k * d + l) =
          g.phase[k] * std::conj(g.phase[l]);
  return mu;
}

Superoperator monomial_superop(const MonomialGate& g) {
  return from_matrix_units(g.n_qubits, monomial_matrix_units(g));
}

}  // namespace twirlkit
