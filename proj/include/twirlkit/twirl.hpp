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
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "twirlkit/cru_group.hpp"
#include "twirlkit/cxd_group.hpp"
#include "twirlkit/monomial.hpp"
#include "twirlkit/superop.hpp"

namespace twirlkit {

enum class TwirlMethod { Exact, MonteCarlo };

using BlockPartition = std::vector<std::vector<std::size_t>>;

struct TwirlReport {
  Superoperator twirled;
  BlockPartition block_partition;
  double max_offblock = 0.0;
  /// Largest deviation of a block from (mean diagonal) * identity.
  double max_block_deviation = 0.0;
  std::optional<double> commutator_norm_with_target;
  TwirlMethod method = TwirlMethod::Exact;
  std::size_t samples = 0;
  double threshold = 0.0;
};

/// Structured average over X' x| L in the matrix-unit basis.
Superoperator twirl_exact(const Superoperator& chan, const SemidirectGroup& grp);
Superoperator twirl_exact(const Superoperator& chan, const CnzmGroup& grp);
/// Diagonal subgroup summed element by element, then one coset
/// representative per permutation part.
Superoperator twirl_exact(const Superoperator& chan, const ClosureGroup& grp);

/// Literal (1/|S|) sum of g L g^dag over the listed gates; no group structure assumed.
Superoperator twirl_over(const Superoperator& chan, std::span<const MonomialGate> gates);
Superoperator twirl_over(const Superoperator& chan, std::span<const CruElement> elements);
Superoperator twirl_over(const Superoperator& chan, std::span<const AffinePhaseElement> elements);

using GateSampler = std::function<MonomialGate(std::mt19937_64&)>;

struct TwirlEstimate {
  Superoperator mean;
  /// Per-entry standard error of the mean from batch means.
  Eigen::MatrixXd std_error;
  std::size_t samples = 0;
};

/**
 * Monte-Carlo twirl. Gates are drawn sequentially from rng; the average is
 * accumulated in fixed-size chunks and tree-summed, so the result does not
 * depend on the thread count.
 */
TwirlEstimate twirl_monte_carlo(const Superoperator& chan, const GateSampler& sampler,
                                std::size_t samples, std::mt19937_64& rng, int threads = 1);

GateSampler sampler_for(const SemidirectGroup& grp);
GateSampler sampler_for(const ClosureGroup& grp);
GateSampler cxd_sampler(int n_qubits, int kprime);

/**
 * Partition of the Pauli basis: indices joined when an entry between them
 * exceeds tol in magnitude or when their diagonal entries agree within tol.
 */
TwirlReport diagonality_report(const Superoperator& twirled, double tol = 1e-9);
/// Measures a given partition instead of detecting one.
TwirlReport diagonality_report(const Superoperator& twirled, const BlockPartition& partition);

/// Canonical ordering so partitions from different channels compare equal.
BlockPartition normalized_partition(BlockPartition p);

struct MultiplicityEvidence {
  double max_commutator = 0.0;
  double commutant_dimension = 0.0;
  bool commutant_exact = false;
  int trials = 0;
};

MultiplicityEvidence multiplicity_free_evidence(const SemidirectGroup& grp, int trials,
                                                std::mt19937_64& rng);
MultiplicityEvidence multiplicity_free_evidence(const ClosureGroup& grp, int trials,
                                                std::mt19937_64& rng);

/// ||U L - L U||_F.
double commutation_with_target(const Superoperator& twirled, const Superoperator& target);

/// (1/4^N) sum_P (-1)^{<P,sigma>} P(.)P, the Liouville projector onto sigma.
Superoperator pauli_character_projector(const PauliOp& sigma);

Superoperator target_superop(const CruElement& target);

enum class SequenceMode { Expectation, Sampled };

/**
 * Expectation: U^{dag m} (U L_G)^m. Sampled: one realization of
 * G_inv U L G_m ... U L G_1 with G_inv from group arithmetic.
 */
Superoperator sequence_channel(const Superoperator& chan, const CruElement& target,
                               const SemidirectGroup& grp, int depth, SequenceMode mode,
                               std::mt19937_64& rng);

struct LowerBoundCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  double max_offdiagonal = 0.0;
};

/// lhs = sum_i (M_ii)^{1/m} with M = U^{dag m} (U L_G)^m, rhs = tr(L).
LowerBoundCheck fidelity_lower_bound_check(const Superoperator& chan, const CruElement& target,
                                           const SemidirectGroup& grp, int m,
                                           double tol = 1e-9);

/// Sum in pairwise order (deterministic for a fixed input order).
Eigen::MatrixXcd tree_sum(std::vector<Eigen::MatrixXcd> parts);

}  // namespace twirlkit
