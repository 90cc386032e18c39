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
#include <string>
#include <vector>

#include "twirlkit/cru_group.hpp"
#include "twirlkit/cxd_group.hpp"
#include "twirlkit/fit.hpp"
#include "twirlkit/monomial.hpp"
#include "twirlkit/noise.hpp"
#include "twirlkit/superop.hpp"

namespace twirlkit {

enum class RBGroupKind { Optimal, OptimalS, Cxd };
enum class RBProcedure { Ours, CXDn, CXDt };

const char* to_string(RBGroupKind g);
const char* to_string(RBProcedure p);
RBGroupKind parse_group_kind(const std::string& s);
RBProcedure parse_procedure(const std::string& s);

/**
 * One benchmarking experiment on the C^nZ_m target. A depth counts U U^dag
 * pairs, so a sequence of depth m holds 2m twirling gates and 2m target
 * applications.
 */
struct RBConfig {
  int n = 1;
  int m = 4;
  RBGroupKind group = RBGroupKind::OptimalS;
  RBProcedure procedure = RBProcedure::Ours;
  std::vector<int> depths;
  std::vector<int> seqs_per_depth;  ///< one entry, or one per depth
  int shots = 0;                    ///< 0 means exact expectations
  NoiseModel noise;
  std::uint64_t seed = 0;
  int threads = 0;
  int kprime = 0;  ///< CXD phase resolution; 0 picks the default

  int n_qubits() const { return n + 1; }
  int sequences_at(std::size_t depth_index) const;
  void validate() const;
};

struct RBSequence {
  int depth = 0;
  std::vector<MonomialGate> twirls;  ///< 2*depth gates in time order
  MonomialGate inverse;
  std::string inverse_label;
};

/// Twirling group, target and noisy target channels of one experiment.
class RBEngine {
 public:
  RBEngine(const RBConfig& cfg, RBGroupKind group);

  int n_qubits() const { return n_qubits_; }
  RBGroupKind group() const { return kind_; }
  const MonomialGate& target() const { return target_gate_; }
  const Superoperator& noise() const { return noise_; }
  const std::vector<double>& spam() const { return spam_; }

  RBSequence gen_sequence(int depth, std::mt19937_64& rng) const;
  /// Expectations tr(Q_k rho) for the 2^N observables of the basis.
  std::vector<double> simulate(const RBSequence& seq, Basis basis, int shots,
                               std::mt19937_64* rng) const;
  std::vector<double> simulate(const RBSequence& seq, const DenseOperator& rho0, Basis basis,
                               int shots, std::mt19937_64* rng) const;
  /// Evolves each column of v, a row-major vectorized density matrix.
  void evolve_states(const RBSequence& seq, Eigen::MatrixXcd& v) const;

 private:
  int n_qubits_;
  RBGroupKind kind_;
  std::optional<SemidirectGroup> cru_group_;
  CruElement cru_target_;
  int kprime_ = 1;
  AffinePhaseElement cxd_target_;
  MonomialGate target_gate_;
  Superoperator noise_;
  std::vector<double> spam_;
  Eigen::MatrixXcd noisy_u_;
  Eigen::MatrixXcd noisy_udag_;
};

RBSequence gen_sequence(const RBConfig& cfg, int depth, std::mt19937_64& rng);

/**
 * Density-matrix run of a sequence: noisy targets U L and U^dag L, ideal
 * twirling gates, rho0 as the prepared state. With shots > 0 the
 * expectations are estimated from that many computational-basis (or
 * Hadamard-rotated) measurement outcomes.
 */
std::vector<double> simulate_sequence(const RBSequence& seq, const MonomialGate& target,
                                      const Superoperator& noise, const DenseOperator& rho0,
                                      Basis basis, int shots = 0,
                                      std::mt19937_64* rng = nullptr);

/// Unitary of the noiseless sequence including the inverse.
DenseOperator ideal_sequence_unitary(const RBSequence& seq, const MonomialGate& target);

/// (sum lz + 2^N (sum lx - 1)) / 4^N; the identity entries are 1.
double fidelity_from_decays(std::span<const double> lz, std::span<const double> lx,
                            int n_qubits);

/// (1 + (2^N - 1) pz + (4^N - 2^N) px) / 4^N.
double fidelity_from_blocks(double pz, double px, int n_qubits);

struct ObservableSeries {
  std::string label;
  std::vector<double> mean;
  std::vector<double> stderr_;
  DecayFit fit;
  double lambda_gate = 0.0;  ///< per-target-gate decay, sqrt of the pair decay
};

struct RBResult {
  RBProcedure procedure = RBProcedure::Ours;
  RBGroupKind group = RBGroupKind::OptimalS;
  std::vector<int> depths;
  std::vector<ObservableSeries> z;
  std::vector<ObservableSeries> x;
  double fidelity_estimate = 0.0;
  double truth = 0.0;
  bool fits_ok = true;
  RBConfig config;
};

/// Per-depth sequence averages of one group's simulations.
struct RBData {
  RBGroupKind group = RBGroupKind::OptimalS;
  std::vector<int> depths;
  std::vector<std::vector<double>> mean_z, se_z, mean_x, se_x;
  std::vector<double> surv_z, surv_z_se, surv_x, surv_x_se;
};

RBData simulate_experiment(const RBConfig& cfg, RBGroupKind group);
RBResult estimate(const RBConfig& cfg, RBProcedure procedure, const RBData& data);
RBResult run_protocol(const RBConfig& cfg);
/// OURS, CXDn and CXDt on the same noise; the CXD runs share simulations.
std::vector<RBResult> run_comparison(const RBConfig& cfg);

}  // namespace twirlkit
