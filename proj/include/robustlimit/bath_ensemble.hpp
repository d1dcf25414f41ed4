// Copyright 2026 The robustlimit Authors
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

// Random Pauli-sum baths for the single-qubit robust-gate example. A bath
// instance is H_B = sum_b h_b X_b with B = sum_b g_b X_b (commuting) or
// B = sum_b g_b Z_b (non-commuting), rescaled so ||T B|| and ||T H_B|| hit
// prescribed values exactly.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "robustlimit/bounds.hpp"
#include "robustlimit/matrix_core.hpp"
#include "robustlimit/model.hpp"
#include "robustlimit/serialization.hpp"

namespace robustlimit {

struct BathEnsembleSpec {
  int q_B = 2;
  bool commuting = true;
  double target_tb_norm = 0.15;  // ||T B||, radians
  double th_b_lo = 0.05;         // ||T H_B|| sweep, radians
  double th_b_hi = 2.0;
  int n_samples = 100;
  int n_norm_points = 8;
  double gate_time = 1.0;
  std::uint64_t seed = 1;

  /// Throws ValidationError (q_B in [1, 9], positive norms, lo < hi, counts > 0).
  void validate() const;
  /// n_norm_points uniformly spaced values in [lo, hi], endpoints included.
  std::vector<double> norm_points() const;
  nlohmann::json to_json() const;
};

struct BathInstance {
  ComplexMatrix bath_hamiltonian;  // H_B
  ComplexMatrix coupling;          // B
  std::vector<double> h;           // rescaled coefficients
  std::vector<double> g;
};

/// The coupling coefficients g depend only on (seed, sample_index), so a
/// given sample keeps the same B across the ||T H_B|| sweep.
BathInstance sample_bath(const BathEnsembleSpec& spec, int norm_point, int sample_index);

/// Omega_unc = sum_a ||S_a|| ||B_a||, Omega_avg = ||E[sum_a S~_a (x) (B~_a - B_a)]||,
/// Omega_avg_dev = max_k ||sum_a S~_a(t_k) (x) B~_a(t_k) - that average||.
/// These assume J_rbst = 0; throws PreconditionViolated when the controls'
/// J_rbst exceeds max_robustness.
UncertaintyBounds effective_uncertainty(const HamiltonianModel& model, const PwcControls& controls,
                                        int n_avg, double max_robustness = 1e-4);

enum class ExactWorstCase { Never, Always, BelowBound };

struct EvaluationOptions {
  int n_avg = 25;
  ExactWorstCase exact = ExactWorstCase::Always;
  int threads = 1;
  double max_robustness = 1e-4;
};

struct EvaluationRecord {
  int norm_point = 0;
  int sample_index = 0;
  int q_B = 0;
  bool commuting = true;
  double tb_norm = 0.0;
  double th_b_norm = 0.0;
  double t_omega_effective = 0.0;
  double bound_infidelity = 0.0;  // 1 - F_lb(t_omega_effective)
  double infidelity_wc_low = 0.0;
  std::optional<double> infidelity_wc_exact;
  std::vector<double> h;
  std::vector<double> g;
  std::optional<std::string> error;

  /// 1 - F_wc_exact exceeds the bound (only checkable when exact is present).
  bool violates_bound() const;
};

/// Sweeps every (norm point, sample) bath against fixed controls. Records are
/// independent and ordered by (norm_point, sample_index) regardless of the
/// thread count. Per-record numerical failures are stored in `error`.
std::vector<EvaluationRecord> evaluate_ensemble(const HamiltonianModel& model,
                                                const PwcControls& controls,
                                                const ComplexMatrix& target,
                                                const BathEnsembleSpec& spec,
                                                const EvaluationOptions& options = {});

/// mode, q_B, target_TB, TH_B, t_omega_bnd_rad, infid_wc_low, infid_wc_exact, seed.
CsvTable ensemble_table(const std::vector<EvaluationRecord>& records, const BathEnsembleSpec& spec);

/// Per-norm-point means and maxima plus the global violation count.
nlohmann::json ensemble_summary(const std::vector<EvaluationRecord>& records,
                                const BathEnsembleSpec& spec);

}  // namespace robustlimit
