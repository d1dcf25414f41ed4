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

// Gate fidelity measures for a system-bath unitary. Conventions: system-major
// ordering (index = s * n_B + b), Utilde the final interaction-picture
// unitary, U_S the final nominal system unitary, W_S the target.

#include <optional>

#include "robustlimit/matrix_core.hpp"
#include "robustlimit/random.hpp"

namespace robustlimit {

/// |<psi| (W_S^dag U_S (x) I_B) Utilde |psi>|. Throws NotNormalized.
double state_fidelity(const ComplexMatrix& interaction, const ComplexMatrix& system_final,
                      const ComplexMatrix& target, const ComplexVector& psi);

/// |Tr(W_S^dag U_S) / n_S|.
double nominal_fidelity(const ComplexMatrix& system_final, const ComplexMatrix& target);

/// max(1 - ||Utilde - I||^2 / 2, 0).
double worst_case_lower_bound(const ComplexMatrix& interaction);
/// Same quantity through the eigenphases: max(min_k cos(w_k), 0). For a
/// unitary, the Hermitian part has eigenvalues cos(w_k).
double worst_case_lower_bound_eigenphase(const ComplexMatrix& interaction);

/// max(1 - ||Utilde - I||_F^2 / (2d), 0).
double average_lower_bound(const ComplexMatrix& interaction);
/// max(sum_k cos(w_k) / d, 0) = max(Re Tr(Utilde) / d, 0).
double average_lower_bound_eigenphase(const ComplexMatrix& interaction);

/// Worst case over all pure system-bath inputs:
/// min_psi |<psi| (W_S^dag U_S (x) I_B) Utilde |psi>|, via the numerical range.
double worst_case_exact(const ComplexMatrix& interaction, const ComplexMatrix& system_final,
                        const ComplexMatrix& target);

/// (W_S^dag U_S (x) I_B) Utilde.
ComplexMatrix effective_error_unitary(const ComplexMatrix& interaction,
                                      const ComplexMatrix& system_final,
                                      const ComplexMatrix& target);

struct NuclearFidelity {
  double value = 0.0;
  ComplexMatrix optimal_bath_unitary;
  ComplexMatrix block_trace;  // Gamma
};

/// Gamma = sum of the n_S diagonal n_B x n_B blocks of Utilde;
/// F_nuc = ||Gamma||_nuc / d with maximizer Phi_B = V_L V_R^dag.
NuclearFidelity nuclear_fidelity(const ComplexMatrix& interaction, Eigen::Index n_system,
                                 Eigen::Index n_bath);

struct FidelityReport {
  std::optional<double> state;
  double nominal = 0.0;
  double worst_case_exact = 0.0;
  double worst_case_low = 0.0;
  double average_low = 0.0;
  double nuclear = 0.0;
  std::optional<ComplexMatrix> optimal_bath_unitary;
};

FidelityReport fidelity_report(const ComplexMatrix& interaction,
                               const ComplexMatrix& system_final, const ComplexMatrix& target,
                               const std::optional<ComplexVector>& psi = std::nullopt);

struct MonteCarloEstimate {
  double mean = 0.0;
  double standard_error = 0.0;
  int samples = 0;
};

/// Haar average of |<psi|A|psi>| over pure states.
MonteCarloEstimate estimate_average_fidelity(const ComplexMatrix& a, int n_states, Rng& rng);

}  // namespace robustlimit
