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

#include "robustlimit/fidelity.hpp"

#include <algorithm>
#include <cmath>

#include "robustlimit/errors.hpp"

namespace robustlimit {

namespace {

void require_square_match(const ComplexMatrix& a, const ComplexMatrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorKind::DimensionMismatch, what);
  }
}

ComplexMatrix deviation_from_identity(const ComplexMatrix& u) {
  return u - ComplexMatrix::Identity(u.rows(), u.cols());
}

Eigen::Index bath_dim_for(const ComplexMatrix& interaction, const ComplexMatrix& system) {
  const auto n_s = system.rows();
  if (n_s == 0 || interaction.rows() % n_s != 0) {
    throw Error(ErrorKind::DimensionMismatch,
                "interaction unitary dimension is not a multiple of n_S");
  }
  return interaction.rows() / n_s;
}

}  // namespace

double nominal_fidelity(const ComplexMatrix& system_final, const ComplexMatrix& target) {
  require_square_match(system_final, target, "nominal fidelity: U_S and W_S differ in shape");
  const double n = static_cast<double>(target.rows());
  return std::min(1.0, std::abs((target.adjoint() * system_final).trace()) / n);
}

ComplexMatrix effective_error_unitary(const ComplexMatrix& interaction,
                                      const ComplexMatrix& system_final,
                                      const ComplexMatrix& target) {
  require_square_match(system_final, target, "U_S and W_S differ in shape");
  const auto n_b = bath_dim_for(interaction, system_final);
  return kron(target.adjoint() * system_final, ComplexMatrix::Identity(n_b, n_b)) * interaction;
}

double state_fidelity(const ComplexMatrix& interaction, const ComplexMatrix& system_final,
                      const ComplexMatrix& target, const ComplexVector& psi) {
  if (psi.size() != interaction.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "input state dimension differs from d");
  }
  if (std::abs(psi.norm() - 1.0) > Tolerances::normalization) {
    throw Error(ErrorKind::NotNormalized, "input state is not unit norm");
  }
  const ComplexMatrix a = effective_error_unitary(interaction, system_final, target);
  return std::min(1.0, std::abs(psi.dot(a * psi)));
}

double worst_case_lower_bound(const ComplexMatrix& interaction) {
  require_unitary(interaction, "Utilde");
  const double e = op_norm(deviation_from_identity(interaction));
  return std::max(1.0 - 0.5 * e * e, 0.0);
}

double worst_case_lower_bound_eigenphase(const ComplexMatrix& interaction) {
  require_unitary(interaction, "Utilde");
  const RealVector cosines = eigenvalues_hermitian(hermitian_part(interaction));
  return std::max(cosines(0), 0.0);
}

double average_lower_bound(const ComplexMatrix& interaction) {
  require_unitary(interaction, "Utilde");
  const double d = static_cast<double>(interaction.rows());
  const double e = deviation_from_identity(interaction).squaredNorm();
  return std::max(1.0 - e / (2.0 * d), 0.0);
}

double average_lower_bound_eigenphase(const ComplexMatrix& interaction) {
  require_unitary(interaction, "Utilde");
  const double d = static_cast<double>(interaction.rows());
  return std::max(interaction.trace().real() / d, 0.0);
}

double worst_case_exact(const ComplexMatrix& interaction, const ComplexMatrix& system_final,
                        const ComplexMatrix& target) {
  require_unitary(interaction, "Utilde");
  require_unitary(system_final, "U_S(T)");
  require_unitary(target, "W_S");
  return std::min(1.0, numerical_range_distance(
                           effective_error_unitary(interaction, system_final, target)));
}

NuclearFidelity nuclear_fidelity(const ComplexMatrix& interaction, Eigen::Index n_system,
                                 Eigen::Index n_bath) {
  const auto d = n_system * n_bath;
  if (interaction.rows() != d || interaction.cols() != d) {
    throw Error(ErrorKind::DimensionMismatch, "Utilde dimension differs from n_S * n_B");
  }
  NuclearFidelity out;
  out.block_trace = ComplexMatrix::Zero(n_bath, n_bath);
  for (Eigen::Index s = 0; s < n_system; ++s) {
    out.block_trace += interaction.block(s * n_bath, s * n_bath, n_bath, n_bath);
  }
  const auto dec = svd(out.block_trace);
  out.value = std::min(1.0, dec.singular_values.sum() / static_cast<double>(d));
  out.optimal_bath_unitary = dec.left * dec.right.adjoint();
  return out;
}

FidelityReport fidelity_report(const ComplexMatrix& interaction,
                               const ComplexMatrix& system_final, const ComplexMatrix& target,
                               const std::optional<ComplexVector>& psi) {
  FidelityReport r;
  if (psi) r.state = state_fidelity(interaction, system_final, target, *psi);
  r.nominal = nominal_fidelity(system_final, target);
  r.worst_case_exact = worst_case_exact(interaction, system_final, target);
  r.worst_case_low = worst_case_lower_bound(interaction);
  r.average_low = average_lower_bound(interaction);
  const auto n_s = system_final.rows();
  auto nuc = nuclear_fidelity(interaction, n_s, interaction.rows() / n_s);
  r.nuclear = nuc.value;
  r.optimal_bath_unitary = std::move(nuc.optimal_bath_unitary);
  return r;
}

MonteCarloEstimate estimate_average_fidelity(const ComplexMatrix& a, int n_states, Rng& rng) {
  if (n_states < 2) throw Error(ErrorKind::OutOfRange, "need at least two samples");
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int i = 0; i < n_states; ++i) {
    const ComplexVector psi = random_state(a.rows(), rng);
    const double f = std::abs(psi.dot(a * psi));
    sum += f;
    sum_sq += f * f;
  }
  const double n = static_cast<double>(n_states);
  const double mean = sum / n;
  const double var = std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0));
  return {mean, std::sqrt(var / n), n_states};
}

}  // namespace robustlimit
