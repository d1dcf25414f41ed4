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

// Robust PWC control search. The nominal objective is the squared overlap
//   F_nom(v) = |Tr(W_S^dag U_S(T)) / n_S|^2
// and the robustness objective is the largest operator norm of the
// time-averaged interaction-picture coupling operators
//   J_rbst(v) = max_a || E[U_S^dag S_a U_S] ||
// on the averaging grid. Both come with exact gradients.

#include <cstdint>
#include <vector>

#include <json.hpp>

#include "robustlimit/matrix_core.hpp"
#include "robustlimit/model.hpp"
#include "robustlimit/propagation.hpp"

namespace robustlimit {

struct OptimizerConfig {
  double lambda = 0.1;
  double f0 = 0.9999;
  double v_max = 7.5;
  int n_restarts = 20;
  int max_iters = 4000;
  int n_avg = kDefaultAveragingSamples;
  /// Stop a restart when the search objective drops below this value.
  double objective_tolerance = 1e-16;
  /// Stop a restart when the projected step falls below this length.
  double step_tolerance = 1e-13;
  double armijo = 1e-4;
  double penalty = 1e4;
  std::uint64_t seed = 1;
  int threads = 1;

  /// Throws ValidationError (f0 in [0, 1], v_max > 0, lambda >= 0, counts > 0).
  void validate() const;
  nlohmann::json to_json() const;
  /// Missing keys keep their defaults.
  static OptimizerConfig from_json(const nlohmann::json& j);
};

struct ObjectiveValue {
  double value = 0.0;
  std::vector<double> gradient;  // channel-major, same layout as PwcControls::flatten
};

/// Squared nominal overlap fidelity and its gradient.
ObjectiveValue objective_nominal(const HamiltonianModel& model, const ComplexMatrix& target,
                                 const PwcControls& controls);

/// J_rbst (true operator norm) and its gradient.
ObjectiveValue objective_robust(const HamiltonianModel& model, const PwcControls& controls,
                                int n_avg);

/// Smooth surrogate used during line search: (1/2) sum_a ||E[U_S^dag S_a U_S]||_F^2.
/// Equals J_rbst^2 for a single traceless qubit operator.
ObjectiveValue objective_robust_surrogate(const HamiltonianModel& model,
                                          const PwcControls& controls, int n_avg);

/// System operators whose interaction-frame averages J_rbst penalizes.
std::vector<ComplexMatrix> robustness_terms(const HamiltonianModel& model);

struct ControlMetrics {
  double nominal_fidelity = 0.0;  // squared overlap
  double robustness = 0.0;        // J_rbst
};

ControlMetrics evaluate_controls(const HamiltonianModel& model, const ComplexMatrix& target,
                                 const PwcControls& controls, int n_avg);

struct OptimizationOutcome {
  PwcControls controls;
  double nominal_fidelity = 0.0;  // squared overlap
  double robustness = 0.0;        // J_rbst
  double objective = 0.0;         // reported objective for the chosen strategy
  std::vector<double> trace;      // search objective per iteration, winning restart
  int restart_index = -1;
  bool converged = false;
  int iterations = 0;
};

/// Best of restarts for min 1 - F_nom + lambda J_rbst, |v| <= v_max.
OptimizationOutcome optimize_single_stage(const HamiltonianModel& model,
                                          const ComplexMatrix& target, const PwcControls& layout,
                                          const OptimizerConfig& config);

/// Stage 1 raises F_nom to f0; stage 2 minimizes J_rbst subject to
/// F_nom >= f0 through the penalty w (1 - F_nom), raising w up to
/// config.penalty until feasible. Throws StageOneFailed when no restart
/// reaches f0 - 1e-12.
OptimizationOutcome optimize_two_stage(const HamiltonianModel& model,
                                       const ComplexMatrix& target, const PwcControls& layout,
                                       const OptimizerConfig& config);

struct NullspaceCertificate {
  double residual = 0.0;          // || A vec(X) ||_2
  double averaged_op_norm = 0.0;  // || unvec(A vec(X)) ||
  ComplexMatrix averaged_operator;
};

/// A = E[U_S(t)^T (x) U_S(t)^dag] on the averaging grid, applied to the
/// column-stacked vec(X). By vec(ABC) = (C^T (x) A) vec(B) this is
/// vec(E[U_S^dag X U_S]).
NullspaceCertificate nullspace_check(const HamiltonianModel& model, const PwcControls& controls,
                                     int n_avg, const ComplexMatrix& x);

nlohmann::json outcome_to_json(const OptimizationOutcome& outcome, const OptimizerConfig& config,
                               double nullspace_residual);

}  // namespace robustlimit
