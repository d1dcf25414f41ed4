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

// Robust performance limit: given bounds on the size of the uncertain
// Hamiltonian, its time-averaged interaction-picture part and the deviation
// from that average, the final-time interaction unitary satisfies
//   ||Utilde(T) - I|| <= exp(c(T)) - 1,
//   c(T) = T*Omega_avg + (T*Omega_unc)(T*Omega_avg_dev) / 4 = (T*Omega_bnd / 2)^2,
// so that every worst-case fidelity is at least
//   F_lb = max(1 - (exp((T*Omega_bnd/2)^2) - 1)^2 / 2, 0).

#include <cmath>
#include <numbers>
#include <vector>

#include "robustlimit/matrix_core.hpp"
#include "robustlimit/model.hpp"
#include "robustlimit/propagation.hpp"

namespace robustlimit {

/// 2 sqrt(ln(1 + sqrt 2)) ~= 1.8776 rad: beyond this F_lb is clamped to zero.
inline const double kPhysicalRangeRad = 2.0 * std::sqrt(std::log(1.0 + std::numbers::sqrt2));

struct UncertaintyBounds {
  double gate_time = 1.0;
  double omega_unc = 0.0;
  double omega_avg = 0.0;
  double omega_avg_dev = 0.0;

  /// Nonnegativity and omega_avg <= omega_unc, omega_avg_dev <= 2 omega_unc
  /// (each up to `tol`).
  bool consistent(double tol = 1e-9) const;
};

struct BoundResult {
  double t_omega_bnd = 0.0;  // radians
  double c_t = 0.0;
  double fidelity_lower_bound = 1.0;
  double infidelity_upper_bound = 0.0;
  bool saturated = false;
};

/// Omega_unc, Omega_avg and Omega_avg_dev measured on the averaging grid.
UncertaintyBounds measure_uncertainty(const HamiltonianModel& model,
                                      const PropagationResult& prop, const InteractionOps& ops);

/// 1 - F_lb as a function of T*Omega_bnd alone (clamped to [0, 1]).
double infidelity_bound(double t_omega_bnd);
double fidelity_lower_bound(double t_omega_bnd);

BoundResult bound_from_t_omega(double t_omega_bnd);
BoundResult effective_error_bound(const UncertaintyBounds& u);

/// Omega_bnd / 2pi in Hz that makes 1 - F_lb equal `target_infidelity` for a
/// gate of `gate_time_s` seconds. Throws OutOfRange unless 0 < eps < 1.
double invert_bound(double target_infidelity, double gate_time_s);
/// T*Omega_bnd (rad) at which 1 - F_lb = eps.
double t_omega_for_infidelity(double target_infidelity);

struct CurvePoint {
  double t_omega_rad = 0.0;
  double infidelity = 0.0;
};

/// n_points uniformly spaced on [lo, hi] within (0, 1.8776]; OutOfRange otherwise.
std::vector<CurvePoint> bound_curve(double lo, double hi, int n_points);

struct FrequencyCurvePoint {
  double omega_hz = 0.0;  // Omega_bnd / 2pi
  double infidelity = 0.0;
  double gate_time_ns = 0.0;
};

/// For each gate time, the bound against Omega_bnd / 2pi from zero up to the
/// physical range (n_points per gate time, first point excluded at zero).
std::vector<FrequencyCurvePoint> bound_curve_frequency(const std::vector<double>& gate_times_ns,
                                                       int n_points);

/// When F_nom = 1 and every time-averaged interaction term vanishes, the
/// bound collapses to the intrinsic uncertainty T*Omega_unc. Throws
/// PreconditionViolated naming the offending quantity otherwise.
BoundResult minimum_uncertainty_corollary(const HamiltonianModel& model,
                                          const PropagationResult& prop,
                                          const InteractionOps& ops, const ComplexMatrix& target,
                                          double tolerance = 1e-6);

/// Frobenius-norm (average-case) variant
///   max(1 - (exp(kappa c(T)) - 1)^2 / (2d), 0), kappa >= 1.
/// Known to be loose; the worst-case form above is the one used for F_lb.
double average_case_bound(const UncertaintyBounds& u, double kappa, Eigen::Index d);
/// kappa defaults to d.
double average_case_bound(const UncertaintyBounds& u, Eigen::Index d);

struct AntiHermitianInverseCheck {
  double op_norm = 0.0;
  double frobenius_norm = 0.0;
  bool op_bound_ok = false;    // ||(I+K)^-1|| <= 1
  bool frob_bound_ok = false;  // ||(I+K)^-1||_F <= sqrt(d)
};

/// Throws NotAntiHermitian unless ||K + K^dag|| <= 1e-10.
AntiHermitianInverseCheck anti_hermitian_inverse_check(const ComplexMatrix& k);

/// ||K(t_j)|| for the discrete averaging remainder
/// K(t_j) = sum_{i <= j} (Htilde(t_i) - E[Htilde]) dt at each cell boundary
/// t_j = j dt, j = 0..N_avg.
std::vector<double> averaging_remainder_norms(const InteractionOps& ops, double gate_time);

}  // namespace robustlimit
