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

#include "robustlimit/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "robustlimit/errors.hpp"
#include "robustlimit/fidelity.hpp"

namespace robustlimit {

bool UncertaintyBounds::consistent(double tol) const {
  return gate_time > 0.0 && omega_unc >= 0.0 && omega_avg >= 0.0 && omega_avg_dev >= 0.0 &&
         omega_avg <= omega_unc + tol && omega_avg_dev <= 2.0 * omega_unc + tol;
}

namespace {

ComplexMatrix average_coupling_term(const InteractionOps& ops, std::size_t a) {
  const auto d = ops.system_dim * ops.bath_dim;
  ComplexMatrix sum = ComplexMatrix::Zero(d, d);
  const auto n = ops.system[a].size();
  for (std::size_t k = 0; k < n; ++k) sum += kron(ops.system[a][k], ops.bath[a][k]);
  return sum / static_cast<double>(n);
}

}  // namespace

UncertaintyBounds measure_uncertainty(const HamiltonianModel& model,
                                      const PropagationResult& prop, const InteractionOps& ops) {
  const std::size_t n = prop.sample_times.size();
  if (n == 0 || (ops.n_samples() != 0 && ops.n_samples() != n)) {
    throw Error(ErrorKind::GridMismatch,
                "interaction samples do not match the propagation grid");
  }

  UncertaintyBounds u;
  u.gate_time = prop.gate_time;

  double coherent_max = 0.0;
  for (const auto& h : model.coherent_error) coherent_max = std::max(coherent_max, op_norm_hermitian(h));
  u.omega_unc = coherent_max;
  for (const auto& c : model.couplings) {
    u.omega_unc += op_norm_hermitian(c.system) * op_norm_hermitian(c.bath);
  }

  if (!ops.coherent.empty()) u.omega_avg += op_norm_hermitian(time_average(ops.coherent));
  for (std::size_t a = 0; a < ops.system.size(); ++a) {
    u.omega_avg += op_norm_hermitian(average_coupling_term(ops, a));
  }

  if (ops.n_samples() == 0) return u;
  std::vector<ComplexMatrix> h;
  h.reserve(n);
  for (std::size_t k = 0; k < n; ++k) h.push_back(ops.interaction_hamiltonian(k));
  const ComplexMatrix mean = time_average(h);
  for (const auto& hk : h) u.omega_avg_dev = std::max(u.omega_avg_dev, op_norm_hermitian(hk - mean));
  return u;
}

double infidelity_bound(double t_omega_bnd) {
  const double c = 0.25 * t_omega_bnd * t_omega_bnd;
  const double e = std::expm1(c);
  return std::min(0.5 * e * e, 1.0);
}

double fidelity_lower_bound(double t_omega_bnd) {
  const double c = 0.25 * t_omega_bnd * t_omega_bnd;
  const double e = std::expm1(c);
  return std::max(1.0 - 0.5 * e * e, 0.0);
}

BoundResult bound_from_t_omega(double t_omega_bnd) {
  BoundResult r;
  r.t_omega_bnd = t_omega_bnd;
  r.c_t = 0.25 * t_omega_bnd * t_omega_bnd;
  r.fidelity_lower_bound = fidelity_lower_bound(t_omega_bnd);
  r.infidelity_upper_bound = infidelity_bound(t_omega_bnd);
  r.saturated = t_omega_bnd > kPhysicalRangeRad;
  return r;
}

BoundResult effective_error_bound(const UncertaintyBounds& u) {
  const double t = u.gate_time;
  const double c = t * u.omega_avg + (t * u.omega_unc) * (t * u.omega_avg_dev) / 4.0;
  BoundResult r = bound_from_t_omega(2.0 * std::sqrt(c));
  r.c_t = c;
  return r;
}

double t_omega_for_infidelity(double eps) {
  if (!(eps > 0.0 && eps < 1.0)) {
    throw Error(ErrorKind::OutOfRange, "target infidelity must lie in (0, 1)");
  }
  return 2.0 * std::sqrt(std::log1p(std::sqrt(2.0 * eps)));
}

double invert_bound(double eps, double gate_time_s) {
  if (!(gate_time_s > 0.0)) throw Error(ErrorKind::OutOfRange, "gate time must be positive");
  return t_omega_for_infidelity(eps) / gate_time_s / (2.0 * std::numbers::pi);
}

std::vector<CurvePoint> bound_curve(double lo, double hi, int n_points) {
  if (!(lo > 0.0) || !(hi > lo) || hi > kPhysicalRangeRad || n_points < 2) {
    throw Error(ErrorKind::OutOfRange,
                "bound curve needs 0 < lo < hi <= 1.8776 rad and at least two points");
  }
  std::vector<CurvePoint> out;
  out.reserve(static_cast<std::size_t>(n_points));
  for (int i = 0; i < n_points; ++i) {
    const double t = lo + (hi - lo) * i / (n_points - 1);
    out.push_back({t, infidelity_bound(t)});
  }
  return out;
}

std::vector<FrequencyCurvePoint> bound_curve_frequency(const std::vector<double>& gate_times_ns,
                                                       int n_points) {
  if (gate_times_ns.empty() || n_points < 1) {
    throw Error(ErrorKind::OutOfRange, "need at least one gate time and one point");
  }
  std::vector<FrequencyCurvePoint> out;
  for (double t_ns : gate_times_ns) {
    if (!(t_ns > 0.0)) throw Error(ErrorKind::OutOfRange, "gate times must be positive");
    const double t_s = t_ns * 1e-9;
    for (int i = 1; i <= n_points; ++i) {
      const double t_omega = kPhysicalRangeRad * i / n_points;
      out.push_back({t_omega / t_s / (2.0 * std::numbers::pi), infidelity_bound(t_omega), t_ns});
    }
  }
  return out;
}

BoundResult minimum_uncertainty_corollary(const HamiltonianModel& model,
                                          const PropagationResult& prop,
                                          const InteractionOps& ops, const ComplexMatrix& target,
                                          double tolerance) {
  const double f_nom = nominal_fidelity(prop.system_final, target);
  if (f_nom < 1.0 - tolerance) {
    throw Error(ErrorKind::PreconditionViolated,
                "nominal fidelity " + std::to_string(f_nom) + " is below 1 - tolerance");
  }
  if (!ops.coherent.empty()) {
    const double avg = op_norm_hermitian(time_average(ops.coherent));
    if (avg > tolerance) {
      throw Error(ErrorKind::PreconditionViolated,
                  "time-averaged coherent error norm " + std::to_string(avg) + " exceeds tolerance");
    }
  }
  for (std::size_t a = 0; a < ops.system.size(); ++a) {
    const double avg = op_norm_hermitian(average_coupling_term(ops, a));
    if (avg > tolerance) {
      throw Error(ErrorKind::PreconditionViolated,
                  "time-averaged coupling term " + std::to_string(a) + " has norm " +
                      std::to_string(avg) + " above tolerance");
    }
  }
  double coherent_max = 0.0;
  for (const auto& h : model.coherent_error) coherent_max = std::max(coherent_max, op_norm_hermitian(h));
  double omega_unc = coherent_max;
  for (const auto& c : model.couplings) {
    omega_unc += op_norm_hermitian(c.system) * op_norm_hermitian(c.bath);
  }
  return bound_from_t_omega(prop.gate_time * omega_unc);
}

double average_case_bound(const UncertaintyBounds& u, double kappa, Eigen::Index d) {
  if (!(kappa >= 1.0)) throw Error(ErrorKind::OutOfRange, "kappa must be at least 1");
  if (d < 1) throw Error(ErrorKind::OutOfRange, "dimension must be positive");
  const double t = u.gate_time;
  const double c = t * u.omega_avg + (t * u.omega_unc) * (t * u.omega_avg_dev) / 4.0;
  const double e = std::expm1(kappa * c);
  return std::max(1.0 - e * e / (2.0 * static_cast<double>(d)), 0.0);
}

double average_case_bound(const UncertaintyBounds& u, Eigen::Index d) {
  return average_case_bound(u, static_cast<double>(d), d);
}

AntiHermitianInverseCheck anti_hermitian_inverse_check(const ComplexMatrix& k) {
  if (k.rows() != k.cols() || op_norm(k + k.adjoint()) > 1e-10) {
    throw Error(ErrorKind::NotAntiHermitian, "K + K^dag is not zero");
  }
  const auto d = k.rows();
  const ComplexMatrix inv = (ComplexMatrix::Identity(d, d) + k).partialPivLu().inverse();
  AntiHermitianInverseCheck r;
  r.op_norm = op_norm(inv);
  r.frobenius_norm = inv.norm();
  // Round-off slack only; both bounds are attained at K = 0.
  r.op_bound_ok = r.op_norm <= 1.0 + 1e-12;
  r.frob_bound_ok = r.frobenius_norm <= std::sqrt(static_cast<double>(d)) * (1.0 + 1e-12);
  return r;
}

std::vector<double> averaging_remainder_norms(const InteractionOps& ops, double gate_time) {
  const std::size_t n = ops.n_samples();
  if (n == 0) throw Error(ErrorKind::EmptyInput, "no interaction samples");
  const double dt = gate_time / static_cast<double>(n);
  std::vector<ComplexMatrix> h;
  h.reserve(n);
  for (std::size_t k = 0; k < n; ++k) h.push_back(ops.interaction_hamiltonian(k));
  const ComplexMatrix mean = time_average(h);
  std::vector<double> out{0.0};
  ComplexMatrix acc = ComplexMatrix::Zero(mean.rows(), mean.cols());
  for (const auto& hk : h) {
    acc += (hk - mean) * dt;
    out.push_back(op_norm_hermitian(acc));
  }
  return out;
}

}  // namespace robustlimit
