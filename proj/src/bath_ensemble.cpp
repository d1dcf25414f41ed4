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

#include "robustlimit/bath_ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "robustlimit/errors.hpp"
#include "robustlimit/fidelity.hpp"
#include "robustlimit/optimizer.hpp"
#include "robustlimit/parallel.hpp"
#include "robustlimit/propagation.hpp"
#include "robustlimit/random.hpp"

namespace robustlimit {

using nlohmann::json;

void BathEnsembleSpec::validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorKind::ValidationError, msg); };
  if (q_B < 1 || q_B > 9) fail("q_B: must be in [1, 9]");
  if (!(target_tb_norm > 0.0)) fail("target_TB_norm: must be positive");
  if (!(th_b_lo > 0.0 && th_b_lo < th_b_hi)) fail("TH_B_norm_range: need 0 < lo < hi");
  if (n_samples < 1) fail("n_samples: must be positive");
  if (n_norm_points < 1) fail("n_norm_points: must be positive");
  if (!(gate_time > 0.0)) fail("gate_time: must be positive");
}

std::vector<double> BathEnsembleSpec::norm_points() const {
  if (n_norm_points == 1) return {th_b_lo};
  std::vector<double> out;
  for (int i = 0; i < n_norm_points; ++i) {
    out.push_back(th_b_lo + (th_b_hi - th_b_lo) * i / (n_norm_points - 1));
  }
  return out;
}

json BathEnsembleSpec::to_json() const {
  return {{"q_B", q_B},
          {"commuting", commuting},
          {"target_TB_norm", target_tb_norm},
          {"TH_B_norm_range", {th_b_lo, th_b_hi}},
          {"n_samples", n_samples},
          {"n_norm_points", n_norm_points},
          {"T", gate_time},
          {"seed", seed}};
}

namespace {

constexpr std::uint64_t kCouplingStream = 1;
constexpr std::uint64_t kBathStream = 2;

std::vector<double> uniform_coefficients(int n, Rng& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> out(static_cast<std::size_t>(n));
  for (double& v : out) v = u(rng);
  return out;
}

// Pauli sum with the coefficients rescaled so the operator norm is `norm`.
ComplexMatrix scaled_pauli_sum(std::vector<double>& coeffs, const ComplexMatrix& pauli,
                               double norm) {
  const int q = static_cast<int>(coeffs.size());
  const auto dim = Eigen::Index{1} << q;
  ComplexMatrix sum = ComplexMatrix::Zero(dim, dim);
  for (int b = 0; b < q; ++b) sum += coeffs[static_cast<std::size_t>(b)] * pauli::embed(pauli, b, q);
  const double realized = op_norm_hermitian(sum);
  if (realized == 0.0) {
    // Measure-zero draw; fall back to equal weights.
    std::fill(coeffs.begin(), coeffs.end(), norm / q);
    return scaled_pauli_sum(coeffs, pauli, norm);
  }
  const double scale = norm / realized;
  for (double& c : coeffs) c *= scale;
  return sum * scale;
}

ComplexMatrix average_of(const std::vector<ComplexMatrix>& xs) { return time_average(xs); }

UncertaintyBounds uncertainty_from(const HamiltonianModel& model, const PropagationResult& prop,
                                   const InteractionOps& ops) {
  UncertaintyBounds u;
  u.gate_time = prop.gate_time;
  const std::size_t n = ops.n_samples();
  const auto d = model.total_dim();
  const auto n_b = model.bath_dim();

  double coherent_max = 0.0;
  for (const auto& h : model.coherent_error) coherent_max = std::max(coherent_max, op_norm_hermitian(h));
  u.omega_unc = coherent_max;
  for (const auto& c : model.couplings) {
    u.omega_unc += op_norm_hermitian(c.system) * op_norm_hermitian(c.bath);
  }

  // Instantaneous sum_a S~ (x) B~ and its average with B~ replaced by B~ - B.
  std::vector<ComplexMatrix> inst(n, ComplexMatrix::Zero(d, d));
  ComplexMatrix mean = ComplexMatrix::Zero(d, d);
  const ComplexMatrix id_b = ComplexMatrix::Identity(n_b, n_b);
  for (std::size_t k = 0; k < n; ++k) {
    if (!ops.coherent.empty()) inst[k] += kron(ops.coherent[k], id_b);
    for (std::size_t a = 0; a < ops.system.size(); ++a) {
      inst[k] += kron(ops.system[a][k], ops.bath[a][k]);
    }
  }
  if (!ops.coherent.empty()) mean += kron(average_of(ops.coherent), id_b);
  for (std::size_t a = 0; a < ops.system.size(); ++a) {
    const auto& b = model.couplings[a].bath;
    ComplexMatrix term = ComplexMatrix::Zero(d, d);
    for (std::size_t k = 0; k < n; ++k) term += kron(ops.system[a][k], ops.bath[a][k] - b);
    mean += term / static_cast<double>(n);
  }
  u.omega_avg = op_norm_hermitian(mean);
  for (const auto& h : inst) u.omega_avg_dev = std::max(u.omega_avg_dev, op_norm_hermitian(h - mean));
  return u;
}

void require_robust(const HamiltonianModel& model, const PwcControls& controls, int n_avg,
                    double max_robustness) {
  const double j = objective_robust(model, controls, n_avg).value;
  if (j > max_robustness) {
    throw Error(ErrorKind::PreconditionViolated,
                "J_rbst = " + format_double(j) + " exceeds " + format_double(max_robustness) +
                    "; the effective bound assumes robust controls");
  }
}

}  // namespace

BathInstance sample_bath(const BathEnsembleSpec& spec, int norm_point, int sample_index) {
  spec.validate();
  const auto points = spec.norm_points();
  if (norm_point < 0 || norm_point >= static_cast<int>(points.size())) {
    throw Error(ErrorKind::OutOfRange, "norm_point index out of range");
  }
  Rng g_rng = make_stream(spec.seed, {kCouplingStream, static_cast<std::uint64_t>(sample_index)});
  Rng h_rng = make_stream(spec.seed, {kBathStream, static_cast<std::uint64_t>(norm_point),
                                      static_cast<std::uint64_t>(sample_index)});
  BathInstance out;
  out.g = uniform_coefficients(spec.q_B, g_rng);
  out.h = uniform_coefficients(spec.q_B, h_rng);
  const double t = spec.gate_time;
  out.coupling = scaled_pauli_sum(out.g, spec.commuting ? pauli::x() : pauli::z(),
                                  spec.target_tb_norm / t);
  out.bath_hamiltonian =
      scaled_pauli_sum(out.h, pauli::x(), points[static_cast<std::size_t>(norm_point)] / t);
  return out;
}

UncertaintyBounds effective_uncertainty(const HamiltonianModel& model, const PwcControls& controls,
                                        int n_avg, double max_robustness) {
  model.validate();
  require_robust(model, controls, n_avg, max_robustness);
  const PropagationResult prop = propagate_total(model, controls, n_avg);
  return uncertainty_from(model, prop, interaction_ops(prop, model));
}

bool EvaluationRecord::violates_bound() const {
  return infidelity_wc_exact.has_value() && *infidelity_wc_exact > bound_infidelity;
}

std::vector<EvaluationRecord> evaluate_ensemble(const HamiltonianModel& model,
                                                const PwcControls& controls,
                                                const ComplexMatrix& target,
                                                const BathEnsembleSpec& spec,
                                                const EvaluationOptions& options) {
  spec.validate();
  if (model.couplings.size() != 1) {
    throw Error(ErrorKind::ValidationError, "couplings: the ensemble needs exactly one system operator");
  }
  if (std::abs(controls.gate_time - spec.gate_time) > 1e-12 * spec.gate_time) {
    throw Error(ErrorKind::ValidationError, "gate_time: controls and ensemble disagree");
  }
  require_robust(model, controls, options.n_avg, options.max_robustness);

  const auto points = spec.norm_points();
  const std::size_t per_point = static_cast<std::size_t>(spec.n_samples);
  std::vector<EvaluationRecord> records(points.size() * per_point);

  parallel_for(records.size(), options.threads, [&](std::size_t i) {
    EvaluationRecord& r = records[i];
    r.norm_point = static_cast<int>(i / per_point);
    r.sample_index = static_cast<int>(i % per_point);
    r.q_B = spec.q_B;
    r.commuting = spec.commuting;
    r.tb_norm = spec.target_tb_norm;
    r.th_b_norm = points[static_cast<std::size_t>(r.norm_point)];
    try {
      BathInstance bath = sample_bath(spec, r.norm_point, r.sample_index);
      HamiltonianModel m = model;
      m.bath = std::move(bath.bath_hamiltonian);
      m.couplings = {{model.couplings[0].system, std::move(bath.coupling)}};
      r.h = std::move(bath.h);
      r.g = std::move(bath.g);

      const PropagationResult prop = propagate_total(m, controls, options.n_avg);
      const UncertaintyBounds u = uncertainty_from(m, prop, interaction_ops(prop, m));
      const BoundResult bound = effective_error_bound(u);
      r.t_omega_effective = bound.t_omega_bnd;
      r.bound_infidelity = bound.infidelity_upper_bound;
      r.infidelity_wc_low = 1.0 - worst_case_lower_bound_eigenphase(prop.interaction_final);
      const bool want_exact =
          options.exact == ExactWorstCase::Always ||
          (options.exact == ExactWorstCase::BelowBound && r.infidelity_wc_low > r.bound_infidelity);
      if (want_exact) {
        r.infidelity_wc_exact =
            1.0 - worst_case_exact(prop.interaction_final, prop.system_final, target);
      }
    } catch (const Error& e) {
      r.error = e.what();
    }
  });
  return records;
}

CsvTable ensemble_table(const std::vector<EvaluationRecord>& records, const BathEnsembleSpec& spec) {
  CsvTable table({"mode", "q_B", "target_TB", "TH_B", "t_omega_bnd_rad", "infid_wc_low",
                  "infid_wc_exact", "seed"});
  for (const auto& r : records) {
    table.add_row({std::string(r.commuting ? "commuting" : "non-commuting"),
                   static_cast<long long>(r.q_B), r.tb_norm, r.th_b_norm, r.t_omega_effective,
                   r.infidelity_wc_low,
                   r.infidelity_wc_exact ? CsvCell(*r.infidelity_wc_exact) : CsvCell(std::string()),
                   static_cast<long long>(spec.seed)});
  }
  return table;
}

json ensemble_summary(const std::vector<EvaluationRecord>& records, const BathEnsembleSpec& spec) {
  const auto points = spec.norm_points();
  json per_point = json::array();
  long long violations = 0;
  long long exact_checked = 0;
  long long failures = 0;
  for (std::size_t p = 0; p < points.size(); ++p) {
    double sum = 0.0;
    double max_low = 0.0;
    double max_t_omega = 0.0;
    double min_t_omega = std::numeric_limits<double>::infinity();
    int count = 0;
    for (const auto& r : records) {
      if (r.norm_point != static_cast<int>(p) || r.error) continue;
      sum += r.infidelity_wc_low;
      max_low = std::max(max_low, r.infidelity_wc_low);
      max_t_omega = std::max(max_t_omega, r.t_omega_effective);
      min_t_omega = std::min(min_t_omega, r.t_omega_effective);
      ++count;
    }
    per_point.push_back({{"TH_B", points[p]},
                         {"records", count},
                         {"mean_infid_wc_low", count ? sum / count : 0.0},
                         {"max_infid_wc_low", max_low},
                         {"min_t_omega_bnd", count ? min_t_omega : 0.0},
                         {"max_t_omega_bnd", max_t_omega}});
  }
  for (const auto& r : records) {
    if (r.error) ++failures;
    if (r.infidelity_wc_exact) ++exact_checked;
    if (r.violates_bound()) ++violations;
  }
  return {{"spec", spec.to_json()},
          {"per_norm_point", per_point},
          {"records", records.size()},
          {"failed_records", failures},
          {"exact_checked", exact_checked},
          {"violations", violations}};
}

}  // namespace robustlimit
