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

#include "robustlimit/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>

#include "robustlimit/errors.hpp"
#include "robustlimit/parallel.hpp"
#include "robustlimit/random.hpp"

namespace robustlimit {

using nlohmann::json;

void OptimizerConfig::validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorKind::ValidationError, msg); };
  if (!(lambda >= 0.0)) fail("lambda: must be nonnegative");
  if (!(f0 >= 0.0 && f0 <= 1.0)) fail("f0: must lie in [0, 1]");
  if (!(v_max > 0.0)) fail("v_max: must be positive");
  if (n_restarts < 1) fail("n_restarts: must be positive");
  if (max_iters < 1) fail("max_iters: must be positive");
  if (n_avg < 1) fail("n_avg: must be positive");
  if (!(penalty > 0.0)) fail("penalty: must be positive");
}

json OptimizerConfig::to_json() const {
  return {{"lambda", lambda},       {"f0", f0},
          {"v_max", v_max},         {"n_restarts", n_restarts},
          {"max_iters", max_iters}, {"n_avg", n_avg},
          {"objective_tolerance", objective_tolerance},
          {"step_tolerance", step_tolerance},
          {"armijo", armijo},       {"penalty", penalty},
          {"seed", seed},           {"threads", threads}};
}

OptimizerConfig OptimizerConfig::from_json(const json& j) {
  OptimizerConfig c;
  auto get = [&j](const char* key, auto& out) {
    if (j.contains(key)) out = j.at(key).get<std::decay_t<decltype(out)>>();
  };
  get("lambda", c.lambda);
  get("f0", c.f0);
  get("v_max", c.v_max);
  get("n_restarts", c.n_restarts);
  get("max_iters", c.max_iters);
  get("n_avg", c.n_avg);
  get("objective_tolerance", c.objective_tolerance);
  get("step_tolerance", c.step_tolerance);
  get("armijo", c.armijo);
  get("penalty", c.penalty);
  get("seed", c.seed);
  get("threads", c.threads);
  return c;
}

namespace {

struct Segment {
  HermitianEigen eig;
  ComplexMatrix unitary;
  std::vector<ComplexMatrix> generators;  // Q^dag H_j Q
};

// PWC evolution with everything needed for exact gradients. Segment m spans
// [m*delta, (m+1)*delta); boundary[m] = U_{m-1} ... U_0 (boundary[0] = I).
struct Evolution {
  std::vector<Segment> segments;
  std::vector<ComplexMatrix> boundary;
  double delta = 0.0;
  // Averaging samples (empty when n_avg == 0).
  int per_segment = 0;
  double dt = 0.0;
  std::vector<ComplexMatrix> samples;

  int segment_of(int s) const { return s / per_segment; }
  double offset_of(int s) const { return (s % per_segment + 0.5) * dt; }
};

Evolution evolve(const HamiltonianModel& model, const PwcControls& controls, int n_avg) {
  Evolution evo;
  const int n = controls.n_pulses();
  const auto n_s = model.system_dim();
  evo.delta = controls.segment_duration();
  evo.boundary.push_back(ComplexMatrix::Identity(n_s, n_s));
  for (int k = 0; k < n; ++k) {
    Segment seg;
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(
        nominal_system_hamiltonian(model, controls, k));
    seg.eig = {solver.eigenvalues(), solver.eigenvectors()};
    seg.unitary = expm_from_eigen(seg.eig, evo.delta);
    for (const auto& h : model.control_generators) {
      seg.generators.push_back(seg.eig.vectors.adjoint() * h * seg.eig.vectors);
    }
    evo.boundary.push_back(seg.unitary * evo.boundary.back());
    evo.segments.push_back(std::move(seg));
  }
  if (n_avg > 0) {
    const TimeGrid grid = make_grid(model, controls, n_avg);
    evo.per_segment = n_avg / n;
    evo.dt = grid.step();
    for (int s = 0; s < n_avg; ++s) {
      const int m = evo.segment_of(s);
      const auto& seg = evo.segments[static_cast<std::size_t>(m)];
      evo.samples.push_back(expm_from_eigen(seg.eig, evo.offset_of(s)) *
                            evo.boundary[static_cast<std::size_t>(m)]);
    }
  }
  return evo;
}

// Tr(A dexp) where dexp is the derivative of exp(-i tau H) in direction G and
// both A and G are given in the eigenbasis of H (Daleckii-Krein form):
//   sum_ab A_ba G_ab phi_ab,
//   phi_ab = (e^{-i tau l_a} - e^{-i tau l_b}) / (l_a - l_b)
//          = -i tau e^{-i tau (l_a + l_b)/2} sinc(tau (l_a - l_b) / 2).
Complex trace_dexp(const ComplexMatrix& a_eig, const ComplexMatrix& g_eig,
                   const RealVector& lambda, double tau) {
  const auto n = lambda.size();
  Complex acc = 0.0;
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = 0; b < n; ++b) {
      const double mean = 0.5 * (lambda(a) + lambda(b));
      const double half = 0.5 * tau * (lambda(a) - lambda(b));
      const double sinc = std::abs(half) < 1e-8 ? 1.0 - half * half / 6.0 : std::sin(half) / half;
      const Complex phi = Complex(0.0, -tau) * std::polar(1.0, -tau * mean) * sinc;
      acc += a_eig(b, a) * g_eig(a, b) * phi;
    }
  }
  return acc;
}

ComplexMatrix to_eigbasis(const Segment& seg, const ComplexMatrix& a) {
  return seg.eig.vectors.adjoint() * a * seg.eig.vectors;
}

// Gradient of sum_a Re Tr(G_a M_a) where M_a = E[U^dag X_a U] over samples.
std::vector<double> averaged_operator_gradient(const Evolution& evo,
                                               const std::vector<ComplexMatrix>& terms,
                                               const std::vector<ComplexMatrix>& weights,
                                               int n_channels) {
  const int n = static_cast<int>(evo.segments.size());
  const int n_samples = static_cast<int>(evo.samples.size());
  std::vector<double> grad(static_cast<std::size_t>(n_channels * n), 0.0);
  const double scale = 2.0 / n_samples;

  for (std::size_t a = 0; a < terms.size(); ++a) {
    const auto& x = terms[a];
    const auto& g = weights[a];
    const auto dim = x.rows();
    // C_m = sum_{s in m} G U_s^dag X U_s; suffix[k] = sum_{m > k} C_m.
    std::vector<ComplexMatrix> z(static_cast<std::size_t>(n_samples));
    std::vector<ComplexMatrix> c(static_cast<std::size_t>(n), ComplexMatrix::Zero(dim, dim));
    for (int s = 0; s < n_samples; ++s) {
      const auto& u = evo.samples[static_cast<std::size_t>(s)];
      z[static_cast<std::size_t>(s)] = g * u.adjoint() * x;
      c[static_cast<std::size_t>(evo.segment_of(s))] += z[static_cast<std::size_t>(s)] * u;
    }
    ComplexMatrix suffix = ComplexMatrix::Zero(dim, dim);
    for (int k = n - 1; k >= 0; --k) {
      const auto& seg = evo.segments[static_cast<std::size_t>(k)];
      const auto& left = evo.boundary[static_cast<std::size_t>(k)];
      const ComplexMatrix later =
          to_eigbasis(seg, left * suffix * evo.boundary[static_cast<std::size_t>(k + 1)].adjoint());
      std::vector<ComplexMatrix> within;
      std::vector<double> tau;
      for (int s = k * evo.per_segment; s < (k + 1) * evo.per_segment; ++s) {
        within.push_back(to_eigbasis(seg, left * z[static_cast<std::size_t>(s)]));
        tau.push_back(evo.offset_of(s));
      }
      for (int j = 0; j < n_channels; ++j) {
        const auto& gen = seg.generators[static_cast<std::size_t>(j)];
        Complex acc = trace_dexp(later, gen, seg.eig.values, evo.delta);
        for (std::size_t i = 0; i < within.size(); ++i) {
          acc += trace_dexp(within[i], gen, seg.eig.values, tau[i]);
        }
        grad[static_cast<std::size_t>(j * n + k)] += scale * acc.real();
      }
      suffix += c[static_cast<std::size_t>(k)];
    }
  }
  return grad;
}

std::vector<ComplexMatrix> averaged_terms(const Evolution& evo,
                                          const std::vector<ComplexMatrix>& terms) {
  std::vector<ComplexMatrix> out;
  for (const auto& x : terms) {
    out.push_back(time_average(conjugate_samples(evo.samples, x)));
  }
  return out;
}

void require_channels(const HamiltonianModel& model, const PwcControls& controls) {
  if (static_cast<std::size_t>(controls.n_channels()) != model.control_generators.size() ||
      controls.n_pulses() < 1) {
    throw Error(ErrorKind::DimensionMismatch, "controls do not match the model's generators");
  }
}

}  // namespace

std::vector<ComplexMatrix> robustness_terms(const HamiltonianModel& model) {
  std::vector<ComplexMatrix> out;
  for (const auto& c : model.couplings) out.push_back(c.system);
  return out;
}

ObjectiveValue objective_nominal(const HamiltonianModel& model, const ComplexMatrix& target,
                                 const PwcControls& controls) {
  require_channels(model, controls);
  if (target.rows() != model.system_dim()) {
    throw Error(ErrorKind::DimensionMismatch, "target dimension differs from n_S");
  }
  const Evolution evo = evolve(model, controls, 0);
  const int n = controls.n_pulses();
  const double n_s = static_cast<double>(model.system_dim());
  const ComplexMatrix& final_u = evo.boundary.back();
  const Complex overlap = (target.adjoint() * final_u).trace() / n_s;

  ObjectiveValue out;
  out.value = std::norm(overlap);
  out.gradient.assign(static_cast<std::size_t>(controls.n_channels() * n), 0.0);
  const ComplexMatrix w_final = target.adjoint() * final_u;
  for (int k = 0; k < n; ++k) {
    const auto& seg = evo.segments[static_cast<std::size_t>(k)];
    const ComplexMatrix a = to_eigbasis(
        seg, evo.boundary[static_cast<std::size_t>(k)] * w_final *
                 evo.boundary[static_cast<std::size_t>(k + 1)].adjoint() / n_s);
    for (int j = 0; j < controls.n_channels(); ++j) {
      const Complex d_overlap =
          trace_dexp(a, seg.generators[static_cast<std::size_t>(j)], seg.eig.values, evo.delta);
      out.gradient[static_cast<std::size_t>(j * n + k)] =
          2.0 * (std::conj(overlap) * d_overlap).real();
    }
  }
  return out;
}

ObjectiveValue objective_robust(const HamiltonianModel& model, const PwcControls& controls,
                                int n_avg) {
  require_channels(model, controls);
  const auto terms = robustness_terms(model);
  ObjectiveValue out;
  out.gradient.assign(static_cast<std::size_t>(controls.n_channels() * controls.n_pulses()), 0.0);
  if (terms.empty()) return out;

  const Evolution evo = evolve(model, controls, n_avg);
  const auto averages = averaged_terms(evo, terms);
  std::size_t best = 0;
  double best_norm = -1.0;
  HermitianEigen best_eig;
  for (std::size_t a = 0; a < averages.size(); ++a) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(averages[a]);
    const auto& ev = solver.eigenvalues();
    const double norm = std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
    if (norm > best_norm) {
      best_norm = norm;
      best = a;
      best_eig = {ev, solver.eigenvectors()};
    }
  }
  out.value = best_norm;

  // d||M|| = sign(l*) v*^dag dM v* at the eigenvalue of largest magnitude.
  const auto last = best_eig.values.size() - 1;
  const bool top = std::abs(best_eig.values(last)) >= std::abs(best_eig.values(0));
  const Eigen::Index idx = top ? last : 0;
  const double sign = best_eig.values(idx) >= 0.0 ? 1.0 : -1.0;
  const ComplexVector v = best_eig.vectors.col(idx);
  std::vector<ComplexMatrix> weights(terms.size(), ComplexMatrix::Zero(terms[0].rows(), terms[0].cols()));
  weights[best] = sign * (v * v.adjoint());
  out.gradient = averaged_operator_gradient(evo, terms, weights, controls.n_channels());
  return out;
}

ObjectiveValue objective_robust_surrogate(const HamiltonianModel& model,
                                          const PwcControls& controls, int n_avg) {
  require_channels(model, controls);
  const auto terms = robustness_terms(model);
  ObjectiveValue out;
  out.gradient.assign(static_cast<std::size_t>(controls.n_channels() * controls.n_pulses()), 0.0);
  if (terms.empty()) return out;
  const Evolution evo = evolve(model, controls, n_avg);
  const auto averages = averaged_terms(evo, terms);
  for (const auto& m : averages) out.value += 0.5 * m.squaredNorm();
  // d(1/2 ||M||_F^2) = Re Tr(M dM).
  out.gradient = averaged_operator_gradient(evo, terms, averages, controls.n_channels());
  return out;
}

ControlMetrics evaluate_controls(const HamiltonianModel& model, const ComplexMatrix& target,
                                 const PwcControls& controls, int n_avg) {
  return {objective_nominal(model, target, controls).value,
          objective_robust(model, controls, n_avg).value};
}

namespace {

using Objective = std::function<ObjectiveValue(const std::vector<double>&)>;

struct SearchResult {
  std::vector<double> x;
  double value = 0.0;
  std::vector<double> trace;
  bool converged = false;
  int iterations = 0;
};

std::vector<double> project(std::vector<double> x, double bound) {
  for (double& v : x) v = std::clamp(v, -bound, bound);
  return x;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Projected gradient descent on the box [-bound, bound]^n with
// Barzilai-Borwein trial steps and Armijo backtracking.
SearchResult projected_descent(const Objective& f, std::vector<double> x, double bound,
                               const OptimizerConfig& cfg,
                               const std::function<bool(const std::vector<double>&)>& done = {}) {
  SearchResult r;
  x = project(std::move(x), bound);
  ObjectiveValue cur = f(x);
  r.trace.push_back(cur.value);
  double step = 1.0;
  std::vector<double> prev_x;
  std::vector<double> prev_g;

  for (int it = 0; it < cfg.max_iters; ++it) {
    r.iterations = it + 1;
    if (cur.value <= cfg.objective_tolerance || (done && done(x))) {
      r.converged = true;
      break;
    }
    if (!prev_x.empty()) {
      double ss = 0.0;
      double sy = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) {
        const double s = x[i] - prev_x[i];
        const double y = cur.gradient[i] - prev_g[i];
        ss += s * s;
        sy += s * y;
      }
      step = sy > 0.0 ? std::clamp(ss / sy, 1e-10, 1e6) : std::min(2.0 * step, 1e6);
    }

    bool accepted = false;
    std::vector<double> trial;
    ObjectiveValue next;
    for (int bt = 0; bt < 60; ++bt) {
      trial = x;
      for (std::size_t i = 0; i < x.size(); ++i) trial[i] -= step * cur.gradient[i];
      trial = project(std::move(trial), bound);
      std::vector<double> delta(x.size());
      for (std::size_t i = 0; i < x.size(); ++i) delta[i] = trial[i] - x[i];
      const double decrease = dot(cur.gradient, delta);
      if (dot(delta, delta) == 0.0) break;
      next = f(trial);
      if (next.value <= cur.value + cfg.armijo * decrease) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      r.converged = true;  // no descent direction left at this resolution
      break;
    }
    double moved = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) moved += (trial[i] - x[i]) * (trial[i] - x[i]);
    prev_x = std::move(x);
    prev_g = std::move(cur.gradient);
    x = std::move(trial);
    cur = std::move(next);
    r.trace.push_back(cur.value);
    if (std::sqrt(moved) < cfg.step_tolerance) {
      r.converged = true;
      break;
    }
  }
  r.x = std::move(x);
  r.value = cur.value;
  return r;
}

std::vector<double> random_start(const OptimizerConfig& cfg, std::size_t n, int restart) {
  Rng rng = make_stream(cfg.seed, {static_cast<std::uint64_t>(restart)});
  std::uniform_real_distribution<double> u(-0.5 * cfg.v_max, 0.5 * cfg.v_max);
  std::vector<double> x(n);
  for (double& v : x) v = u(rng);
  return x;
}

PwcControls controls_from(const std::vector<double>& x, const PwcControls& layout,
                          const OptimizerConfig& cfg) {
  return PwcControls::from_flat(x, layout.n_channels(), layout.gate_time, cfg.v_max);
}

void check_inputs(const HamiltonianModel& model, const ComplexMatrix& target,
                  const PwcControls& layout, const OptimizerConfig& cfg) {
  cfg.validate();
  model.validate();
  require_channels(model, layout);
  if (target.rows() != model.system_dim() || !is_unitary(target)) {
    throw Error(ErrorKind::DimensionMismatch, "target must be a unitary on the system space");
  }
  make_grid(model, layout, cfg.n_avg);
}

// Lowest objective wins; ties go to the lower restart index.
std::size_t pick_winner(const std::vector<OptimizationOutcome>& outcomes,
                        const std::vector<bool>& eligible) {
  std::size_t best = outcomes.size();
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    if (!eligible[i]) continue;
    if (best == outcomes.size() || outcomes[i].objective < outcomes[best].objective) best = i;
  }
  return best;
}

}  // namespace

OptimizationOutcome optimize_single_stage(const HamiltonianModel& model,
                                          const ComplexMatrix& target, const PwcControls& layout,
                                          const OptimizerConfig& cfg) {
  check_inputs(model, target, layout, cfg);
  const std::size_t n_vars = static_cast<std::size_t>(layout.n_channels() * layout.n_pulses());

  const Objective search = [&](const std::vector<double>& x) {
    const PwcControls c = controls_from(x, layout, cfg);
    ObjectiveValue nom = objective_nominal(model, target, c);
    ObjectiveValue out;
    out.value = 1.0 - nom.value;
    out.gradient.resize(nom.gradient.size());
    for (std::size_t i = 0; i < nom.gradient.size(); ++i) out.gradient[i] = -nom.gradient[i];
    if (cfg.lambda > 0.0) {
      const ObjectiveValue rob = objective_robust_surrogate(model, c, cfg.n_avg);
      out.value += cfg.lambda * rob.value;
      for (std::size_t i = 0; i < out.gradient.size(); ++i) {
        out.gradient[i] += cfg.lambda * rob.gradient[i];
      }
    }
    return out;
  };

  std::vector<OptimizationOutcome> outcomes(static_cast<std::size_t>(cfg.n_restarts));
  parallel_for(outcomes.size(), cfg.threads, [&](std::size_t r) {
    SearchResult res = projected_descent(search, random_start(cfg, n_vars, static_cast<int>(r)),
                                         cfg.v_max, cfg);
    OptimizationOutcome& o = outcomes[r];
    o.controls = controls_from(res.x, layout, cfg);
    const ControlMetrics m = evaluate_controls(model, target, o.controls, cfg.n_avg);
    o.nominal_fidelity = m.nominal_fidelity;
    o.robustness = m.robustness;
    o.objective = 1.0 - m.nominal_fidelity + cfg.lambda * m.robustness;
    o.trace = std::move(res.trace);
    o.restart_index = static_cast<int>(r);
    o.converged = res.converged;
    o.iterations = res.iterations;
  });
  const std::size_t best = pick_winner(outcomes, std::vector<bool>(outcomes.size(), true));
  return outcomes[best];
}

OptimizationOutcome optimize_two_stage(const HamiltonianModel& model,
                                       const ComplexMatrix& target, const PwcControls& layout,
                                       const OptimizerConfig& cfg) {
  check_inputs(model, target, layout, cfg);
  const std::size_t n_vars = static_cast<std::size_t>(layout.n_channels() * layout.n_pulses());
  constexpr double kStageOneSlack = 1e-12;
  constexpr double kFeasibilitySlack = 1e-9;
  const double goal = cfg.f0 - kStageOneSlack;

  const Objective infidelity = [&](const std::vector<double>& x) {
    ObjectiveValue nom = objective_nominal(model, target, controls_from(x, layout, cfg));
    nom.value = 1.0 - nom.value;
    for (double& g : nom.gradient) g = -g;
    return nom;
  };
  const auto reached = [&](const std::vector<double>& x) {
    return objective_nominal(model, target, controls_from(x, layout, cfg)).value >= goal;
  };
  // Stage two minimizes J_s + w (1 - F_nom). Since F_nom <= 1 the penalty is
  // smooth, and w is raised 10x per round up to cfg.penalty until the iterate
  // is feasible. A max(0, f0 - F_nom) kink or a stiff quadratic wall pins the
  // iterate to the constraint surface, where plain descent crawls.
  const auto penalized = [&](double weight) -> Objective {
    return [&, weight](const std::vector<double>& x) {
      const PwcControls c = controls_from(x, layout, cfg);
      ObjectiveValue out = objective_robust_surrogate(model, c, cfg.n_avg);
      const ObjectiveValue nom = objective_nominal(model, target, c);
      out.value += weight * (1.0 - nom.value);
      for (std::size_t i = 0; i < out.gradient.size(); ++i) out.gradient[i] -= weight * nom.gradient[i];
      return out;
    };
  };
  const auto is_feasible = [&](const std::vector<double>& x) {
    return objective_nominal(model, target, controls_from(x, layout, cfg)).value >=
           cfg.f0 - kFeasibilitySlack;
  };

  std::vector<OptimizationOutcome> outcomes(static_cast<std::size_t>(cfg.n_restarts));
  std::vector<bool> feasible(outcomes.size(), false);
  parallel_for(outcomes.size(), cfg.threads, [&](std::size_t r) {
    SearchResult stage1 = projected_descent(
        infidelity, random_start(cfg, n_vars, static_cast<int>(r)), cfg.v_max, cfg, reached);
    OptimizationOutcome& o = outcomes[r];
    o.restart_index = static_cast<int>(r);
    o.controls = controls_from(stage1.x, layout, cfg);
    if (!reached(stage1.x)) {
      o.nominal_fidelity = 1.0 - stage1.value;
      o.trace = std::move(stage1.trace);
      return;
    }
    SearchResult stage2;
    stage2.x = stage1.x;
    for (double weight = std::min(1.0, cfg.penalty);; weight = std::min(10.0 * weight, cfg.penalty)) {
      SearchResult round = projected_descent(penalized(weight), stage2.x, cfg.v_max, cfg);
      stage2.x = std::move(round.x);
      stage2.trace.insert(stage2.trace.end(), round.trace.begin(), round.trace.end());
      stage2.iterations += round.iterations;
      stage2.converged = round.converged;
      if (is_feasible(stage2.x) || weight >= cfg.penalty) break;
    }
    PwcControls chosen = controls_from(stage2.x, layout, cfg);
    ControlMetrics m = evaluate_controls(model, target, chosen, cfg.n_avg);
    if (m.nominal_fidelity < cfg.f0 - kFeasibilitySlack) {
      chosen = o.controls;
      m = evaluate_controls(model, target, chosen, cfg.n_avg);
    }
    o.controls = std::move(chosen);
    o.nominal_fidelity = m.nominal_fidelity;
    o.robustness = m.robustness;
    o.objective = m.robustness;
    o.trace = std::move(stage1.trace);
    o.trace.insert(o.trace.end(), stage2.trace.begin(), stage2.trace.end());
    o.converged = stage2.converged;
    o.iterations = stage1.iterations + stage2.iterations;
    feasible[r] = m.nominal_fidelity >= cfg.f0 - kFeasibilitySlack;
  });
  const std::size_t best = pick_winner(outcomes, feasible);
  if (best == outcomes.size()) {
    double top = 0.0;
    for (const auto& o : outcomes) top = std::max(top, o.nominal_fidelity);
    throw Error(ErrorKind::StageOneFailed,
                "no restart reached F_nom >= f0; best F_nom = " + std::to_string(top));
  }
  return outcomes[best];
}

NullspaceCertificate nullspace_check(const HamiltonianModel& model, const PwcControls& controls,
                                     int n_avg, const ComplexMatrix& x) {
  require_channels(model, controls);
  const auto n = model.system_dim();
  if (x.rows() != n || x.cols() != n) {
    throw Error(ErrorKind::DimensionMismatch, "operator dimension differs from n_S");
  }
  const Evolution evo = evolve(model, controls, n_avg);
  ComplexMatrix a = ComplexMatrix::Zero(n * n, n * n);
  for (const auto& u : evo.samples) a += kron(u.transpose(), u.adjoint());
  a /= static_cast<double>(evo.samples.size());

  const ComplexVector vec_x = Eigen::Map<const ComplexVector>(x.data(), n * n);
  const ComplexVector image = a * vec_x;
  NullspaceCertificate out;
  out.residual = image.norm();
  out.averaged_operator = Eigen::Map<const ComplexMatrix>(image.data(), n, n);
  out.averaged_op_norm = op_norm(out.averaged_operator);
  return out;
}

json outcome_to_json(const OptimizationOutcome& o, const OptimizerConfig& cfg,
                     double nullspace_residual) {
  return {{"controls",
           {{"T", o.controls.gate_time},
            {"n_pulses", o.controls.n_pulses()},
            {"v_max", o.controls.v_max},
            {"channels", o.controls.channels}}},
          {"F_nom", o.nominal_fidelity},
          {"J_rbst", o.robustness},
          {"objective", o.objective},
          {"residual_A", nullspace_residual},
          {"max_abs_amplitude", o.controls.max_abs_amplitude()},
          {"restart_index", o.restart_index},
          {"converged", o.converged},
          {"iterations", o.iterations},
          {"trace", o.trace},
          {"seed", cfg.seed},
          {"config", cfg.to_json()}};
}

}  // namespace robustlimit
