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

#include <doctest.h>

#include <cmath>
#include <functional>
#include <numbers>
#include <random>

#include "robustlimit/errors.hpp"
#include "robustlimit/fidelity.hpp"
#include "robustlimit/optimizer.hpp"
#include "robustlimit/random.hpp"

using namespace robustlimit;
using doctest::Approx;

namespace {

PwcControls random_controls(int n_channels, int n_pulses, std::uint64_t seed, double scale = 4.0) {
  PwcControls c = PwcControls::zeros(n_channels, n_pulses, 1.0, 7.5);
  Rng rng = make_stream(seed, {});
  std::uniform_real_distribution<double> u(-scale, scale);
  for (auto& ch : c.channels)
    for (double& v : ch) v = u(rng);
  return c;
}

// Central differences of f in every flattened coordinate.
std::vector<double> numeric_gradient(const std::function<double(const PwcControls&)>& f,
                                     const PwcControls& c, double h = 1e-6) {
  const auto x = c.flatten();
  std::vector<double> g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    auto xp = x;
    auto xm = x;
    xp[i] += h;
    xm[i] -= h;
    const auto cp = PwcControls::from_flat(xp, c.n_channels(), c.gate_time, 100.0);
    const auto cm = PwcControls::from_flat(xm, c.n_channels(), c.gate_time, 100.0);
    g[i] = (f(cp) - f(cm)) / (2 * h);
  }
  return g;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

OptimizerConfig small_config() {
  OptimizerConfig cfg;
  cfg.n_restarts = 4;
  cfg.max_iters = 1500;
  cfg.seed = 3;
  return cfg;
}

}  // namespace

TEST_CASE("config validation and JSON") {
  OptimizerConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  for (auto mutate : std::vector<std::function<void(OptimizerConfig&)>>{
           [](OptimizerConfig& c) { c.f0 = 1.5; }, [](OptimizerConfig& c) { c.f0 = -0.1; },
           [](OptimizerConfig& c) { c.v_max = 0; }, [](OptimizerConfig& c) { c.lambda = -1; },
           [](OptimizerConfig& c) { c.n_restarts = 0; },
           [](OptimizerConfig& c) { c.max_iters = 0; }}) {
    OptimizerConfig bad;
    mutate(bad);
    CHECK_THROWS_AS(bad.validate(), Error);
  }
  cfg.lambda = 0.25;
  cfg.seed = 99;
  const auto back = OptimizerConfig::from_json(cfg.to_json());
  CHECK(back.lambda == 0.25);
  CHECK(back.seed == 99);
  CHECK(OptimizerConfig::from_json(nlohmann::json::object()).n_restarts == 20);
}

TEST_CASE("objectives at closed-form points") {
  const ModelBundle b = hadamard_sigma_z_bath(1);
  const PwcControls zero = PwcControls::zeros(2, 5, 1.0, 7.5);
  CHECK(objective_nominal(b.model, ComplexMatrix::Identity(2, 2), zero).value == Approx(1.0));
  CHECK(objective_nominal(b.model, b.target.unitary, zero).value == Approx(0.0).scale(1.0));
  CHECK(objective_robust(b.model, zero, 25).value == Approx(1.0));

  // A full 2pi turn about x averages sigma_z away on a midpoint grid.
  PwcControls turn = zero;
  for (double& v : turn.channels[0]) v = std::numbers::pi;
  CHECK(objective_robust(b.model, turn, 25).value < 1e-12);
  CHECK(objective_nominal(b.model, ComplexMatrix::Identity(2, 2), turn).value == Approx(1.0));
  CHECK(robustness_terms(b.model).size() == 1);
}

TEST_CASE("gradients match finite differences") {
  const ModelBundle b = hadamard_sigma_z_bath(1);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const PwcControls c = random_controls(2, 5, seed);
    const auto nom = objective_nominal(b.model, b.target.unitary, c);
    const auto fd_nom = numeric_gradient(
        [&](const PwcControls& x) { return objective_nominal(b.model, b.target.unitary, x).value; },
        c);
    CHECK(max_abs_diff(nom.gradient, fd_nom) < 1e-7);

    const auto sur = objective_robust_surrogate(b.model, c, 25);
    const auto fd_sur = numeric_gradient(
        [&](const PwcControls& x) { return objective_robust_surrogate(b.model, x, 25).value; }, c);
    CHECK(max_abs_diff(sur.gradient, fd_sur) < 1e-7);

    const auto rob = objective_robust(b.model, c, 25);
    const auto fd_rob = numeric_gradient(
        [&](const PwcControls& x) { return objective_robust(b.model, x, 25).value; }, c);
    CHECK(max_abs_diff(rob.gradient, fd_rob) < 1e-6);
    // Single traceless qubit term: the surrogate is J^2.
    CHECK(sur.value == Approx(rob.value * rob.value).epsilon(1e-10));
  }
}

TEST_CASE("evaluate_controls agrees with propagation") {
  const ModelBundle b = hadamard_sigma_z_bath(1);
  const PwcControls c = random_controls(2, 5, 17);
  const auto m = evaluate_controls(b.model, b.target.unitary, c, 25);
  const auto prop = propagate_total(b.model, c, 25);
  const double overlap = nominal_fidelity(prop.system_final, b.target.unitary);
  CHECK(m.nominal_fidelity == Approx(overlap * overlap).epsilon(1e-12));
  CHECK(m.robustness == Approx(objective_robust(b.model, c, 25).value));
}

TEST_CASE("single-stage optimization reaches a robust Hadamard") {
  const ModelBundle b = hadamard_sigma_z_bath(1);
  const auto out = optimize_single_stage(b.model, b.target.unitary, b.controls, small_config());
  CHECK(out.nominal_fidelity > 1.0 - 1e-8);
  CHECK(out.robustness < 1e-4);
  CHECK(out.controls.max_abs_amplitude() <= 7.5 + 1e-12);
  CHECK(out.restart_index >= 0);
  CHECK(out.restart_index < 4);
  CHECK_FALSE(out.trace.empty());
  CHECK(out.objective == Approx(1.0 - out.nominal_fidelity + 0.1 * out.robustness));

  // lambda = 0 ignores robustness entirely.
  OptimizerConfig plain = small_config();
  plain.lambda = 0.0;
  const auto nominal_only = optimize_single_stage(b.model, b.target.unitary, b.controls, plain);
  CHECK(nominal_only.nominal_fidelity > 1.0 - 1e-8);
}

TEST_CASE("optimization is deterministic across thread counts") {
  const ModelBundle b = hadamard_sigma_z_bath(1);
  OptimizerConfig cfg = small_config();
  cfg.max_iters = 200;
  const auto one = optimize_single_stage(b.model, b.target.unitary, b.controls, cfg);
  cfg.threads = 3;
  const auto three = optimize_single_stage(b.model, b.target.unitary, b.controls, cfg);
  CHECK(one.controls == three.controls);
  CHECK(one.restart_index == three.restart_index);
  CHECK(one.trace == three.trace);
}

TEST_CASE("two-stage optimization") {
  const ModelBundle b = hadamard_sigma_z_bath(1);
  OptimizerConfig cfg = small_config();
  cfg.f0 = 0.9999;
  const auto out = optimize_two_stage(b.model, b.target.unitary, b.controls, cfg);
  CHECK(out.nominal_fidelity >= cfg.f0 - 1e-9);
  CHECK(out.robustness < 1e-3);
  CHECK(out.objective == Approx(out.robustness));

  // f0 = 1 exactly is unreachable with a single short segment and no drift.
  HamiltonianModel weak = b.model;
  PwcControls tiny = PwcControls::zeros(2, 1, 1.0, 0.05);
  OptimizerConfig strict = small_config();
  strict.f0 = 1.0;
  strict.v_max = 0.05;
  strict.n_restarts = 2;
  strict.max_iters = 50;
  try {
    optimize_two_stage(weak, b.target.unitary, tiny, strict);
    FAIL("stage one should fail");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::StageOneFailed);
  }
}

TEST_CASE("nullspace certificate") {
  const ModelBundle b = hadamard_sigma_z_bath(1);
  const PwcControls zero = PwcControls::zeros(2, 5, 1.0, 7.5);
  const auto at_identity = nullspace_check(b.model, zero, 25, pauli::z());
  CHECK(at_identity.residual == Approx(std::sqrt(2.0)));
  CHECK(at_identity.averaged_op_norm == Approx(1.0));

  // Roth's column lemma: A vec(X) = vec(E[U^dag X U]).
  const PwcControls c = random_controls(2, 5, 23);
  const auto prop = propagate_nominal(b.model, c, 25);
  ComplexMatrix avg = ComplexMatrix::Zero(2, 2);
  for (const auto& u : prop.samples) avg += u.adjoint() * pauli::z() * u;
  avg /= static_cast<double>(prop.samples.size());
  const auto cert = nullspace_check(b.model, c, 25, pauli::z());
  CHECK((cert.averaged_operator - avg).norm() < 1e-12);
  CHECK(cert.residual == Approx(avg.norm()).epsilon(1e-12));
  CHECK(cert.averaged_op_norm == Approx(objective_robust(b.model, c, 25).value).epsilon(1e-10));
}

TEST_CASE("outcome JSON") {
  const ModelBundle b = hadamard_sigma_z_bath(1);
  OptimizerConfig cfg = small_config();
  cfg.n_restarts = 1;
  cfg.max_iters = 20;
  const auto out = optimize_single_stage(b.model, b.target.unitary, b.controls, cfg);
  const auto j = outcome_to_json(out, cfg, 0.5);
  for (const char* key : {"controls", "F_nom", "J_rbst", "objective", "residual_A",
                          "max_abs_amplitude", "restart_index", "converged", "iterations", "seed"}) {
    CHECK(j.contains(key));
  }
  CHECK(j["residual_A"] == 0.5);
  CHECK(controls_from_json(j["controls"]) == out.controls);
}
