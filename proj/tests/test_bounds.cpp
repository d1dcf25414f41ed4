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
#include <numbers>
#include <random>

#include "robustlimit/bounds.hpp"
#include "robustlimit/errors.hpp"
#include "robustlimit/fidelity.hpp"
#include "robustlimit/propagation.hpp"
#include "robustlimit/random.hpp"

using namespace robustlimit;
using doctest::Approx;

namespace {

// Single qubit driven by v sigma_x for one full 2pi turn, coupled through
// sigma_z to a static two-level bath. Every coupling term averages to zero.
ModelBundle full_turn_model(double b_norm) {
  ModelBundle b;
  b.model.drift = ComplexMatrix::Zero(2, 2);
  b.model.control_generators = {pauli::x()};
  b.model.bath = ComplexMatrix::Zero(2, 2);
  b.model.couplings = {{pauli::z(), b_norm * pauli::z()}};
  b.controls = PwcControls::zeros(1, 1, 1.0, 7.5);
  b.controls.channels[0][0] = std::numbers::pi;
  b.target = {ComplexMatrix::Identity(2, 2), "I"};
  return b;
}

}  // namespace

TEST_CASE("point values of the bound") {
  CHECK(kPhysicalRangeRad == Approx(1.8776).epsilon(1e-4));
  CHECK(infidelity_bound(0.0) == 0.0);
  CHECK(fidelity_lower_bound(0.0) == 1.0);
  const double c = 0.15 * 0.15 / 4.0;
  CHECK(infidelity_bound(0.15) == Approx(0.5 * std::expm1(c) * std::expm1(c)).epsilon(1e-14));
  CHECK(infidelity_bound(0.15) == Approx(1.59e-5).epsilon(5e-3));
  CHECK(fidelity_lower_bound(kPhysicalRangeRad) == Approx(0.0).scale(1.0).epsilon(1e-12));
  CHECK(fidelity_lower_bound(2.5) == 0.0);
  CHECK(infidelity_bound(2.5) == 1.0);

  const auto r = bound_from_t_omega(0.3);
  CHECK(r.c_t == Approx(0.0225));
  CHECK(r.fidelity_lower_bound + r.infidelity_upper_bound == Approx(1.0));
  CHECK_FALSE(r.saturated);
  CHECK(bound_from_t_omega(1.9).saturated);
}

TEST_CASE("effective_error_bound combines the three rates") {
  UncertaintyBounds u{2.0, 0.3, 0.05, 0.2};
  CHECK(u.consistent());
  const auto r = effective_error_bound(u);
  const double c = 2.0 * 0.05 + (2.0 * 0.3) * (2.0 * 0.2) / 4.0;
  CHECK(r.c_t == Approx(c));
  CHECK(r.t_omega_bnd == Approx(2.0 * std::sqrt(c)));
  CHECK_FALSE((UncertaintyBounds{1.0, 0.1, 0.2, 0.0}.consistent()));
  CHECK_FALSE((UncertaintyBounds{1.0, 0.1, 0.0, 0.3}.consistent()));
}

TEST_CASE("invert_bound") {
  for (double eps : {1e-6, 1e-4, 1e-2, 0.3, 0.99}) {
    const double t_omega = t_omega_for_infidelity(eps);
    CHECK(t_omega == Approx(2.0 * std::sqrt(std::log1p(std::sqrt(2.0 * eps)))).epsilon(1e-14));
    CHECK(infidelity_bound(t_omega) == Approx(eps).epsilon(1e-10));
    for (double t : {25e-9, 100e-9}) {
      CHECK(invert_bound(eps, t) == Approx(t_omega / t / (2.0 * std::numbers::pi)).epsilon(1e-14));
    }
  }
  CHECK(invert_bound(1e-4, 25e-9) == Approx(1.50883e6).epsilon(1e-5));
  for (double bad : {0.0, 1.0, -1e-3, 2.0}) {
    try {
      invert_bound(bad, 25e-9);
      FAIL("accepted eps outside (0, 1)");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::OutOfRange);
    }
  }
  CHECK_THROWS_AS(invert_bound(1e-4, 0.0), Error);
}

TEST_CASE("bound curve") {
  const auto curve = bound_curve(0.01, 1.87, 187);
  REQUIRE(curve.size() == 187);
  CHECK(curve.front().t_omega_rad == Approx(0.01));
  CHECK(curve.back().t_omega_rad == Approx(1.87));
  for (std::size_t i = 1; i < curve.size(); ++i) {
    CHECK(curve[i].infidelity > curve[i - 1].infidelity);
  }
  CHECK_THROWS_AS(bound_curve(0.5, 0.4, 10), Error);
  CHECK_THROWS_AS(bound_curve(0.0, 1.0, 10), Error);
  CHECK_THROWS_AS(bound_curve(0.1, 1.9, 10), Error);
  CHECK_THROWS_AS(bound_curve(0.1, 1.0, 1), Error);

  const auto freq = bound_curve_frequency({25, 100}, 50);
  REQUIRE(freq.size() == 100);
  // A longer gate reaches the same infidelity at a lower frequency.
  CHECK(freq[49].omega_hz > freq[99].omega_hz);
  CHECK(freq[49].infidelity == Approx(freq[99].infidelity));
  for (const auto& p : freq) CHECK(p.omega_hz > 0.0);
}

TEST_CASE("bound holds on random instances") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    ModelBundle b = hadamard_sigma_z_bath(2);
    Rng rng = make_stream(seed, {7});
    std::uniform_real_distribution<double> u(-6.0, 6.0);
    for (auto& ch : b.controls.channels)
      for (double& v : ch) v = u(rng);
    const auto prop = propagate_total(b.model, b.controls, 50);
    const auto ops = interaction_ops(prop, b.model);
    const auto unc = measure_uncertainty(b.model, prop, ops);
    CHECK(unc.consistent());
    const auto bound = effective_error_bound(unc);
    const double err = op_norm(prop.interaction_final - ComplexMatrix::Identity(8, 8));
    CHECK(err <= std::expm1(bound.c_t) + 1e-9);
    CHECK(1.0 - worst_case_lower_bound(prop.interaction_final) <=
          bound.infidelity_upper_bound + 1e-12);
    CHECK(average_case_bound(unc, 8) <= 1.0);
  }
}

TEST_CASE("minimum-uncertainty corollary") {
  const ModelBundle b = full_turn_model(0.1);
  const auto prop = propagate_total(b.model, b.controls, 25);
  const auto ops = interaction_ops(prop, b.model);
  const auto r = minimum_uncertainty_corollary(b.model, prop, ops, b.target.unitary);
  CHECK(r.t_omega_bnd == Approx(0.1));
  const auto general = effective_error_bound(measure_uncertainty(b.model, prop, ops));
  CHECK(general.t_omega_bnd <= r.t_omega_bnd + 1e-9);
  CHECK(1.0 - worst_case_lower_bound(prop.interaction_final) <= r.infidelity_upper_bound + 1e-12);

  // A half turn leaves sigma_z un-averaged and misses the target.
  ModelBundle half = b;
  half.controls.channels[0][0] = std::numbers::pi / 2;
  const auto p2 = propagate_total(half.model, half.controls, 25);
  try {
    minimum_uncertainty_corollary(half.model, p2, interaction_ops(p2, half.model),
                                  b.target.unitary);
    FAIL("precondition not checked");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::PreconditionViolated);
  }
}

TEST_CASE("average-case bound") {
  UncertaintyBounds u{1.0, 0.2, 0.01, 0.1};
  const double c = 0.01 + 0.2 * 0.1 / 4.0;
  CHECK(average_case_bound(u, 1.0, 4) == Approx(1.0 - std::pow(std::expm1(c), 2) / 8.0));
  CHECK(average_case_bound(u, 4) == average_case_bound(u, 4.0, 4));
  CHECK(average_case_bound(u, 2.0, 4) < average_case_bound(u, 1.0, 4));
  CHECK_THROWS_AS(average_case_bound(u, 0.5, 4), Error);
}

TEST_CASE("anti-Hermitian inverse check") {
  Rng rng = make_stream(91, {});
  for (int i = 0; i < 50; ++i) {
    const ComplexMatrix h = random_hermitian(5, rng);
    const ComplexMatrix k = Complex(0, 1) * h * (0.1 + i * 0.2);
    const auto r = anti_hermitian_inverse_check(k);
    CHECK(r.op_bound_ok);
    CHECK(r.frob_bound_ok);
    CHECK(r.op_norm <= 1.0 + 1e-12);
    CHECK(r.frobenius_norm <= std::sqrt(5.0) + 1e-12);
  }
  try {
    anti_hermitian_inverse_check(random_hermitian(3, rng));
    FAIL("Hermitian K accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotAntiHermitian);
  }
}

TEST_CASE("bound is monotone in each rate") {
  UncertaintyBounds base{1.0, 0.2, 0.02, 0.1};
  const double ref = effective_error_bound(base).infidelity_upper_bound;
  auto bumped = [&](double UncertaintyBounds::*field) {
    UncertaintyBounds u = base;
    u.*field *= 1.5;
    return effective_error_bound(u).infidelity_upper_bound;
  };
  CHECK(bumped(&UncertaintyBounds::omega_unc) > ref);
  CHECK(bumped(&UncertaintyBounds::omega_avg) > ref);
  CHECK(bumped(&UncertaintyBounds::omega_avg_dev) > ref);
  CHECK(bumped(&UncertaintyBounds::gate_time) > ref);
}

TEST_CASE("averaging remainder") {
  const ModelBundle b = full_turn_model(0.1);
  const auto prop = propagate_total(b.model, b.controls, 25);
  const auto ops = interaction_ops(prop, b.model);
  const auto k = averaging_remainder_norms(ops, 1.0);
  REQUIRE(k.size() == 26);
  CHECK(k.front() == 0.0);
  // Zero mean: the remainder closes at T.
  CHECK(k.back() < 1e-12);
  for (double x : k) CHECK(x <= 0.1 * 1.0 + 1e-12);
}
