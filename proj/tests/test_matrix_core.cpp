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

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>
#include <complex>
#include <numbers>

#include "robustlimit/errors.hpp"
#include "robustlimit/matrix_core.hpp"
#include "robustlimit/random.hpp"

using namespace robustlimit;
using doctest::Approx;

namespace {

ComplexMatrix diag2(Complex a, Complex b) {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

}  // namespace

TEST_CASE("norms on hand-computed examples") {
  const ComplexMatrix d = diag2(3.0, Complex(0, -4));
  CHECK(op_norm(pauli::x()) == Approx(1.0).epsilon(1e-14));
  CHECK(op_norm(ComplexMatrix::Zero(3, 3)) == 0.0);
  CHECK(op_norm(d) == Approx(4.0).epsilon(1e-14));
  CHECK(frobenius_norm(ComplexMatrix::Identity(5, 5)) == Approx(std::sqrt(5.0)));
  CHECK(frobenius_norm(pauli::x()) == Approx(std::sqrt(2.0)));
  CHECK(frobenius_norm(d) == Approx(5.0));
  CHECK(nuclear_norm(ComplexMatrix::Identity(6, 6)) == Approx(6.0));
  CHECK(nuclear_norm(d) == Approx(7.0));

  Rng rng = make_stream(11, {});
  const ComplexVector u = random_state(4, rng);
  const ComplexVector v = random_state(4, rng);
  CHECK(nuclear_norm(u * v.adjoint()) == Approx(1.0).epsilon(1e-12));
}

TEST_CASE("op_norm of a Hermitian matrix is its largest |eigenvalue|") {
  Rng rng = make_stream(12, {});
  for (int i = 0; i < 20; ++i) {
    const ComplexMatrix h = random_hermitian(7, rng);
    const RealVector ev = eigenvalues_hermitian(h);
    const double expect = std::max(std::abs(ev(0)), std::abs(ev(6)));
    CHECK(op_norm(h) == Approx(expect).epsilon(1e-12));
    CHECK(op_norm_hermitian(h) == Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("norm inequality chain") {
  Rng rng = make_stream(13, {});
  for (int i = 0; i < 50; ++i) {
    const ComplexMatrix a = random_complex_matrix(6, 6, rng);
    const double op = op_norm(a);
    const double fro = frobenius_norm(a);
    CHECK(op <= fro * (1 + 1e-12));
    CHECK(fro <= std::sqrt(6.0) * op * (1 + 1e-12));
  }
}

TEST_CASE("expm_hermitian_generator closed forms") {
  const ComplexMatrix zero = ComplexMatrix::Zero(3, 3);
  CHECK((expm_hermitian_generator(zero, 2.7) - ComplexMatrix::Identity(3, 3)).norm() < 1e-14);

  const ComplexMatrix u = expm_hermitian_generator(pauli::z(), std::numbers::pi);
  CHECK((u + ComplexMatrix::Identity(2, 2)).norm() < 1e-14);

  const ComplexMatrix v = expm_hermitian_generator(pauli::x(), std::numbers::pi / 2);
  CHECK((v - Complex(0, -1) * pauli::x()).norm() < 1e-14);

  ComplexMatrix bad = ComplexMatrix::Zero(2, 2);
  bad(0, 1) = 1.0;
  CHECK_THROWS_AS(expm_hermitian_generator(bad, 1.0), Error);
  try {
    expm_hermitian_generator(bad, 1.0);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonHermitianInput);
  }
}

TEST_CASE("expm is unitary and satisfies the group law") {
  Rng rng = make_stream(14, {});
  std::uniform_real_distribution<double> tau(0.0, 10.0);
  for (int i = 0; i < 30; ++i) {
    const ComplexMatrix h = random_hermitian(8, rng);
    const double a = tau(rng);
    const double b = tau(rng);
    const ComplexMatrix ua = expm_hermitian_generator(h, a);
    CHECK((ua.adjoint() * ua - ComplexMatrix::Identity(8, 8)).norm() <= 1e-10);
    const ComplexMatrix ub = expm_hermitian_generator(h, b);
    CHECK((ua * ub - expm_hermitian_generator(h, a + b)).norm() <= 1e-9);
  }
}

TEST_CASE("kron") {
  CHECK((kron(pauli::identity(2), pauli::identity(2)) - pauli::identity(4)).norm() == 0.0);
  const ComplexMatrix zx = kron(pauli::z(), pauli::x());
  CHECK((zx.block(0, 0, 2, 2) - pauli::x()).norm() == 0.0);
  CHECK((zx.block(2, 2, 2, 2) + pauli::x()).norm() == 0.0);
  CHECK(zx.block(0, 2, 2, 2).norm() == 0.0);

  Rng rng = make_stream(15, {});
  const ComplexMatrix a = random_complex_matrix(3, 3, rng);
  const ComplexMatrix b = random_complex_matrix(2, 2, rng);
  CHECK(op_norm(kron(a, b)) == Approx(op_norm(a) * op_norm(b)).epsilon(1e-12));
}

TEST_CASE("eig_hermitian and svd reconstruct their input") {
  const auto ez = eig_hermitian(pauli::z());
  CHECK(ez.values(0) == Approx(-1.0));
  CHECK(ez.values(1) == Approx(1.0));
  const auto ex = eig_hermitian(pauli::x());
  CHECK(ex.values(0) == Approx(-1.0));
  CHECK(ex.values(1) == Approx(1.0));

  Rng rng = make_stream(16, {});
  for (int i = 0; i < 10; ++i) {
    const ComplexMatrix h = random_hermitian(9, rng);
    const auto e = eig_hermitian(h);
    CHECK((e.vectors * e.values.cast<Complex>().asDiagonal() * e.vectors.adjoint() - h).norm() <=
          1e-10);
    CHECK(is_unitary(e.vectors));

    const ComplexMatrix a = random_complex_matrix(9, 9, rng);
    const auto s = svd(a);
    CHECK((s.left * s.singular_values.cast<Complex>().asDiagonal() * s.right.adjoint() - a).norm() <=
          1e-10);
    for (int k = 1; k < 9; ++k) CHECK(s.singular_values(k) <= s.singular_values(k - 1));
  }
  const auto sd = svd(diag2(3.0, Complex(0, -4)));
  CHECK(sd.singular_values(0) == Approx(4.0));
  CHECK(sd.singular_values(1) == Approx(3.0));
  const ComplexMatrix q = random_unitary(5, rng);
  CHECK((svd(q).singular_values - RealVector::Ones(5)).norm() < 1e-12);
}

TEST_CASE("validation helpers") {
  CHECK(is_hermitian(pauli::y()));
  CHECK_FALSE(is_hermitian(Complex(0, 1) * pauli::x()));
  CHECK(is_unitary(pauli::y()));
  CHECK_FALSE(is_unitary(2.0 * pauli::x()));
  CHECK_THROWS_AS(require_unitary(2.0 * pauli::x(), "probe"), Error);
  CHECK_THROWS_AS(require_dimension(kMaxDimension + 1, "probe"), Error);
  CHECK_NOTHROW(require_dimension(kMaxDimension, "probe"));
}

TEST_CASE("numerical_range_distance examples") {
  CHECK(numerical_range_distance(ComplexMatrix::Identity(3, 3)) == Approx(1.0).epsilon(1e-12));
  CHECK(numerical_range_distance(pauli::z()) == Approx(0.0).epsilon(1e-12));
  const double theta = 0.3;
  const ComplexMatrix a = diag2(std::polar(1.0, theta), std::polar(1.0, -theta));
  const double dist = numerical_range_distance(a);
  CHECK(dist == Approx(std::cos(0.3)).epsilon(1e-10));
  CHECK(dist == Approx(0.955336).epsilon(1e-6));

  // Sampling oracle: no pure state gets closer to zero than the distance.
  Rng rng = make_stream(17, {});
  double min_sampled = 1.0;
  for (int i = 0; i < 100000; ++i) {
    const ComplexVector psi = random_state(2, rng);
    min_sampled = std::min(min_sampled, std::abs(psi.dot(a * psi)));
  }
  CHECK(min_sampled >= dist - 1e-12);
  CHECK(min_sampled <= dist + 1e-4);
}

TEST_CASE("numerical_range_distance is a lower bound on sampled |<psi|A|psi>|") {
  Rng rng = make_stream(18, {});
  for (int i = 0; i < 20; ++i) {
    const ComplexMatrix a = random_unitary(4, rng) + 1.5 * ComplexMatrix::Identity(4, 4);
    const double dist = numerical_range_distance(a);
    for (int k = 0; k < 200; ++k) {
      const ComplexVector psi = random_state(4, rng);
      CHECK(std::abs(psi.dot(a * psi)) >= dist - 1e-10);
    }
  }
}

TEST_CASE("numerical range of a normal matrix is the hull of its eigenvalues") {
  // Brute force: distance from 0 to the convex hull of points, by checking
  // every vertex and every segment between a pair of points.
  auto hull_distance = [](const std::vector<Complex>& pts) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < pts.size(); ++i) {
      best = std::min(best, std::abs(pts[i]));
      for (std::size_t j = i + 1; j < pts.size(); ++j) {
        const Complex d = pts[j] - pts[i];
        const double t = std::clamp(-(std::conj(d) * pts[i]).real() / std::norm(d), 0.0, 1.0);
        best = std::min(best, std::abs(pts[i] + t * d));
      }
    }
    return best;
  };
  // A segment test alone misses points strictly inside a triangle containing 0.
  auto contains_origin = [](const std::vector<Complex>& pts) {
    for (std::size_t i = 0; i < pts.size(); ++i)
      for (std::size_t j = i + 1; j < pts.size(); ++j)
        for (std::size_t k = j + 1; k < pts.size(); ++k) {
          auto cross = [](Complex a, Complex b) { return a.real() * b.imag() - a.imag() * b.real(); };
          const double s1 = cross(pts[j] - pts[i], -pts[i]);
          const double s2 = cross(pts[k] - pts[j], -pts[j]);
          const double s3 = cross(pts[i] - pts[k], -pts[k]);
          if ((s1 >= 0 && s2 >= 0 && s3 >= 0) || (s1 <= 0 && s2 <= 0 && s3 <= 0)) return true;
        }
    return false;
  };

  Rng rng = make_stream(19, {});
  std::normal_distribution<double> n(0.0, 1.0);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<Complex> pts;
    const Complex shift(n(rng), n(rng));
    ComplexMatrix a = ComplexMatrix::Zero(4, 4);
    for (int k = 0; k < 4; ++k) {
      pts.emplace_back(Complex(0.5 * n(rng), 0.5 * n(rng)) + shift);
      a(k, k) = pts.back();
    }
    const ComplexMatrix q = random_unitary(4, rng);
    const ComplexMatrix normal = q * a * q.adjoint();
    const double expect = contains_origin(pts) ? 0.0 : hull_distance(pts);
    CHECK(numerical_range_distance(normal) == Approx(expect).epsilon(1e-9).scale(1.0));
  }
}

TEST_CASE("pauli embedding puts qubit 0 in the most significant factor") {
  const ComplexMatrix e = pauli::embed(pauli::z(), 0, 2);
  CHECK((e - kron(pauli::z(), pauli::identity(2))).norm() == 0.0);
  const ComplexMatrix f = pauli::embed(pauli::x(), 1, 2);
  CHECK((f - kron(pauli::identity(2), pauli::x())).norm() == 0.0);
}
