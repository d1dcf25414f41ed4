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

#include "robustlimit/matrix_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "robustlimit/errors.hpp"

namespace robustlimit {

namespace {

constexpr int kThetaSamples = 720;
constexpr double kThetaTolerance = 1e-10;

std::string describe(std::string_view what) { return std::string(what); }

double min_eigenvalue_rotated(const ComplexMatrix& a, double theta) {
  const Complex phase = std::polar(1.0, -theta);
  const ComplexMatrix rotated = phase * a;
  return eigenvalues_hermitian(hermitian_part(rotated))(0);
}

}  // namespace

bool is_hermitian(const ComplexMatrix& a) {
  if (a.rows() != a.cols()) return false;
  const double scale = a.norm();
  return (a - a.adjoint()).norm() <= Tolerances::hermitian_relative * scale;
}

bool is_unitary(const ComplexMatrix& a, double tol) {
  if (a.rows() != a.cols()) return false;
  const auto d = a.rows();
  return (a.adjoint() * a - ComplexMatrix::Identity(d, d)).norm() <= tol;
}

void require_dimension(Eigen::Index d, std::string_view what) {
  if (d < 1 || d > kMaxDimension) {
    throw Error(ErrorKind::DimensionTooLarge,
                describe(what) + " has dimension " + std::to_string(d) +
                    " outside [1, " + std::to_string(kMaxDimension) + "]");
  }
}

void require_hermitian(const ComplexMatrix& a, std::string_view what) {
  require_dimension(a.rows(), what);
  if (!is_hermitian(a)) {
    throw Error(ErrorKind::NonHermitianInput,
                describe(what) + " is not Hermitian");
  }
}

void require_unitary(const ComplexMatrix& a, std::string_view what) {
  require_dimension(a.rows(), what);
  if (!is_unitary(a)) {
    throw Error(ErrorKind::NotUnitary, describe(what) + " is not unitary");
  }
}

ComplexMatrix hermitian_part(const ComplexMatrix& a) {
  return 0.5 * (a + a.adjoint());
}

double op_norm(const ComplexMatrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::BDCSVD<ComplexMatrix> solver(a);
  return solver.singularValues()(0);
}

double op_norm_hermitian(const ComplexMatrix& a) {
  const RealVector ev = eigenvalues_hermitian(a);
  return std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
}

double frobenius_norm(const ComplexMatrix& a) { return a.norm(); }

double nuclear_norm(const ComplexMatrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::BDCSVD<ComplexMatrix> solver(a);
  return solver.singularValues().sum();
}

HermitianEigen eig_hermitian(const ComplexMatrix& a) {
  require_hermitian(a, "eig_hermitian input");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(a);
  return {solver.eigenvalues(), solver.eigenvectors()};
}

RealVector eigenvalues_hermitian(const ComplexMatrix& a) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(a, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

SingularValueDecomposition svd(const ComplexMatrix& a) {
  Eigen::BDCSVD<ComplexMatrix> solver(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return {solver.matrixU(), solver.singularValues(), solver.matrixV()};
}

ComplexMatrix expm_from_eigen(const HermitianEigen& eig, double tau) {
  const auto n = eig.values.size();
  ComplexVector phases(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    phases(k) = std::polar(1.0, -eig.values(k) * tau);
  }
  return eig.vectors * phases.asDiagonal() * eig.vectors.adjoint();
}

ComplexMatrix expm_hermitian_generator(const ComplexMatrix& h, double tau) {
  return expm_from_eigen(eig_hermitian(h), tau);
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

double numerical_range_distance(const ComplexMatrix& a) {
  if (a.rows() != a.cols()) {
    throw Error(ErrorKind::DimensionMismatch,
                "numerical range requires a square matrix");
  }
  constexpr double two_pi = 2.0 * std::numbers::pi;
  const double step = two_pi / kThetaSamples;

  int best_index = 0;
  double best = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < kThetaSamples; ++k) {
    const double value = min_eigenvalue_rotated(a, k * step);
    if (value > best) {
      best = value;
      best_index = k;
    }
  }

  // Golden-section refinement inside the bracketing cell pair.
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = (best_index - 1) * step;
  double hi = (best_index + 1) * step;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = min_eigenvalue_rotated(a, x1);
  double f2 = min_eigenvalue_rotated(a, x2);
  while (hi - lo > kThetaTolerance) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = min_eigenvalue_rotated(a, x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = min_eigenvalue_rotated(a, x1);
    }
  }
  best = std::max({best, f1, f2});
  return std::max(0.0, best);
}

namespace pauli {

ComplexMatrix identity(Eigen::Index d) { return ComplexMatrix::Identity(d, d); }

ComplexMatrix x() {
  ComplexMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

ComplexMatrix y() {
  ComplexMatrix m(2, 2);
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return m;
}

ComplexMatrix z() {
  ComplexMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

ComplexMatrix embed(const ComplexMatrix& op, int qubit, int n_qubits) {
  ComplexMatrix out = ComplexMatrix::Identity(1, 1);
  for (int q = 0; q < n_qubits; ++q) {
    out = kron(out, q == qubit ? op : identity(2));
  }
  return out;
}

}  // namespace pauli

}  // namespace robustlimit
