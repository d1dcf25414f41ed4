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

// Dense complex linear algebra shared by every other module. Matrices are
// Eigen column-major storage; all operations here are pure functions.

#include <complex>
#include <span>
#include <string_view>

#include <Eigen/Dense>

namespace robustlimit {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Numerical tolerances used by validity checks throughout the library.
struct Tolerances {
  static constexpr double hermitian_relative = 1e-12;
  static constexpr double unitary = 1e-10;
  static constexpr double decomposition_residual = 1e-10;
  static constexpr double normalization = 1e-12;
};

/// Largest supported Hilbert-space dimension (dense O(d^3) algorithms only).
inline constexpr Eigen::Index kMaxDimension = 1024;

struct HermitianEigen {
  RealVector values;  // ascending
  ComplexMatrix vectors;
};

struct SingularValueDecomposition {
  ComplexMatrix left;
  RealVector singular_values;  // descending
  ComplexMatrix right;
};

bool is_hermitian(const ComplexMatrix& a);
bool is_unitary(const ComplexMatrix& a, double tol = Tolerances::unitary);

/// Throw NonHermitianInput / NotUnitary / DimensionTooLarge naming `what`.
void require_hermitian(const ComplexMatrix& a, std::string_view what);
void require_unitary(const ComplexMatrix& a, std::string_view what);
void require_dimension(Eigen::Index d, std::string_view what);

/// Hermitian part (A + A^dagger) / 2.
ComplexMatrix hermitian_part(const ComplexMatrix& a);

/// Largest singular value.
double op_norm(const ComplexMatrix& a);
/// Largest |eigenvalue| of a matrix the caller guarantees is Hermitian.
double op_norm_hermitian(const ComplexMatrix& a);
double frobenius_norm(const ComplexMatrix& a);
double nuclear_norm(const ComplexMatrix& a);

HermitianEigen eig_hermitian(const ComplexMatrix& a);
/// Eigenvalues only, ascending; skips the Hermiticity check.
RealVector eigenvalues_hermitian(const ComplexMatrix& a);
SingularValueDecomposition svd(const ComplexMatrix& a);

/// exp(-i H tau) through the eigendecomposition of H.
ComplexMatrix expm_hermitian_generator(const ComplexMatrix& h, double tau);
/// Same, reusing a precomputed decomposition.
ComplexMatrix expm_from_eigen(const HermitianEigen& eig, double tau);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Distance from the origin to the numerical range {<psi|A|psi>}, i.e.
/// min over density matrices rho of |Tr(A rho)|.
///
/// Uses the support function of the (convex) numerical range: the distance
/// is max(0, max_theta -lambda_max(Re(e^{-i theta} A))). The maximum is
/// bracketed on a uniform theta grid and polished by golden-section search.
double numerical_range_distance(const ComplexMatrix& a);

namespace pauli {
ComplexMatrix identity(Eigen::Index d);
ComplexMatrix x();
ComplexMatrix y();
ComplexMatrix z();
/// Single-qubit operator `op` acting on qubit `qubit` of an `n_qubits`
/// register (qubit 0 is the most significant tensor factor).
ComplexMatrix embed(const ComplexMatrix& op, int qubit, int n_qubits);
}  // namespace pauli

}  // namespace robustlimit
