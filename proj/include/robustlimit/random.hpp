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

#include <cstdint>
#include <initializer_list>
#include <random>

#include "robustlimit/matrix_core.hpp"

namespace robustlimit {

using Rng = std::mt19937_64;

/// Independent generator for a (seed, key...) tuple. The same tuple always
/// yields the same stream, so parallel and serial runs agree.
Rng make_stream(std::uint64_t seed, std::initializer_list<std::uint64_t> keys);

/// Unit vector from the unitarily invariant (Haar) measure on pure states.
ComplexVector random_state(Eigen::Index d, Rng& rng);

/// Haar-distributed unitary (QR of a complex Ginibre matrix, phases fixed).
ComplexMatrix random_unitary(Eigen::Index d, Rng& rng);

/// (X + X^dagger)/2 with X complex standard normal entries.
ComplexMatrix random_hermitian(Eigen::Index d, Rng& rng);

ComplexMatrix random_complex_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng);

}  // namespace robustlimit
