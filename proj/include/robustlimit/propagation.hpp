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

// Exact piecewise-constant propagation on a uniform averaging grid of
// N_avg cells over [0, T]. Interaction-picture operators are sampled at the
// cell midpoints t_k = (k - 1/2) T / N_avg.

#include <span>
#include <vector>

#include "robustlimit/matrix_core.hpp"
#include "robustlimit/model.hpp"

namespace robustlimit {

inline constexpr int kDefaultAveragingSamples = 25;

struct TimeGrid {
  double gate_time = 1.0;
  int n_samples = kDefaultAveragingSamples;

  double step() const { return gate_time / n_samples; }
  double midpoint(int k) const { return (k + 0.5) * step(); }
  std::vector<double> midpoints() const;
};

/// Throws GridMismatch unless n_avg is a positive multiple of the control
/// (and coherent-error) segment counts.
TimeGrid make_grid(const HamiltonianModel& model, const PwcControls& controls, int n_avg);

struct NominalPropagation {
  ComplexMatrix final_unitary;
  std::vector<ComplexMatrix> samples;
};

struct BathPropagation {
  ComplexMatrix final_unitary;
  std::vector<ComplexMatrix> samples;
};

struct PropagationResult {
  double gate_time = 1.0;
  std::vector<double> sample_times;
  std::vector<ComplexMatrix> system_samples;  // U_S(t_k)
  std::vector<ComplexMatrix> bath_samples;    // Ubar(t_k)
  ComplexMatrix total_final;                  // U(T)
  ComplexMatrix system_final;                 // U_S(T)
  ComplexMatrix bath_final;                   // Ubar(T)
  ComplexMatrix interaction_final;            // Utilde(T)
};

struct InteractionOps {
  /// Coherent error in the system interaction frame, per sample (empty if none).
  std::vector<ComplexMatrix> coherent;
  /// system[a][k] = U_S(t_k)^dag S_a U_S(t_k); bath[a][k] likewise with Ubar.
  std::vector<std::vector<ComplexMatrix>> system;
  std::vector<std::vector<ComplexMatrix>> bath;
  Eigen::Index system_dim = 0;
  Eigen::Index bath_dim = 0;

  std::size_t n_samples() const;
  /// Full interaction Hamiltonian Htilde(t_k) on the system-bath space.
  ComplexMatrix interaction_hamiltonian(std::size_t k) const;
};

NominalPropagation propagate_nominal(const HamiltonianModel& model,
                                     const PwcControls& controls, int n_avg);

BathPropagation propagate_bath(const HamiltonianModel& model, double gate_time, int n_avg);

PropagationResult propagate_total(const HamiltonianModel& model,
                                  const PwcControls& controls, int n_avg);

InteractionOps interaction_ops(const PropagationResult& prop, const HamiltonianModel& model);

/// Arithmetic mean; throws EmptyInput / DimensionMismatch.
ComplexMatrix time_average(std::span<const ComplexMatrix> samples);

/// U_S(t)^dag X U_S(t) for every sample.
std::vector<ComplexMatrix> conjugate_samples(std::span<const ComplexMatrix> unitaries,
                                             const ComplexMatrix& x);

}  // namespace robustlimit
