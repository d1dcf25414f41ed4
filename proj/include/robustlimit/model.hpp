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

// Declarative description of a controlled system coupled to a finite bath:
//   H(t) = (H_S(t) + H_coh(t)) (x) I_B + I_S (x) H_B + sum_a S_a (x) B_a
//   H_S(t) = H_S0 + sum_j v_j(t) H_Sj
// with piecewise-constant controls v_j on a uniform grid over [0, T].

#include <string>
#include <vector>

#include <json.hpp>

#include "robustlimit/matrix_core.hpp"

namespace robustlimit {

struct PwcControls {
  double gate_time = 1.0;
  double v_max = 7.5;
  /// channels[j][k] is the amplitude of channel j on segment k.
  std::vector<std::vector<double>> channels;

  int n_channels() const { return static_cast<int>(channels.size()); }
  int n_pulses() const { return channels.empty() ? 0 : static_cast<int>(channels.front().size()); }
  double segment_duration() const { return gate_time / n_pulses(); }

  /// Throws ValidationError on ragged channels, T <= 0 or |v| > v_max.
  void validate() const;

  /// Channel-major flattening: x[j * n_pulses + k] = channels[j][k].
  std::vector<double> flatten() const;
  static PwcControls from_flat(const std::vector<double>& x, int n_channels,
                               double gate_time, double v_max);
  static PwcControls zeros(int n_channels, int n_pulses, double gate_time, double v_max);

  double max_abs_amplitude() const;

  bool operator==(const PwcControls&) const = default;
};

struct Coupling {
  ComplexMatrix system;
  ComplexMatrix bath;
};

struct HamiltonianModel {
  ComplexMatrix drift;
  std::vector<ComplexMatrix> control_generators;
  /// Coherent error as uniform PWC segments over [0, T]; empty means none.
  std::vector<ComplexMatrix> coherent_error;
  ComplexMatrix bath;
  std::vector<Coupling> couplings;

  Eigen::Index system_dim() const { return drift.rows(); }
  Eigen::Index bath_dim() const { return bath.rows(); }
  Eigen::Index total_dim() const { return system_dim() * bath_dim(); }

  /// Hermiticity and dimension consistency; throws ValidationError.
  void validate() const;

  /// Coherent-error segment active at time t in [0, T] (zero if none).
  ComplexMatrix coherent_error_at(double t, double gate_time) const;
  /// Index of the coherent-error segment at time t, or -1 when absent.
  int coherent_segment_at(double t, double gate_time) const;
};

struct TargetGate {
  ComplexMatrix unitary;
  std::string label;
};

struct ModelBundle {
  HamiltonianModel model;
  PwcControls controls;
  TargetGate target;
};

/// Index of the control segment containing time t.
int control_segment_at(const PwcControls& controls, double t);

/// H_S0 + sum_j v_j[k] H_Sj.
ComplexMatrix nominal_system_hamiltonian(const HamiltonianModel& model,
                                         const PwcControls& controls, int k);

/// Full system-bath Hamiltonian on control segment k. The coherent error is
/// taken at the segment midpoint.
ComplexMatrix assemble_total_hamiltonian(const HamiltonianModel& model,
                                         const PwcControls& controls, int k);

/// Total Hamiltonian at time t (control and coherent segments looked up).
ComplexMatrix total_hamiltonian_at(const HamiltonianModel& model,
                                   const PwcControls& controls, double t);

/// H_coh(t) (x) I_B + I_S (x) H_B + sum_a S_a (x) B_a.
ComplexMatrix uncertainty_hamiltonian(const HamiltonianModel& model, double t,
                                      double gate_time);

/// (sigma_x + sigma_z) / sqrt(2).
TargetGate hadamard_target();

/// Single qubit with sigma_x, sigma_y controls coupled through sigma_z (x) B
/// to a bath of `bath_qubits` qubits. The bath uses commuting sigma_x sums
/// with uniform coefficients scaled to ||T B|| = 0.15 and ||T H_B|| = 1.
ModelBundle hadamard_sigma_z_bath(int bath_qubits);

/// Load a model document (see README for the schema) or a preset reference
/// {"preset": name, ...}. Throws ParseError / ValidationError with a field path.
ModelBundle load_model(const nlohmann::json& doc);
ModelBundle load_model_file(const std::string& path);
nlohmann::json save_model(const ModelBundle& bundle);

/// {"T", "v_max", "channels", optional "n_pulses"}; channels are required.
PwcControls controls_from_json(const nlohmann::json& j);
nlohmann::json controls_to_json(const PwcControls& controls);

}  // namespace robustlimit
