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

#include "robustlimit/propagation.hpp"

#include <string>
#include <utility>

#include "robustlimit/errors.hpp"

namespace robustlimit {

std::vector<double> TimeGrid::midpoints() const {
  std::vector<double> t(static_cast<std::size_t>(n_samples));
  for (int k = 0; k < n_samples; ++k) t[static_cast<std::size_t>(k)] = midpoint(k);
  return t;
}

TimeGrid make_grid(const HamiltonianModel& model, const PwcControls& controls, int n_avg) {
  const int n_pwc = controls.n_pulses();
  if (n_avg <= 0 || n_pwc <= 0 || n_avg % n_pwc != 0) {
    throw Error(ErrorKind::GridMismatch,
                "N_avg = " + std::to_string(n_avg) + " is not a positive multiple of N_pwc = " +
                    std::to_string(n_pwc));
  }
  const auto n_coh = static_cast<int>(model.coherent_error.size());
  if (n_coh > 0 && n_avg % n_coh != 0) {
    throw Error(ErrorKind::GridMismatch,
                "N_avg = " + std::to_string(n_avg) +
                    " is not a multiple of the coherent-error segment count " +
                    std::to_string(n_coh));
  }
  return {controls.gate_time, n_avg};
}

namespace {

HermitianEigen eig_unchecked(const ComplexMatrix& h) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h);
  return {solver.eigenvalues(), solver.eigenvectors()};
}

}  // namespace

NominalPropagation propagate_nominal(const HamiltonianModel& model,
                                     const PwcControls& controls, int n_avg) {
  const TimeGrid grid = make_grid(model, controls, n_avg);
  const int per_segment = n_avg / controls.n_pulses();
  const double dt = grid.step();
  const auto n_s = model.system_dim();

  NominalPropagation out;
  out.samples.reserve(static_cast<std::size_t>(n_avg));
  ComplexMatrix boundary = ComplexMatrix::Identity(n_s, n_s);
  for (int seg = 0; seg < controls.n_pulses(); ++seg) {
    const auto eig = eig_unchecked(nominal_system_hamiltonian(model, controls, seg));
    const ComplexMatrix half = expm_from_eigen(eig, 0.5 * dt);
    const ComplexMatrix full = expm_from_eigen(eig, dt);
    for (int c = 0; c < per_segment; ++c) {
      out.samples.push_back(half * boundary);
      boundary = full * boundary;
    }
  }
  out.final_unitary = std::move(boundary);
  return out;
}

BathPropagation propagate_bath(const HamiltonianModel& model, double gate_time, int n_avg) {
  if (n_avg <= 0) throw Error(ErrorKind::GridMismatch, "N_avg must be positive");
  const TimeGrid grid{gate_time, n_avg};
  const auto eig = eig_unchecked(model.bath);
  BathPropagation out;
  out.samples.reserve(static_cast<std::size_t>(n_avg));
  for (int k = 0; k < n_avg; ++k) out.samples.push_back(expm_from_eigen(eig, grid.midpoint(k)));
  out.final_unitary = expm_from_eigen(eig, gate_time);
  return out;
}

PropagationResult propagate_total(const HamiltonianModel& model,
                                  const PwcControls& controls, int n_avg) {
  const TimeGrid grid = make_grid(model, controls, n_avg);
  for (const auto& c : model.couplings) {
    if (c.system.rows() != model.system_dim() || c.bath.rows() != model.bath_dim()) {
      throw Error(ErrorKind::DimensionMismatch, "coupling block dimensions disagree with model");
    }
  }

  auto nominal = propagate_nominal(model, controls, n_avg);
  auto bath = propagate_bath(model, controls.gate_time, n_avg);

  // Cells sharing a control segment and coherent-error segment have the same
  // Hamiltonian; each run is one exact exponential.
  const auto d = model.total_dim();
  ComplexMatrix total = ComplexMatrix::Identity(d, d);
  int k = 0;
  while (k < n_avg) {
    const double t = grid.midpoint(k);
    const auto key = std::pair{control_segment_at(controls, t),
                               model.coherent_segment_at(t, controls.gate_time)};
    int run = 1;
    while (k + run < n_avg) {
      const double tn = grid.midpoint(k + run);
      if (std::pair{control_segment_at(controls, tn),
                    model.coherent_segment_at(tn, controls.gate_time)} != key) {
        break;
      }
      ++run;
    }
    const auto eig = eig_unchecked(total_hamiltonian_at(model, controls, t));
    total = expm_from_eigen(eig, run * grid.step()) * total;
    k += run;
  }

  PropagationResult out;
  out.gate_time = controls.gate_time;
  out.sample_times = grid.midpoints();
  out.system_samples = std::move(nominal.samples);
  out.bath_samples = std::move(bath.samples);
  out.system_final = std::move(nominal.final_unitary);
  out.bath_final = std::move(bath.final_unitary);
  out.interaction_final = kron(out.system_final, out.bath_final).adjoint() * total;
  out.total_final = std::move(total);
  return out;
}

std::vector<ComplexMatrix> conjugate_samples(std::span<const ComplexMatrix> unitaries,
                                             const ComplexMatrix& x) {
  std::vector<ComplexMatrix> out;
  out.reserve(unitaries.size());
  for (const auto& u : unitaries) out.push_back(hermitian_part(u.adjoint() * x * u));
  return out;
}

InteractionOps interaction_ops(const PropagationResult& prop, const HamiltonianModel& model) {
  InteractionOps ops;
  ops.system_dim = model.system_dim();
  ops.bath_dim = model.bath_dim();
  const double gate_time = prop.gate_time;
  if (!model.coherent_error.empty()) {
    ops.coherent.reserve(prop.system_samples.size());
    for (std::size_t k = 0; k < prop.system_samples.size(); ++k) {
      const auto& u = prop.system_samples[k];
      const ComplexMatrix h = model.coherent_error_at(prop.sample_times[k], gate_time);
      ops.coherent.push_back(hermitian_part(u.adjoint() * h * u));
    }
  }
  for (const auto& c : model.couplings) {
    ops.system.push_back(conjugate_samples(prop.system_samples, c.system));
    ops.bath.push_back(conjugate_samples(prop.bath_samples, c.bath));
  }
  return ops;
}

std::size_t InteractionOps::n_samples() const {
  if (!coherent.empty()) return coherent.size();
  return system.empty() ? 0 : system.front().size();
}

ComplexMatrix InteractionOps::interaction_hamiltonian(std::size_t k) const {
  const auto d = system_dim * bath_dim;
  ComplexMatrix h = ComplexMatrix::Zero(d, d);
  if (!coherent.empty()) h += kron(coherent[k], ComplexMatrix::Identity(bath_dim, bath_dim));
  for (std::size_t a = 0; a < system.size(); ++a) h += kron(system[a][k], bath[a][k]);
  return h;
}

ComplexMatrix time_average(std::span<const ComplexMatrix> samples) {
  if (samples.empty()) throw Error(ErrorKind::EmptyInput, "time_average of no samples");
  ComplexMatrix sum = ComplexMatrix::Zero(samples.front().rows(), samples.front().cols());
  for (const auto& s : samples) {
    if (s.rows() != sum.rows() || s.cols() != sum.cols()) {
      throw Error(ErrorKind::DimensionMismatch, "time_average samples differ in shape");
    }
    sum += s;
  }
  return sum / static_cast<double>(samples.size());
}

}  // namespace robustlimit
