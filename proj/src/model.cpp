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

#include "robustlimit/model.hpp"

#include <algorithm>
#include <cmath>

#include "robustlimit/errors.hpp"
#include "robustlimit/serialization.hpp"

namespace robustlimit {

using nlohmann::json;

void PwcControls::validate() const {
  if (!(gate_time > 0.0)) {
    throw Error(ErrorKind::ValidationError, "controls.T: gate time must be positive");
  }
  if (!(v_max > 0.0)) {
    throw Error(ErrorKind::ValidationError, "controls.v_max: must be positive");
  }
  if (channels.empty() || channels.front().empty()) {
    throw Error(ErrorKind::ValidationError, "controls.channels: need at least one pulse");
  }
  const auto n = channels.front().size();
  for (std::size_t j = 0; j < channels.size(); ++j) {
    if (channels[j].size() != n) {
      throw Error(ErrorKind::ValidationError,
                  "controls.channels[" + std::to_string(j) + "]: ragged channel length");
    }
    for (std::size_t k = 0; k < n; ++k) {
      if (!(std::abs(channels[j][k]) <= v_max)) {
        throw Error(ErrorKind::ValidationError,
                    "controls.channels[" + std::to_string(j) + "][" + std::to_string(k) +
                        "]: amplitude exceeds v_max");
      }
    }
  }
}

std::vector<double> PwcControls::flatten() const {
  std::vector<double> x;
  x.reserve(channels.size() * static_cast<std::size_t>(n_pulses()));
  for (const auto& ch : channels) x.insert(x.end(), ch.begin(), ch.end());
  return x;
}

PwcControls PwcControls::from_flat(const std::vector<double>& x, int n_channels,
                                   double gate_time, double v_max) {
  if (n_channels <= 0 || x.size() % static_cast<std::size_t>(n_channels) != 0) {
    throw Error(ErrorKind::DimensionMismatch, "flat control vector not divisible by channel count");
  }
  const auto n = x.size() / static_cast<std::size_t>(n_channels);
  PwcControls c;
  c.gate_time = gate_time;
  c.v_max = v_max;
  c.channels.resize(static_cast<std::size_t>(n_channels));
  for (std::size_t j = 0; j < c.channels.size(); ++j) {
    c.channels[j].assign(x.begin() + static_cast<std::ptrdiff_t>(j * n),
                         x.begin() + static_cast<std::ptrdiff_t>((j + 1) * n));
  }
  return c;
}

PwcControls PwcControls::zeros(int n_channels, int n_pulses, double gate_time, double v_max) {
  PwcControls c;
  c.gate_time = gate_time;
  c.v_max = v_max;
  c.channels.assign(static_cast<std::size_t>(n_channels),
                    std::vector<double>(static_cast<std::size_t>(n_pulses), 0.0));
  return c;
}

double PwcControls::max_abs_amplitude() const {
  double m = 0.0;
  for (const auto& ch : channels) {
    for (double v : ch) m = std::max(m, std::abs(v));
  }
  return m;
}

namespace {

void check_block(const ComplexMatrix& m, Eigen::Index dim, const std::string& path) {
  if (m.rows() != dim || m.cols() != dim) {
    throw Error(ErrorKind::ValidationError,
                path + ": expected " + std::to_string(dim) + "x" + std::to_string(dim) +
                    " matrix, got " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
  if (!is_hermitian(m)) {
    throw Error(ErrorKind::ValidationError, path + ": matrix is not Hermitian");
  }
}

int segment_index(double t, double gate_time, int n_segments) {
  const int k = static_cast<int>(std::floor(t / gate_time * n_segments));
  return std::clamp(k, 0, n_segments - 1);
}

}  // namespace

void HamiltonianModel::validate() const {
  const auto n_s = system_dim();
  const auto n_b = bath_dim();
  if (n_s < 1 || n_b < 1) {
    throw Error(ErrorKind::ValidationError, "model: empty drift or bath matrix");
  }
  if (n_s * n_b > kMaxDimension) {
    throw Error(ErrorKind::ValidationError,
                "model: total dimension " + std::to_string(n_s * n_b) + " exceeds " +
                    std::to_string(kMaxDimension));
  }
  check_block(drift, n_s, "drift");
  for (std::size_t j = 0; j < control_generators.size(); ++j) {
    check_block(control_generators[j], n_s, "control_generators[" + std::to_string(j) + "]");
  }
  for (std::size_t j = 0; j < coherent_error.size(); ++j) {
    check_block(coherent_error[j], n_s, "coherent_error[" + std::to_string(j) + "]");
  }
  check_block(bath, n_b, "bath");
  for (std::size_t a = 0; a < couplings.size(); ++a) {
    const std::string p = "couplings[" + std::to_string(a) + "]";
    check_block(couplings[a].system, n_s, p + ".system");
    check_block(couplings[a].bath, n_b, p + ".bath");
  }
}

int HamiltonianModel::coherent_segment_at(double t, double gate_time) const {
  if (coherent_error.empty()) return -1;
  return segment_index(t, gate_time, static_cast<int>(coherent_error.size()));
}

ComplexMatrix HamiltonianModel::coherent_error_at(double t, double gate_time) const {
  const int k = coherent_segment_at(t, gate_time);
  if (k < 0) return ComplexMatrix::Zero(system_dim(), system_dim());
  return coherent_error[static_cast<std::size_t>(k)];
}

int control_segment_at(const PwcControls& controls, double t) {
  return segment_index(t, controls.gate_time, controls.n_pulses());
}

namespace {

void check_controls_match(const HamiltonianModel& model, const PwcControls& controls) {
  if (static_cast<std::size_t>(controls.n_channels()) != model.control_generators.size()) {
    throw Error(ErrorKind::DimensionMismatch,
                "controls have " + std::to_string(controls.n_channels()) +
                    " channels but model has " +
                    std::to_string(model.control_generators.size()) + " generators");
  }
}

ComplexMatrix system_block(const HamiltonianModel& model, const PwcControls& controls,
                           int k, double t) {
  ComplexMatrix hs = nominal_system_hamiltonian(model, controls, k);
  if (!model.coherent_error.empty()) hs += model.coherent_error_at(t, controls.gate_time);
  return hs;
}

ComplexMatrix add_bath_terms(const HamiltonianModel& model, const ComplexMatrix& system) {
  const auto n_b = model.bath_dim();
  ComplexMatrix h = kron(system, ComplexMatrix::Identity(n_b, n_b));
  h += kron(ComplexMatrix::Identity(model.system_dim(), model.system_dim()), model.bath);
  for (const auto& c : model.couplings) h += kron(c.system, c.bath);
  return h;
}

}  // namespace

ComplexMatrix nominal_system_hamiltonian(const HamiltonianModel& model,
                                         const PwcControls& controls, int k) {
  check_controls_match(model, controls);
  if (k < 0 || k >= controls.n_pulses()) {
    throw Error(ErrorKind::DimensionMismatch, "segment index out of range");
  }
  ComplexMatrix h = model.drift;
  for (std::size_t j = 0; j < model.control_generators.size(); ++j) {
    const auto& gen = model.control_generators[j];
    if (gen.rows() != h.rows()) {
      throw Error(ErrorKind::DimensionMismatch, "control generator dimension mismatch");
    }
    h += controls.channels[j][static_cast<std::size_t>(k)] * gen;
  }
  return h;
}

ComplexMatrix assemble_total_hamiltonian(const HamiltonianModel& model,
                                         const PwcControls& controls, int k) {
  const double t = (k + 0.5) * controls.segment_duration();
  return add_bath_terms(model, system_block(model, controls, k, t));
}

ComplexMatrix total_hamiltonian_at(const HamiltonianModel& model,
                                   const PwcControls& controls, double t) {
  const int k = control_segment_at(controls, t);
  return add_bath_terms(model, system_block(model, controls, k, t));
}

ComplexMatrix uncertainty_hamiltonian(const HamiltonianModel& model, double t,
                                      double gate_time) {
  return add_bath_terms(model, model.coherent_error_at(t, gate_time));
}

TargetGate hadamard_target() {
  return {(pauli::x() + pauli::z()) / std::sqrt(2.0), "hadamard"};
}

ModelBundle hadamard_sigma_z_bath(int bath_qubits) {
  if (bath_qubits < 1 || bath_qubits > 9) {
    throw Error(ErrorKind::ValidationError, "q_B: must be in [1, 9]");
  }
  const auto n_b = Eigen::Index{1} << bath_qubits;
  ComplexMatrix sum_x = ComplexMatrix::Zero(n_b, n_b);
  for (int b = 0; b < bath_qubits; ++b) sum_x += pauli::embed(pauli::x(), b, bath_qubits);
  const double sum_norm = static_cast<double>(bath_qubits);

  ModelBundle out;
  out.model.drift = ComplexMatrix::Zero(2, 2);
  out.model.control_generators = {pauli::x(), pauli::y()};
  out.model.bath = sum_x * (1.0 / sum_norm);
  out.model.couplings = {{pauli::z(), sum_x * (0.15 / sum_norm)}};
  out.controls = PwcControls::zeros(2, 5, 1.0, 7.5);
  out.target = hadamard_target();
  return out;
}

namespace {

template <typename T>
T field(const json& doc, const std::string& key, const std::string& path) {
  if (!doc.contains(key)) {
    throw Error(ErrorKind::ParseError, path + key + ": missing field");
  }
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ParseError, path + key + ": " + e.what());
  }
}

std::vector<ComplexMatrix> matrix_list(const json& doc, const std::string& key) {
  std::vector<ComplexMatrix> out;
  if (!doc.contains(key)) return out;
  const json& arr = doc.at(key);
  if (!arr.is_array()) throw Error(ErrorKind::ParseError, key + ": expected array");
  for (std::size_t i = 0; i < arr.size(); ++i) {
    out.push_back(matrix_from_json(arr[i], key + "[" + std::to_string(i) + "]"));
  }
  return out;
}

ModelBundle load_preset(const json& doc) {
  const auto name = field<std::string>(doc, "preset", "");
  if (name == "hadamard-sigma-z-bath") {
    const int q_b = doc.contains("q_B") ? field<int>(doc, "q_B", "") : 2;
    return hadamard_sigma_z_bath(q_b);
  }
  throw Error(ErrorKind::ValidationError, "preset: unknown preset '" + name + "'");
}

}  // namespace

ModelBundle load_model(const json& doc) {
  if (!doc.is_object()) throw Error(ErrorKind::ParseError, "model document must be an object");
  if (doc.contains("preset")) return load_preset(doc);

  ModelBundle out;
  auto& m = out.model;
  const auto n_s = field<Eigen::Index>(doc, "n_S", "");
  const auto n_b = field<Eigen::Index>(doc, "n_B", "");
  m.drift = doc.contains("drift") ? matrix_from_json(doc.at("drift"), "drift")
                                  : ComplexMatrix::Zero(n_s, n_s);
  m.control_generators = matrix_list(doc, "control_generators");
  m.coherent_error = matrix_list(doc, "coherent_error");
  m.bath = doc.contains("bath") ? matrix_from_json(doc.at("bath"), "bath")
                                : ComplexMatrix::Zero(n_b, n_b);
  if (doc.contains("couplings")) {
    const json& arr = doc.at("couplings");
    for (std::size_t a = 0; a < arr.size(); ++a) {
      const std::string p = "couplings[" + std::to_string(a) + "]";
      if (!arr[a].contains("system") || !arr[a].contains("bath")) {
        throw Error(ErrorKind::ParseError, p + ": expected {system, bath}");
      }
      m.couplings.push_back({matrix_from_json(arr[a].at("system"), p + ".system"),
                             matrix_from_json(arr[a].at("bath"), p + ".bath")});
    }
  }
  if (m.drift.rows() != n_s) {
    throw Error(ErrorKind::ValidationError, "drift: dimension does not match n_S");
  }
  if (m.bath.rows() != n_b) {
    throw Error(ErrorKind::ValidationError, "bath: dimension does not match n_B");
  }
  m.validate();

  if (doc.contains("target")) {
    const json& t = doc.at("target");
    if (t.is_string()) {
      if (t.get<std::string>() != "hadamard") {
        throw Error(ErrorKind::ValidationError, "target: unknown named gate");
      }
      out.target = hadamard_target();
    } else {
      out.target.unitary = matrix_from_json(t.contains("matrix") ? t.at("matrix") : t,
                                            "target.matrix");
      out.target.label = t.contains("label") ? t.at("label").get<std::string>() : "custom";
    }
  } else {
    out.target = {ComplexMatrix::Identity(n_s, n_s), "identity"};
  }
  if (out.target.unitary.rows() != n_s || !is_unitary(out.target.unitary)) {
    throw Error(ErrorKind::ValidationError, "target: must be a unitary of dimension n_S");
  }

  const json ctrl = doc.contains("controls") ? doc.at("controls") : json::object();
  auto& c = out.controls;
  c.gate_time = ctrl.contains("T") ? field<double>(ctrl, "T", "controls.") : 1.0;
  c.v_max = ctrl.contains("v_max") ? field<double>(ctrl, "v_max", "controls.") : 7.5;
  if (ctrl.contains("channels")) {
    c.channels = field<std::vector<std::vector<double>>>(ctrl, "channels", "controls.");
  } else {
    const int n = ctrl.contains("n_pulses") ? field<int>(ctrl, "n_pulses", "controls.") : 5;
    c.channels.assign(m.control_generators.size(), std::vector<double>(static_cast<std::size_t>(n), 0.0));
  }
  if (ctrl.contains("n_pulses") && ctrl.contains("channels") &&
      field<int>(ctrl, "n_pulses", "controls.") != c.n_pulses()) {
    throw Error(ErrorKind::ValidationError, "controls.n_pulses: disagrees with channel length");
  }
  if (static_cast<std::size_t>(c.n_channels()) != m.control_generators.size()) {
    throw Error(ErrorKind::ValidationError,
                "controls.channels: count must equal number of control_generators");
  }
  if (!m.control_generators.empty()) c.validate();
  return out;
}

ModelBundle load_model_file(const std::string& path) {
  return load_model(read_json_file(path));
}

json save_model(const ModelBundle& bundle) {
  const auto& m = bundle.model;
  json doc;
  doc["n_S"] = m.system_dim();
  doc["n_B"] = m.bath_dim();
  doc["drift"] = matrix_to_json(m.drift);
  doc["control_generators"] = json::array();
  for (const auto& g : m.control_generators) doc["control_generators"].push_back(matrix_to_json(g));
  if (!m.coherent_error.empty()) {
    doc["coherent_error"] = json::array();
    for (const auto& g : m.coherent_error) doc["coherent_error"].push_back(matrix_to_json(g));
  }
  doc["bath"] = matrix_to_json(m.bath);
  doc["couplings"] = json::array();
  for (const auto& c : m.couplings) {
    doc["couplings"].push_back({{"system", matrix_to_json(c.system)},
                                {"bath", matrix_to_json(c.bath)}});
  }
  doc["target"] = {{"label", bundle.target.label},
                   {"matrix", matrix_to_json(bundle.target.unitary)}};
  doc["controls"] = controls_to_json(bundle.controls);
  return doc;
}

PwcControls controls_from_json(const json& ctrl) {
  PwcControls c;
  c.gate_time = ctrl.contains("T") ? field<double>(ctrl, "T", "controls.") : 1.0;
  c.v_max = ctrl.contains("v_max") ? field<double>(ctrl, "v_max", "controls.") : 7.5;
  c.channels = field<std::vector<std::vector<double>>>(ctrl, "channels", "controls.");
  if (ctrl.contains("n_pulses") && field<int>(ctrl, "n_pulses", "controls.") != c.n_pulses()) {
    throw Error(ErrorKind::ValidationError, "controls.n_pulses: disagrees with channel length");
  }
  c.validate();
  return c;
}

json controls_to_json(const PwcControls& c) {
  return {{"T", c.gate_time}, {"n_pulses", c.n_pulses()}, {"v_max", c.v_max}, {"channels", c.channels}};
}

}  // namespace robustlimit
