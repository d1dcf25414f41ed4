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

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "robustlimit/bounds.hpp"
#include "robustlimit/errors.hpp"
#include "robustlimit/experiments.hpp"
#include "robustlimit/fidelity.hpp"
#include "robustlimit/model.hpp"
#include "robustlimit/optimizer.hpp"

namespace py = pybind11;
using namespace robustlimit;

namespace {

ComplexMatrix identity_like(const ComplexMatrix& u, Eigen::Index n_s) {
  return ComplexMatrix::Identity(n_s > 0 ? n_s : u.rows(), n_s > 0 ? n_s : u.rows());
}

py::dict optimize_hadamard(int q_b, double lambda, int restarts, int max_iters, bool two_stage,
                           double f0, std::uint64_t seed, int threads) {
  const ModelBundle bundle = hadamard_sigma_z_bath(q_b);
  OptimizerConfig cfg;
  cfg.lambda = lambda;
  cfg.n_restarts = restarts;
  cfg.max_iters = max_iters;
  cfg.f0 = f0;
  cfg.seed = seed;
  cfg.threads = threads;
  OptimizationOutcome o;
  NullspaceCertificate cert;
  {
    py::gil_scoped_release release;
    o = two_stage ? optimize_two_stage(bundle.model, bundle.target.unitary, bundle.controls, cfg)
                  : optimize_single_stage(bundle.model, bundle.target.unitary, bundle.controls, cfg);
    cert = nullspace_check(bundle.model, o.controls, cfg.n_avg, pauli::z());
  }
  py::dict out;
  out["channels"] = o.controls.channels;
  out["nominal_fidelity"] = o.nominal_fidelity;
  out["robustness"] = o.robustness;
  out["objective"] = o.objective;
  out["restart_index"] = o.restart_index;
  out["max_abs_amplitude"] = o.controls.max_abs_amplitude();
  out["nullspace_residual"] = cert.residual;
  return out;
}

}  // namespace

PYBIND11_MODULE(_robustlimit, m) {
  m.doc() = "Fidelity limits for robust quantum gates";
  py::register_exception<Error>(m, "Error", PyExc_ValueError);

  m.attr("__version__") = tool_version();
  m.attr("PHYSICAL_RANGE_RAD") = kPhysicalRangeRad;

  m.def("fidelity_lower_bound", &fidelity_lower_bound, py::arg("t_omega_bnd"));
  m.def("infidelity_bound", &infidelity_bound, py::arg("t_omega_bnd"));
  m.def("invert_bound", &invert_bound, py::arg("target_infidelity"), py::arg("gate_time_s"),
        "Largest Omega_bnd / 2pi in Hz meeting the target infidelity");
  m.def("t_omega_for_infidelity", &t_omega_for_infidelity, py::arg("target_infidelity"));
  m.def(
      "bound_curve",
      [](double lo, double hi, int n) {
        std::vector<std::pair<double, double>> out;
        for (const auto& p : bound_curve(lo, hi, n)) out.emplace_back(p.t_omega_rad, p.infidelity);
        return out;
      },
      py::arg("lo"), py::arg("hi"), py::arg("n_points"));

  m.def("worst_case_lower_bound", &worst_case_lower_bound, py::arg("interaction"));
  m.def("average_lower_bound", &average_lower_bound_eigenphase, py::arg("interaction"));
  m.def(
      "worst_case_exact",
      [](const ComplexMatrix& u, Eigen::Index n_s) {
        const ComplexMatrix id = identity_like(u, n_s);
        return worst_case_exact(u, id, id);
      },
      py::arg("interaction"), py::arg("n_S") = 0);
  m.def(
      "nuclear_fidelity",
      [](const ComplexMatrix& u, Eigen::Index n_s, Eigen::Index n_b) {
        const auto r = nuclear_fidelity(u, n_s, n_b);
        return py::make_tuple(r.value, r.optimal_bath_unitary);
      },
      py::arg("interaction"), py::arg("n_S"), py::arg("n_B"));
  m.def("op_norm", &op_norm, py::arg("a"));

  m.def("optimize_hadamard", &optimize_hadamard, py::arg("q_B") = 2, py::arg("lambda_") = 0.1,
        py::arg("restarts") = 20, py::arg("max_iters") = 4000, py::arg("two_stage") = false,
        py::arg("f0") = 0.9999, py::arg("seed") = 1, py::arg("threads") = 1);

  m.def(
      "run_command",
      [](const std::string& command, const std::string& args_json, const std::string& out_dir,
         std::uint64_t seed, int threads) {
        RunContext ctx;
        ctx.out_dir = out_dir;
        ctx.seed = seed;
        ctx.threads = threads;
        const nlohmann::json args = nlohmann::json::parse(args_json);
        CommandResult r;
        {
          py::gil_scoped_release release;
          r = run_command(command, args, ctx);
        }
        return py::make_tuple(r.exit_code, r.summary.dump());
      },
      py::arg("command"), py::arg("args_json"), py::arg("out_dir"), py::arg("seed") = 1,
      py::arg("threads") = 1);
}
