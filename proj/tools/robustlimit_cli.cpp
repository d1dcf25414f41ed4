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

#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "robustlimit/errors.hpp"
#include "robustlimit/experiments.hpp"

using namespace robustlimit;

int main(int argc, char** argv) {
  CLI::App app{"Robust quantum gate performance limits"};
  app.set_version_flag("--version", tool_version());
  app.require_subcommand(1);
  app.fallthrough();

  RunContext ctx;
  ctx.threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  app.add_option("--seed", ctx.seed, "Root RNG seed")->envname("ROBUSTLIMIT_SEED");
  app.add_option("--out-dir", ctx.out_dir, "Output directory")->envname("ROBUSTLIMIT_OUT_DIR");
  app.add_option("--threads", ctx.threads, "Worker threads")
      ->envname("ROBUSTLIMIT_THREADS")
      ->check(CLI::PositiveNumber);
  app.add_option("--format", ctx.format, "Summary format on stdout")
      ->envname("ROBUSTLIMIT_FORMAT")
      ->check(CLI::IsMember({"csv", "json"}));

  BoundCurveArgs curve;
  auto* c_curve = app.add_subcommand("bound-curve", "Infidelity limit vs T*Omega or Omega");
  c_curve->add_option("--lo", curve.lo, "Smallest T*Omega_bnd (rad)");
  c_curve->add_option("--hi", curve.hi, "Largest T*Omega_bnd (rad)");
  c_curve->add_option("--points", curve.n_points, "Grid points");
  c_curve->add_option("--gate-times", curve.gate_times_ns, "Gate times in ns for the frequency axis")
      ->delimiter(',');
  c_curve->add_option("--frequency-points", curve.n_frequency_points, "Points per gate time");

  GateTableArgs table;
  auto* c_table = app.add_subcommand("gate-table", "Maximum uncertainty frequency per target");
  c_table->add_option("--eps", table.epsilons, "Target infidelities")->delimiter(',');
  c_table->add_option("--gate-times", table.gate_times_ns, "Gate times in ns")->delimiter(',');

  OptimizeArgs opt;
  auto* c_opt = app.add_subcommand("optimize", "Robust PWC control search");
  c_opt->add_option("--preset", opt.preset, "Built-in model");
  c_opt->add_option("--q-b", opt.q_B, "Bath qubits for the preset");
  c_opt->add_option("--model", opt.model_path, "Model JSON file (overrides the preset)");
  c_opt->add_option("--n-pulses", opt.n_pulses, "PWC segments");
  c_opt->add_option("--gate-time", opt.gate_time, "Gate time T");
  c_opt->add_flag("--two-stage", opt.two_stage, "Reach F_nom >= f0, then minimize J_rbst");
  c_opt->add_option("--f0", opt.optimizer.f0, "Two-stage fidelity floor");
  c_opt->add_option("--lambda", opt.optimizer.lambda, "Robustness weight");
  c_opt->add_option("--v-max", opt.optimizer.v_max, "Amplitude bound");
  c_opt->add_option("--restarts", opt.optimizer.n_restarts, "Random restarts");
  c_opt->add_option("--max-iters", opt.optimizer.max_iters, "Iterations per restart and stage");
  c_opt->add_option("--n-avg", opt.optimizer.n_avg, "Averaging grid size");

  EvaluateArgs eval;
  auto* c_eval = app.add_subcommand("evaluate", "Evaluate pulses against random bath ensembles");
  c_eval->add_option("--pulses", eval.pulses_path, "optimize.json or a controls file")->required();
  c_eval->add_option("--model", eval.model_path, "System model JSON (defaults to the Hadamard preset)");
  c_eval->add_option("--q-b", eval.q_B, "Bath qubit counts")->delimiter(',');
  c_eval->add_option("--modes", eval.modes, "commuting,non-commuting")->delimiter(',');
  c_eval->add_option("--target-tb", eval.target_tb, "||T B|| targets (rad)")->delimiter(',');
  c_eval->add_option("--th-lo", eval.th_b_lo, "Smallest ||T H_B||");
  c_eval->add_option("--th-hi", eval.th_b_hi, "Largest ||T H_B||");
  c_eval->add_option("--samples", eval.n_samples, "Baths per norm point");
  c_eval->add_option("--norm-points", eval.n_norm_points, "||T H_B|| grid points");
  c_eval->add_option("--exact", eval.exact, "Exact worst case: auto|never|always|below-bound")
      ->check(CLI::IsMember({"auto", "never", "always", "below-bound"}));
  c_eval->add_option("--n-avg", eval.n_avg, "Averaging grid size");
  c_eval->add_option("--max-robustness", eval.max_robustness, "Largest accepted J_rbst");

  NucArgs nuc;
  auto* c_nuc = app.add_subcommand("nuc-experiment", "Nuclear-norm vs average fidelity bounds");
  c_nuc->add_option("--delta", nuc.delta, "Generator scale");
  c_nuc->add_option("--n-mc", nuc.n_mc, "Random generators per bath size");
  c_nuc->add_option("--bath-dims", nuc.bath_dims, "Bath dimensions")->delimiter(',');
  c_nuc->add_option("--system-dim", nuc.system_dim, "System dimension");

  WorstCaseArgs wc;
  auto* c_wc = app.add_subcommand("worst-case", "Fidelity measures of a unitary");
  c_wc->add_option("--unitary", wc.unitary_path, "Matrix JSON file")->required();
  c_wc->add_option("--n-s", wc.n_S, "System dimension (default: whole space)");

  std::string manifest;
  auto* c_replay = app.add_subcommand("replay", "Re-run a recorded manifest");
  c_replay->add_option("manifest", manifest, "Manifest JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    CommandResult result;
    if (*c_curve) result = run_bound_curve(curve, ctx);
    if (*c_table) result = run_gate_table(table, ctx);
    if (*c_opt) result = run_optimize(opt, ctx);
    if (*c_eval) result = run_evaluate(eval, ctx);
    if (*c_nuc) result = run_nuc_experiment(nuc, ctx);
    if (*c_wc) result = run_worst_case(wc, ctx);
    if (*c_replay) result = replay_manifest(manifest, ctx);
    std::cout << format_summary(result.summary, ctx.format);
    return result.exit_code;
  } catch (const Error& e) {
    std::cerr << "error [" << to_string(e.kind()) << "]: " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}
