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

// Command pipelines behind the robustlimit CLI. Each command writes its data
// files plus a RunManifest into the output directory and returns an exit code
// (0 success, 2 usage, 3 numerical failure, 4 validation violation).

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "robustlimit/errors.hpp"
#include "robustlimit/optimizer.hpp"

namespace robustlimit {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitViolation = 4;

/// Maps a library error onto the CLI exit codes.
int exit_code_for(ErrorKind kind);

const char* tool_version();

struct RunContext {
  std::string out_dir = ".";
  std::uint64_t seed = 1;
  int threads = 1;
  std::string format = "csv";  // stdout summary format: csv | json
};

struct RunManifest {
  std::string command;
  nlohmann::json config;  // {"args": ..., "seed": ...}
  std::uint64_t seed = 1;
  std::string version;
  std::vector<std::string> outputs;  // file names relative to the output directory
  double duration_s = 0.0;

  nlohmann::json to_json() const;
  static RunManifest from_json(const nlohmann::json& j);
};

struct CommandResult {
  int exit_code = kExitOk;
  nlohmann::json summary;
  RunManifest manifest;
};

struct BoundCurveArgs {
  double lo = 0.01;
  double hi = 1.87;
  int n_points = 187;
  std::vector<double> gate_times_ns;  // non-empty adds the frequency-axis family
  int n_frequency_points = 200;
};

struct GateTableArgs {
  std::vector<double> epsilons{1e-4, 1e-5};
  std::vector<double> gate_times_ns{25.0, 50.0, 100.0};
};

struct OptimizeArgs {
  std::string preset = "hadamard-sigma-z-bath";
  int q_B = 2;
  std::string model_path;  // overrides preset when set
  int n_pulses = 5;
  double gate_time = 1.0;
  bool two_stage = false;
  OptimizerConfig optimizer;
};

struct EvaluateArgs {
  std::string pulses_path;
  std::string model_path;  // system part; defaults to the Hadamard preset
  std::vector<int> q_B{2};
  std::vector<std::string> modes{"commuting", "non-commuting"};
  std::vector<double> target_tb{0.15, 0.3};
  double th_b_lo = 0.05;
  double th_b_hi = 2.0;
  int n_samples = 100;
  int n_norm_points = 8;
  /// never | always | below-bound | auto (always for q_B <= 3, else below-bound)
  std::string exact = "auto";
  int n_avg = kDefaultAveragingSamples;
  double max_robustness = 1e-4;
};

struct NucArgs {
  double delta = 0.025;
  int n_mc = 500;
  std::vector<int> bath_dims{4, 64};
  int system_dim = 2;
};

struct WorstCaseArgs {
  std::string unitary_path;
  int n_S = 0;  // 0 means the whole space is the system (n_B = 1)
};

nlohmann::json to_json(const BoundCurveArgs& a);
nlohmann::json to_json(const GateTableArgs& a);
nlohmann::json to_json(const OptimizeArgs& a);
nlohmann::json to_json(const EvaluateArgs& a);
nlohmann::json to_json(const NucArgs& a);
nlohmann::json to_json(const WorstCaseArgs& a);

CommandResult run_bound_curve(const BoundCurveArgs& args, const RunContext& ctx);
CommandResult run_gate_table(const GateTableArgs& args, const RunContext& ctx);
CommandResult run_optimize(const OptimizeArgs& args, const RunContext& ctx);
CommandResult run_evaluate(const EvaluateArgs& args, const RunContext& ctx);
CommandResult run_nuc_experiment(const NucArgs& args, const RunContext& ctx);
CommandResult run_worst_case(const WorstCaseArgs& args, const RunContext& ctx);

/// Runs a command from its name and the "args" object of a manifest config.
CommandResult run_command(const std::string& command, const nlohmann::json& args,
                          const RunContext& ctx);

/// Re-executes the run described by a manifest file into ctx.out_dir using the
/// manifest's seed.
CommandResult replay_manifest(const std::string& manifest_path, RunContext ctx);

/// Human-readable summary in ctx.format.
std::string format_summary(const nlohmann::json& summary, const std::string& format);

}  // namespace robustlimit
