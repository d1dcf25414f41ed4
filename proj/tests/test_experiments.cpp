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

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include "robustlimit/bounds.hpp"
#include "robustlimit/experiments.hpp"
#include "robustlimit/serialization.hpp"

using namespace robustlimit;
using doctest::Approx;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("robustlimit_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(slurp(p));
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

RunContext context(const fs::path& dir, std::uint64_t seed = 1) {
  RunContext c;
  c.out_dir = dir.string();
  c.seed = seed;
  return c;
}

}  // namespace

TEST_CASE("exit code mapping") {
  CHECK(exit_code_for(ErrorKind::StageOneFailed) == kExitNumerical);
  CHECK(exit_code_for(ErrorKind::Nonconvergence) == kExitNumerical);
  CHECK(exit_code_for(ErrorKind::PreconditionViolated) == kExitNumerical);
  CHECK(exit_code_for(ErrorKind::OutOfRange) == kExitUsage);
  CHECK(exit_code_for(ErrorKind::ParseError) == kExitUsage);
  CHECK(exit_code_for(ErrorKind::NotUnitary) == kExitUsage);
}

TEST_CASE("bound-curve writes the curve and a manifest") {
  const fs::path dir = fresh_dir("bound_curve");
  BoundCurveArgs a;
  a.lo = 0.15;
  a.hi = 0.3;
  a.n_points = 2;
  a.gate_times_ns = {25, 100};
  a.n_frequency_points = 10;
  const auto r = run_bound_curve(a, context(dir));
  CHECK(r.exit_code == kExitOk);
  for (const char* f : {"bound_curve.csv", "bound_curve.svg", "bound_curve_frequency.csv",
                        "bound_curve_frequency.svg", "bound-curve.manifest.json"}) {
    CHECK(fs::exists(dir / f));
  }
  const auto rows = read_csv(dir / "bound_curve.csv");
  REQUIRE(rows.size() == 3);
  CHECK(std::stod(rows[1][0]) == 0.15);
  CHECK(std::stod(rows[1][1]) == Approx(1.59e-5).epsilon(5e-3));
  CHECK(read_csv(dir / "bound_curve_frequency.csv").size() == 21);

  const auto manifest = RunManifest::from_json(read_json_file((dir / "bound-curve.manifest.json").string()));
  CHECK(manifest.command == "bound-curve");
  CHECK(manifest.seed == 1);
  CHECK(manifest.version == tool_version());
  CHECK(manifest.outputs.size() == 5);
  CHECK(slurp(dir / "bound_curve.svg").find("<svg") != std::string::npos);

  BoundCurveArgs empty;
  empty.lo = 0.5;
  empty.hi = 0.4;
  try {
    run_bound_curve(empty, context(dir));
    FAIL("empty range accepted");
  } catch (const Error& e) {
    CHECK(exit_code_for(e.kind()) == kExitUsage);
  }
}

TEST_CASE("gate-table cells") {
  const fs::path dir = fresh_dir("gate_table");
  const auto r = run_gate_table({}, context(dir));
  CHECK(r.exit_code == kExitOk);
  const auto cells = r.summary["cells"];
  REQUIRE(cells.size() == 6);
  for (const auto& c : cells) {
    CHECK(c["omega_hz"].get<double>() ==
          Approx(invert_bound(c["epsilon"], c["gate_time_ns"].get<double>() * 1e-9)));
  }
  // 1e-4 at 25 ns is about 1.5 MHz.
  CHECK(cells[0]["omega_hz"].get<double>() == Approx(1.509e6).epsilon(1e-3));
  CHECK(read_csv(dir / "gate_table.csv").size() == 7);
  CHECK(fs::exists(dir / "gate_table.json"));
}

TEST_CASE("replaying a manifest reproduces the outputs byte for byte") {
  const fs::path first = fresh_dir("replay_a");
  const fs::path second = fresh_dir("replay_b");
  NucArgs a;
  a.n_mc = 12;
  a.bath_dims = {2, 4};
  const auto r = run_nuc_experiment(a, context(first, 77));
  CHECK(r.exit_code == kExitOk);
  const auto replay = replay_manifest((first / "nuc-experiment.manifest.json").string(),
                                      context(second, 5));
  CHECK(replay.exit_code == kExitOk);
  CHECK(replay.manifest.seed == 77);
  CHECK(slurp(first / "nuc_experiment.csv") == slurp(second / "nuc_experiment.csv"));
  CHECK(slurp(first / "nuc_experiment.svg") == slurp(second / "nuc_experiment.svg"));

  // A different seed draws different generators.
  const fs::path third = fresh_dir("replay_c");
  run_nuc_experiment(a, context(third, 78));
  CHECK(slurp(first / "nuc_experiment.csv") != slurp(third / "nuc_experiment.csv"));
}

TEST_CASE("nuc-experiment ordering and the zero-delta limit") {
  const fs::path dir = fresh_dir("nuc");
  NucArgs a;
  a.n_mc = 20;
  a.bath_dims = {4};
  const auto r = run_nuc_experiment(a, context(dir));
  CHECK(r.exit_code == kExitOk);
  CHECK(r.summary["violations"] == 0);
  const auto rows = read_csv(dir / "nuc_experiment.csv");
  REQUIRE(rows.size() == 21);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double lb = std::stod(rows[i][4]);
    const double wc = std::stod(rows[i][5]);
    const double avg = std::stod(rows[i][6]);
    const double nuc = std::stod(rows[i][7]);
    CHECK(std::stod(rows[i][2]) == Approx(1.0));
    CHECK(wc <= lb + 1e-12);
    CHECK(avg <= wc + 1e-12);
    CHECK(nuc <= avg + 1e-12);
  }

  a.delta = 0.0;
  const auto zero = run_nuc_experiment(a, context(dir));
  for (const auto& d : zero.summary["per_bath_dim"]) {
    CHECK(d["mean_infid_lb"].get<double>() == 0.0);
    CHECK(std::abs(d["mean_infid_nuc"].get<double>()) < 1e-12);
  }
  NucArgs bad;
  bad.delta = -1;
  CHECK_THROWS_AS(run_nuc_experiment(bad, context(dir)), Error);
}

TEST_CASE("worst-case command") {
  const fs::path dir = fresh_dir("worst_case");
  fs::create_directories(dir);
  const std::string id_path = (dir / "id.json").string();
  save_matrix_file(ComplexMatrix::Identity(4, 4), id_path);
  WorstCaseArgs a{id_path, 2};
  const auto r = run_worst_case(a, context(dir));
  CHECK(r.exit_code == kExitOk);
  CHECK(r.summary["F_wc_exact"].get<double>() == Approx(1.0));
  CHECK(r.summary["F_nuc"].get<double>() == Approx(1.0));
  CHECK(r.summary["n_B"] == 2);

  ComplexMatrix diag = ComplexMatrix::Zero(2, 2);
  diag(0, 0) = std::polar(1.0, 0.3);
  diag(1, 1) = std::polar(1.0, -0.3);
  const std::string diag_path = (dir / "diag.json").string();
  save_matrix_file(diag, diag_path);
  const auto d = run_worst_case({diag_path, 0}, context(dir));
  CHECK(d.summary["F_wc_exact"].get<double>() == Approx(std::cos(0.3)).epsilon(1e-9));
  CHECK(d.summary["F_wc_low"].get<double>() == Approx(std::cos(0.3)).epsilon(1e-12));
  CHECK(d.summary["ordering_holds"] == true);

  const std::string bad_path = (dir / "bad.json").string();
  save_matrix_file(2.0 * ComplexMatrix::Identity(2, 2), bad_path);
  try {
    run_worst_case({bad_path, 0}, context(dir));
    FAIL("non-unitary input accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotUnitary);
    CHECK(exit_code_for(e.kind()) == kExitUsage);
  }
  CHECK_THROWS_AS(run_worst_case({id_path, 3}, context(dir)), Error);
}

TEST_CASE("optimize then evaluate") {
  const fs::path dir = fresh_dir("optimize");
  OptimizeArgs o;
  o.q_B = 1;
  o.optimizer.n_restarts = 4;
  o.optimizer.max_iters = 1500;
  const auto r = run_optimize(o, context(dir, 3));
  REQUIRE(r.exit_code == kExitOk);
  CHECK(r.summary["F_nom"].get<double>() > 1.0 - 1e-8);
  CHECK(r.summary["J_rbst"].get<double>() < 1e-4);
  const auto pulses = read_csv(dir / "pulses.csv");
  REQUIRE(pulses.size() == 11);
  CHECK(pulses[0] == std::vector<std::string>{"segment", "channel", "t_start", "t_end", "amplitude"});
  CHECK(fs::exists(dir / "pulses.svg"));

  EvaluateArgs e;
  e.pulses_path = (dir / "optimize.json").string();
  e.q_B = {1};
  e.target_tb = {0.15};
  e.n_samples = 2;
  e.n_norm_points = 2;
  const auto ev = run_evaluate(e, context(dir));
  CHECK(ev.exit_code == kExitOk);
  CHECK(read_csv(dir / "evaluate.csv").size() == 9);
  CHECK(fs::exists(dir / "evaluate_summary.json"));
  CHECK(fs::exists(dir / "evaluate.svg"));

  // Stage one cannot reach f0 = 1 with a tiny amplitude cap.
  OptimizeArgs strict = o;
  strict.two_stage = true;
  strict.optimizer.f0 = 1.0;
  strict.optimizer.v_max = 0.05;
  strict.optimizer.n_restarts = 1;
  strict.optimizer.max_iters = 20;
  const auto failed = run_optimize(strict, context(dir));
  CHECK(failed.exit_code == kExitNumerical);
  CHECK(fs::exists(dir / "optimize_diagnostics.json"));

  EvaluateArgs missing;
  CHECK_THROWS_AS(run_evaluate(missing, context(dir)), Error);
}

TEST_CASE("summary formatting") {
  const nlohmann::json s = {{"a", 0.5}, {"b", "x"}, {"c", 3}, {"nested", {{"k", 1}}}};
  CHECK(format_summary(s, "csv") == "key,value\r\na,0.5\r\nb,x\r\nc,3\r\n");
  CHECK(nlohmann::json::parse(format_summary(s, "json")) == s);
}

TEST_CASE("run_command dispatch") {
  const fs::path dir = fresh_dir("dispatch");
  const auto r = run_command("gate-table", {{"epsilons", {1e-3}}, {"gate_times_ns", {50}}},
                             context(dir));
  CHECK(r.summary["cells"].size() == 1);
  CHECK_THROWS_AS(run_command("no-such-command", nlohmann::json::object(), context(dir)), Error);
}
