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

#include "robustlimit/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <numbers>
#include <sstream>

#include "robustlimit/bath_ensemble.hpp"
#include "robustlimit/bounds.hpp"
#include "robustlimit/errors.hpp"
#include "robustlimit/fidelity.hpp"
#include "robustlimit/model.hpp"
#include "robustlimit/parallel.hpp"
#include "robustlimit/plotting.hpp"
#include "robustlimit/random.hpp"
#include "robustlimit/serialization.hpp"

#ifndef ROBUSTLIMIT_VERSION
#define ROBUSTLIMIT_VERSION "0.0.0"
#endif

namespace robustlimit {

using nlohmann::json;
namespace fs = std::filesystem;

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::StageOneFailed:
    case ErrorKind::Nonconvergence:
    case ErrorKind::PreconditionViolated:
      return kExitNumerical;
    default:
      return kExitUsage;
  }
}

const char* tool_version() { return ROBUSTLIMIT_VERSION; }

json RunManifest::to_json() const {
  return {{"command", command},   {"config", config},
          {"seed", seed},         {"version", version},
          {"outputs", outputs},   {"duration_s", duration_s}};
}

RunManifest RunManifest::from_json(const json& j) {
  RunManifest m;
  try {
    m.command = j.at("command").get<std::string>();
    m.config = j.at("config");
    m.seed = j.at("seed").get<std::uint64_t>();
    m.version = j.value("version", std::string());
    m.outputs = j.value("outputs", std::vector<std::string>{});
    m.duration_s = j.value("duration_s", 0.0);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("manifest: ") + e.what());
  }
  return m;
}

namespace {

template <class T>
void get(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string(key) + ": " + e.what());
  }
}

// Collects outputs for one command invocation and writes its manifest.
class Run {
 public:
  Run(std::string command, json args, const RunContext& ctx)
      : ctx_(ctx), start_(std::chrono::steady_clock::now()) {
    manifest_.command = std::move(command);
    manifest_.seed = ctx.seed;
    manifest_.version = tool_version();
    manifest_.config = {{"args", std::move(args)}, {"seed", ctx.seed}};
    fs::create_directories(ctx.out_dir);
  }

  std::string path(const std::string& name) {
    if (std::find(manifest_.outputs.begin(), manifest_.outputs.end(), name) ==
        manifest_.outputs.end()) {
      manifest_.outputs.push_back(name);
    }
    return (fs::path(ctx_.out_dir) / name).string();
  }

  void csv(const std::string& name, const CsvTable& t) { t.write_file(path(name)); }
  void json_file(const std::string& name, const json& j) { write_json_file(j, path(name)); }
  void svg(const std::string& name, const PlotSpec& p) { write_svg(p, path(name)); }

  CommandResult finish(json summary, int exit_code) {
    const std::string manifest_name = manifest_.command + ".manifest.json";
    path(manifest_name);
    manifest_.duration_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    write_json_file(manifest_.to_json(), (fs::path(ctx_.out_dir) / manifest_name).string());
    return {exit_code, std::move(summary), manifest_};
  }

 private:
  RunContext ctx_;
  RunManifest manifest_;
  std::chrono::steady_clock::time_point start_;
};

PlotSpec bound_plot(const std::vector<CurvePoint>& curve) {
  PlotSpec p;
  p.title = "Infidelity limit bound";
  p.x_label = "T Omega_bnd (rad)";
  p.y_label = "1 - F_lb";
  Series s{"1 - F_lb", {}, {}, SeriesStyle::Line, "#000000"};
  for (const auto& c : curve) {
    s.x.push_back(c.t_omega_rad);
    s.y.push_back(c.infidelity);
  }
  p.series.push_back(std::move(s));
  return p;
}

std::string frequency_label(double hz) {
  std::ostringstream os;
  os.precision(3);
  if (hz >= 1e6) {
    os << hz / 1e6 << " MHz";
  } else {
    os << hz / 1e3 << " kHz";
  }
  return os.str();
}

ModelBundle bundle_for(const std::string& preset, int q_b, const std::string& model_path) {
  if (!model_path.empty()) return load_model_file(model_path);
  if (preset != "hadamard-sigma-z-bath") {
    throw Error(ErrorKind::ValidationError, "preset: unknown name '" + preset + "'");
  }
  return hadamard_sigma_z_bath(q_b);
}

PwcControls load_pulses(const std::string& path) {
  const json doc = read_json_file(path);
  return controls_from_json(doc.contains("controls") ? doc.at("controls") : doc);
}

}  // namespace

json to_json(const BoundCurveArgs& a) {
  return {{"lo", a.lo}, {"hi", a.hi}, {"n_points", a.n_points},
          {"gate_times_ns", a.gate_times_ns}, {"n_frequency_points", a.n_frequency_points}};
}

json to_json(const GateTableArgs& a) {
  return {{"epsilons", a.epsilons}, {"gate_times_ns", a.gate_times_ns}};
}

json to_json(const OptimizeArgs& a) {
  return {{"preset", a.preset},       {"q_B", a.q_B},
          {"model_path", a.model_path}, {"n_pulses", a.n_pulses},
          {"gate_time", a.gate_time}, {"two_stage", a.two_stage},
          {"optimizer", a.optimizer.to_json()}};
}

json to_json(const EvaluateArgs& a) {
  return {{"pulses_path", a.pulses_path}, {"model_path", a.model_path},
          {"q_B", a.q_B},                 {"modes", a.modes},
          {"target_tb", a.target_tb},     {"th_b_lo", a.th_b_lo},
          {"th_b_hi", a.th_b_hi},         {"n_samples", a.n_samples},
          {"n_norm_points", a.n_norm_points}, {"exact", a.exact},
          {"n_avg", a.n_avg},             {"max_robustness", a.max_robustness}};
}

json to_json(const NucArgs& a) {
  return {{"delta", a.delta}, {"n_mc", a.n_mc}, {"bath_dims", a.bath_dims},
          {"system_dim", a.system_dim}};
}

json to_json(const WorstCaseArgs& a) {
  return {{"unitary_path", a.unitary_path}, {"n_S", a.n_S}};
}

CommandResult run_bound_curve(const BoundCurveArgs& a, const RunContext& ctx) {
  const auto curve = bound_curve(a.lo, a.hi, a.n_points);
  Run run("bound-curve", to_json(a), ctx);

  CsvTable table({"t_omega_rad", "infidelity_bound"});
  for (const auto& c : curve) table.add_row({c.t_omega_rad, c.infidelity});
  run.csv("bound_curve.csv", table);
  run.svg("bound_curve.svg", bound_plot(curve));

  json summary = {{"points", curve.size()},
                  {"infidelity_at_0.15", infidelity_bound(0.15)},
                  {"infidelity_at_0.30", infidelity_bound(0.30)},
                  {"physical_range_rad", kPhysicalRangeRad}};

  if (!a.gate_times_ns.empty()) {
    const auto freq = bound_curve_frequency(a.gate_times_ns, a.n_frequency_points);
    CsvTable ft({"gate_time_ns", "omega_mhz", "infidelity_bound"});
    PlotSpec p;
    p.title = "Infidelity limit vs uncertainty frequency";
    p.x_label = "Omega_bnd / 2pi (MHz)";
    p.y_label = "1 - F_lb";
    for (const double t : a.gate_times_ns) {
      Series s;
      s.label = "T = " + format_double(t) + " ns";
      for (const auto& f : freq) {
        if (f.gate_time_ns != t) continue;
        ft.add_row({f.gate_time_ns, f.omega_hz / 1e6, f.infidelity});
        s.x.push_back(f.omega_hz / 1e6);
        s.y.push_back(f.infidelity);
      }
      p.series.push_back(std::move(s));
    }
    run.csv("bound_curve_frequency.csv", ft);
    run.svg("bound_curve_frequency.svg", p);
    summary["frequency_points"] = freq.size();
  }
  return run.finish(std::move(summary), kExitOk);
}

CommandResult run_gate_table(const GateTableArgs& a, const RunContext& ctx) {
  if (a.epsilons.empty() || a.gate_times_ns.empty()) {
    throw Error(ErrorKind::ValidationError, "gate-table: need at least one epsilon and gate time");
  }
  Run run("gate-table", to_json(a), ctx);
  CsvTable table({"epsilon", "gate_time_ns", "t_omega_rad", "omega_hz", "omega_display"});
  json cells = json::array();
  for (const double eps : a.epsilons) {
    for (const double t_ns : a.gate_times_ns) {
      if (!(t_ns > 0.0)) throw Error(ErrorKind::ValidationError, "gate_time_ns: must be positive");
      const double hz = invert_bound(eps, t_ns * 1e-9);
      const double t_omega = t_omega_for_infidelity(eps);
      table.add_row({eps, t_ns, t_omega, hz, frequency_label(hz)});
      cells.push_back({{"epsilon", eps}, {"gate_time_ns", t_ns}, {"omega_hz", hz},
                       {"display", frequency_label(hz)}});
    }
  }
  run.csv("gate_table.csv", table);
  run.json_file("gate_table.json", {{"cells", cells}});
  return run.finish({{"cells", cells}}, kExitOk);
}

CommandResult run_optimize(const OptimizeArgs& a, const RunContext& ctx) {
  ModelBundle bundle = bundle_for(a.preset, a.q_B, a.model_path);
  OptimizerConfig cfg = a.optimizer;
  cfg.seed = ctx.seed;
  cfg.threads = ctx.threads;
  PwcControls layout = bundle.controls;
  if (a.model_path.empty()) {
    layout = PwcControls::zeros(static_cast<int>(bundle.model.control_generators.size()),
                                a.n_pulses, a.gate_time, cfg.v_max);
  }
  layout.v_max = cfg.v_max;

  json args = to_json(a);
  Run run("optimize", args, ctx);
  OptimizationOutcome outcome;
  try {
    outcome = a.two_stage ? optimize_two_stage(bundle.model, bundle.target.unitary, layout, cfg)
                          : optimize_single_stage(bundle.model, bundle.target.unitary, layout, cfg);
  } catch (const Error& e) {
    const json diag = {{"error", to_string(e.kind())}, {"message", e.what()},
                       {"config", cfg.to_json()}};
    run.json_file("optimize_diagnostics.json", diag);
    return run.finish(diag, exit_code_for(e.kind()));
  }

  json nullspace = nullptr;
  double residual = std::nan("");
  const auto terms = robustness_terms(bundle.model);
  if (!terms.empty()) {
    const auto cert = nullspace_check(bundle.model, outcome.controls, cfg.n_avg, terms.front());
    residual = cert.residual;
    nullspace = {{"residual", cert.residual}, {"averaged_op_norm", cert.averaged_op_norm}};
  }
  json result = outcome_to_json(outcome, cfg, residual);
  result["target"] = bundle.target.label;
  result["two_stage"] = a.two_stage;
  result["nullspace"] = nullspace;
  run.json_file("optimize.json", result);

  CsvTable pulses({"segment", "channel", "t_start", "t_end", "amplitude"});
  PlotSpec plot;
  plot.title = "PWC control pulses";
  plot.x_label = "t / T";
  plot.y_label = "amplitude (rad / T)";
  plot.log_y = false;
  const double dt = outcome.controls.segment_duration();
  for (int k = 0; k < outcome.controls.n_pulses(); ++k) {
    for (int j = 0; j < outcome.controls.n_channels(); ++j) {
      pulses.add_row({static_cast<long long>(k), static_cast<long long>(j), k * dt, (k + 1) * dt,
                      outcome.controls.channels[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)]});
    }
  }
  for (int j = 0; j < outcome.controls.n_channels(); ++j) {
    Series s;
    s.label = "v" + std::to_string(j);
    s.style = SeriesStyle::Steps;
    const auto& ch = outcome.controls.channels[static_cast<std::size_t>(j)];
    for (int k = 0; k < outcome.controls.n_pulses(); ++k) {
      s.x.push_back(k * dt / outcome.controls.gate_time);
      s.y.push_back(ch[static_cast<std::size_t>(k)]);
    }
    s.x.push_back(1.0);
    s.y.push_back(ch.back());
    plot.series.push_back(std::move(s));
  }
  run.csv("pulses.csv", pulses);
  run.svg("pulses.svg", plot);

  json summary = {{"F_nom", outcome.nominal_fidelity},
                  {"infidelity_nom", 1.0 - outcome.nominal_fidelity},
                  {"J_rbst", outcome.robustness},
                  {"objective", outcome.objective},
                  {"max_abs_amplitude", outcome.controls.max_abs_amplitude()},
                  {"restart_index", outcome.restart_index},
                  {"residual_A", nullspace.is_null() ? json(nullptr) : json(residual)}};
  return run.finish(std::move(summary), kExitOk);
}

CommandResult run_evaluate(const EvaluateArgs& a, const RunContext& ctx) {
  if (a.pulses_path.empty()) throw Error(ErrorKind::ValidationError, "evaluate: --pulses is required");
  const PwcControls controls = load_pulses(a.pulses_path);
  const ModelBundle system = bundle_for("hadamard-sigma-z-bath", 1, a.model_path);
  if (system.model.couplings.size() != 1) {
    throw Error(ErrorKind::ValidationError, "model: evaluate needs exactly one coupling");
  }
  for (const auto& m : a.modes) {
    if (m != "commuting" && m != "non-commuting") {
      throw Error(ErrorKind::ValidationError, "modes: expected commuting or non-commuting");
    }
  }
  if (a.exact != "auto" && a.exact != "never" && a.exact != "always" && a.exact != "below-bound") {
    throw Error(ErrorKind::ValidationError, "exact: expected auto, never, always or below-bound");
  }

  Run run("evaluate", to_json(a), ctx);
  CsvTable table({"mode", "q_B", "target_TB", "TH_B", "t_omega_bnd_rad", "infid_wc_low",
                  "infid_wc_exact", "seed"});
  json groups = json::array();
  long long violations = 0;
  long long failures = 0;
  PlotSpec plot;
  plot.title = "Bath ensembles against the limit bound";
  plot.x_label = "T Omega_bnd (rad)";
  plot.y_label = "1 - F_wc_low";
  double max_t_omega = 0.0;

  for (const int q : a.q_B) {
    for (const auto& mode : a.modes) {
      for (const double tb : a.target_tb) {
        BathEnsembleSpec spec;
        spec.q_B = q;
        spec.commuting = mode == "commuting";
        spec.target_tb_norm = tb;
        spec.th_b_lo = a.th_b_lo;
        spec.th_b_hi = a.th_b_hi;
        spec.n_samples = a.n_samples;
        spec.n_norm_points = a.n_norm_points;
        spec.gate_time = controls.gate_time;
        spec.seed = ctx.seed;

        EvaluationOptions opt;
        opt.n_avg = a.n_avg;
        opt.threads = ctx.threads;
        opt.max_robustness = a.max_robustness;
        if (a.exact == "never") {
          opt.exact = ExactWorstCase::Never;
        } else if (a.exact == "always" || (a.exact == "auto" && q <= 3)) {
          opt.exact = ExactWorstCase::Always;
        } else {
          opt.exact = ExactWorstCase::BelowBound;
        }

        const auto records =
            evaluate_ensemble(system.model, controls, system.target.unitary, spec, opt);
        Series s;
        s.label = "q_B=" + std::to_string(q) + (spec.commuting ? " comm " : " non-comm ") +
                  format_double(tb);
        s.style = SeriesStyle::Points;
        for (const auto& r : records) {
          table.add_row({mode, static_cast<long long>(q), r.tb_norm, r.th_b_norm,
                         r.t_omega_effective, r.infidelity_wc_low,
                         r.infidelity_wc_exact ? CsvCell(*r.infidelity_wc_exact)
                                               : CsvCell(std::string()),
                         static_cast<long long>(spec.seed)});
          if (r.error) continue;
          s.x.push_back(r.t_omega_effective);
          s.y.push_back(r.infidelity_wc_low);
          max_t_omega = std::max(max_t_omega, r.t_omega_effective);
        }
        plot.series.push_back(std::move(s));
        json summary = ensemble_summary(records, spec);
        violations += summary["violations"].get<long long>();
        failures += summary["failed_records"].get<long long>();
        groups.push_back(std::move(summary));
      }
    }
  }

  const double hi = std::min(std::max(1.1 * max_t_omega, 0.1), kPhysicalRangeRad);
  PlotSpec with_bound = bound_plot(bound_curve(0.01, hi, 200));
  with_bound.title = plot.title;
  with_bound.y_label = plot.y_label + " and 1 - F_lb";
  for (auto& s : plot.series) with_bound.series.push_back(std::move(s));

  run.csv("evaluate.csv", table);
  run.svg("evaluate.svg", with_bound);
  const json summary = {{"groups", groups}, {"violations", violations},
                        {"failed_records", failures}};
  run.json_file("evaluate_summary.json", summary);
  const int code = violations > 0 ? kExitViolation : failures > 0 ? kExitNumerical : kExitOk;
  return run.finish({{"violations", violations}, {"failed_records", failures},
                     {"records", table.size()}},
                    code);
}

CommandResult run_nuc_experiment(const NucArgs& a, const RunContext& ctx) {
  if (!(a.delta >= 0.0) || a.n_mc < 1 || a.system_dim < 1 || a.bath_dims.empty()) {
    throw Error(ErrorKind::ValidationError, "nuc-experiment: need delta >= 0, n_mc >= 1, dims >= 1");
  }
  Run run("nuc-experiment", to_json(a), ctx);
  CsvTable table({"n_B", "sample", "h_norm", "t_omega_bnd_rad", "infid_lb", "infid_wc_low",
                  "infid_avg_low", "infid_nuc"});
  PlotSpec plot;
  plot.title = "Limit, average and nuclear-norm infidelities";
  plot.x_label = "sample";
  plot.y_label = "infidelity";
  json per_dim = json::array();
  long long violations = 0;
  const char* colors[] = {"#000000", "#d62728", "#1f77b4"};

  for (const int n_b : a.bath_dims) {
    if (n_b < 1) throw Error(ErrorKind::ValidationError, "bath_dims: must be positive");
    const Eigen::Index d = static_cast<Eigen::Index>(a.system_dim) * n_b;
    require_dimension(d, "n_S * n_B");
    std::vector<double> lb(static_cast<std::size_t>(a.n_mc));
    std::vector<double> avg(lb.size());
    std::vector<double> nuc(lb.size());
    std::vector<double> wc(lb.size());
    std::vector<double> h_norm(lb.size());
    parallel_for(lb.size(), ctx.threads, [&](std::size_t s) {
      Rng rng = make_stream(ctx.seed, {static_cast<std::uint64_t>(n_b), s});
      ComplexMatrix h = random_hermitian(d, rng);
      h /= op_norm_hermitian(h);
      h_norm[s] = op_norm_hermitian(h);
      const ComplexMatrix u = expm_hermitian_generator(h, -a.delta);
      // A constant generator of norm delta has c(T) = delta ||H||.
      lb[s] = infidelity_bound(2.0 * std::sqrt(a.delta * h_norm[s]));
      wc[s] = 1.0 - worst_case_lower_bound(u);
      avg[s] = 1.0 - average_lower_bound_eigenphase(u);
      nuc[s] = 1.0 - nuclear_fidelity(u, a.system_dim, n_b).value;
    });
    double max_norm_error = 0.0;
    Series s_lb{"1-F_lb n_B=" + std::to_string(n_b), {}, {}, SeriesStyle::Line, colors[0]};
    Series s_avg{"1-F_avg n_B=" + std::to_string(n_b), {}, {}, SeriesStyle::Points, colors[1]};
    Series s_nuc{"1-F_nuc n_B=" + std::to_string(n_b), {}, {}, SeriesStyle::Points, colors[2]};
    long long local = 0;
    for (std::size_t s = 0; s < lb.size(); ++s) {
      table.add_row({static_cast<long long>(n_b), static_cast<long long>(s), h_norm[s],
                     2.0 * std::sqrt(a.delta * h_norm[s]), lb[s], wc[s], avg[s], nuc[s]});
      max_norm_error = std::max(max_norm_error, std::abs(h_norm[s] - 1.0));
      if (nuc[s] > avg[s] + 1e-12) ++local;
      const double x = static_cast<double>(s);
      s_lb.x.push_back(x);
      s_lb.y.push_back(lb[s]);
      s_avg.x.push_back(x);
      s_avg.y.push_back(avg[s]);
      s_nuc.x.push_back(x);
      s_nuc.y.push_back(nuc[s]);
    }
    violations += local;
    auto mean = [](const std::vector<double>& v) {
      double t = 0.0;
      for (double x : v) t += x;
      return t / static_cast<double>(v.size());
    };
    per_dim.push_back({{"n_B", n_b},
                       {"mean_infid_lb", mean(lb)},
                       {"mean_infid_wc_low", mean(wc)},
                       {"mean_infid_avg_low", mean(avg)},
                       {"mean_infid_nuc", mean(nuc)},
                       {"max_norm_error", max_norm_error},
                       {"ordering_violations", local}});
    plot.series.push_back(std::move(s_lb));
    plot.series.push_back(std::move(s_avg));
    plot.series.push_back(std::move(s_nuc));
  }
  run.csv("nuc_experiment.csv", table);
  run.svg("nuc_experiment.svg", plot);
  const json summary = {{"per_bath_dim", per_dim}, {"violations", violations}};
  run.json_file("nuc_experiment_summary.json", summary);
  return run.finish(summary, violations > 0 ? kExitViolation : kExitOk);
}

CommandResult run_worst_case(const WorstCaseArgs& a, const RunContext& ctx) {
  if (a.unitary_path.empty()) {
    throw Error(ErrorKind::ValidationError, "worst-case: --unitary is required");
  }
  const ComplexMatrix u = load_matrix_file(a.unitary_path);
  if (u.rows() != u.cols()) throw Error(ErrorKind::DimensionMismatch, "unitary: must be square");
  require_unitary(u, "unitary");
  const Eigen::Index d = u.rows();
  const Eigen::Index n_s = a.n_S > 0 ? a.n_S : d;
  if (d % n_s != 0) throw Error(ErrorKind::DimensionMismatch, "n_S: must divide the dimension");
  const Eigen::Index n_b = d / n_s;

  Run run("worst-case", to_json(a), ctx);
  const ComplexMatrix id_s = ComplexMatrix::Identity(n_s, n_s);
  const double wc_exact = worst_case_exact(u, id_s, id_s);
  const double wc_low = worst_case_lower_bound(u);
  const double avg_low = average_lower_bound_eigenphase(u);
  const double nuc = nuclear_fidelity(u, n_s, n_b).value;
  constexpr double kSlack = 1e-9;
  const bool ordered = nuc >= avg_low - kSlack && avg_low >= wc_low - kSlack &&
                       wc_exact >= wc_low - kSlack;
  const json summary = {{"F_wc_exact", wc_exact}, {"F_wc_low", wc_low}, {"F_avg_low", avg_low},
                        {"F_nuc", nuc},           {"n_S", n_s},         {"n_B", n_b},
                        {"ordering_holds", ordered}};
  run.json_file("worst_case.json", summary);
  return run.finish(summary, ordered ? kExitOk : kExitViolation);
}

CommandResult run_command(const std::string& command, const json& args, const RunContext& ctx) {
  if (command == "bound-curve") {
    BoundCurveArgs a;
    get(args, "lo", a.lo);
    get(args, "hi", a.hi);
    get(args, "n_points", a.n_points);
    get(args, "gate_times_ns", a.gate_times_ns);
    get(args, "n_frequency_points", a.n_frequency_points);
    return run_bound_curve(a, ctx);
  }
  if (command == "gate-table") {
    GateTableArgs a;
    get(args, "epsilons", a.epsilons);
    get(args, "gate_times_ns", a.gate_times_ns);
    return run_gate_table(a, ctx);
  }
  if (command == "optimize") {
    OptimizeArgs a;
    get(args, "preset", a.preset);
    get(args, "q_B", a.q_B);
    get(args, "model_path", a.model_path);
    get(args, "n_pulses", a.n_pulses);
    get(args, "gate_time", a.gate_time);
    get(args, "two_stage", a.two_stage);
    if (args.contains("optimizer")) a.optimizer = OptimizerConfig::from_json(args.at("optimizer"));
    return run_optimize(a, ctx);
  }
  if (command == "evaluate") {
    EvaluateArgs a;
    get(args, "pulses_path", a.pulses_path);
    get(args, "model_path", a.model_path);
    get(args, "q_B", a.q_B);
    get(args, "modes", a.modes);
    get(args, "target_tb", a.target_tb);
    get(args, "th_b_lo", a.th_b_lo);
    get(args, "th_b_hi", a.th_b_hi);
    get(args, "n_samples", a.n_samples);
    get(args, "n_norm_points", a.n_norm_points);
    get(args, "exact", a.exact);
    get(args, "n_avg", a.n_avg);
    get(args, "max_robustness", a.max_robustness);
    return run_evaluate(a, ctx);
  }
  if (command == "nuc-experiment") {
    NucArgs a;
    get(args, "delta", a.delta);
    get(args, "n_mc", a.n_mc);
    get(args, "bath_dims", a.bath_dims);
    get(args, "system_dim", a.system_dim);
    return run_nuc_experiment(a, ctx);
  }
  if (command == "worst-case") {
    WorstCaseArgs a;
    get(args, "unitary_path", a.unitary_path);
    get(args, "n_S", a.n_S);
    return run_worst_case(a, ctx);
  }
  throw Error(ErrorKind::ValidationError, "unknown command '" + command + "'");
}

CommandResult replay_manifest(const std::string& manifest_path, RunContext ctx) {
  const RunManifest m = RunManifest::from_json(read_json_file(manifest_path));
  ctx.seed = m.seed;
  if (!m.config.contains("args")) throw Error(ErrorKind::ParseError, "manifest: config.args missing");
  return run_command(m.command, m.config.at("args"), ctx);
}

std::string format_summary(const json& summary, const std::string& format) {
  if (format == "json") return summary.dump(2) + "\n";
  std::ostringstream os;
  os << "key,value\r\n";
  for (const auto& [key, value] : summary.items()) {
    if (value.is_structured()) continue;
    if (value.is_number_float()) {
      os << key << ',' << format_double(value.get<double>()) << "\r\n";
    } else if (value.is_string()) {
      os << key << ',' << value.get<std::string>() << "\r\n";
    } else {
      os << key << ',' << value.dump() << "\r\n";
    }
  }
  return os.str();
}

}  // namespace robustlimit
