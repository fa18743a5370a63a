#pragma once

// Run orchestration behind the command-line tool: time marching with
// snapshots and residual logging, multi-scheme sweeps, and stability-lab
// reports.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "shockstab/cases.hpp"
#include "shockstab/config.hpp"
#include "shockstab/fv.hpp"
#include "shockstab/io.hpp"
#include "shockstab/stability.hpp"

namespace shockstab {

enum ExitStatus : int { kExitOk = 0, kExitUsage = 1, kExitConfig = 2, kExitNonPhysical = 3, kExitIo = 4 };

inline constexpr const char* kOutputRootEnv = "SHOCKSTAB_OUTPUT_ROOT";

/// Relative directories are placed under $SHOCKSTAB_OUTPUT_ROOT when set.
inline fs::path resolve_output_dir(const std::string& dir) {
  fs::path p(dir);
  if (p.is_absolute()) return p;
  if (const char* root = std::getenv(kOutputRootEnv); root && *root) return fs::path(root) / p;
  return p;
}

struct RunResult {
  int status = kExitOk;
  std::string message;
  fs::path output_dir;
  long iterations = 0;
  double time = 0.0;
  Field final_field;
  std::vector<ResidualEntry> history;
  InstabilityMetrics metrics;
};

namespace detail {

inline std::string iteration_tag(long it) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%08ld", it);
  return buf;
}

inline void write_snapshot(const CaseDefinition& c, const RunConfig& cfg, const Field& U,
                           const fs::path& dir, const std::string& stem, const GasModel& gas) {
  if (cfg.emit_csv) write_field_csv(c.grid, U, dir / (stem + ".csv"), gas);
  if (cfg.emit_vtk) write_field_vtk(c.grid, U, dir / (stem + ".vtk"), gas);
  write_contour_sidecar(c.contours, c.name, stem + (cfg.emit_csv ? ".csv" : ".vtk"),
                        dir / (stem + ".contour.json"));
}

}  // namespace detail

/// Marches the configured case to its end condition and writes every
/// artifact. NonPhysicalState aborts with the last good field dumped.
inline RunResult run(const RunConfig& cfg, std::ostream* log = nullptr) {
  RunResult res;
  try {
    cfg.validate();
  } catch (const ConfigError& e) {
    res.status = kExitConfig;
    res.message = e.what();
    return res;
  }
  const GasModel gas{cfg.gamma};
  CaseDefinition c;
  SolverConfig sc;
  try {
    c = build_case(cfg.preset, cfg.overrides(), gas);
    sc.scheme = cfg.scheme;
    sc.order = cfg.order;
    sc.cfl = cfg.cfl.value_or(c.cfl);
    sc.end_time = c.end_time;
    sc.max_iters = c.max_iters;
    sc.local_time_stepping = cfg.local_time_stepping;
    sc.validate();
  } catch (const Error& e) {
    // bad overrides (e.g. a grid too small for the preset)
    res.status = kExitConfig;
    res.message = e.what();
    return res;
  }
  const FiniteVolumeSolver solver(c.grid, c.boundaries, gas, sc);

  const fs::path dir = resolve_output_dir(cfg.directory);
  res.output_dir = dir;
  fs::create_directories(dir);
  write_text(dir / "config.ini", serialize_config(cfg));

  Field U = c.initial;
  double t = 0.0;
  long it = 0;
  long next_snapshot = 1;  // snapshot k is due at k * interval
  auto snapshot_due = [&](long k) { return t >= k * *cfg.snapshot_interval * (1.0 - 1e-12); };
  const long progress_every = std::max<long>(1, sc.max_iters ? *sc.max_iters / 10 : 1000);

  auto done = [&] {
    if (sc.max_iters && it >= *sc.max_iters) return true;
    if (sc.end_time && !(t < *sc.end_time)) return true;
    return false;
  };

  try {
    while (!done()) {
      std::vector<double> dt;
      Field next;
      try {
        if (sc.local_time_stepping) {
          dt = solver.local_dt(U);
        } else {
          double h = solver.compute_dt(U);
          if (sc.end_time && t + h > *sc.end_time) h = *sc.end_time - t;
          dt = {h};
        }
        next = solver.step(U, dt, t);
      } catch (const NonPhysicalState& e) {
        throw NonPhysicalState(e.detail(), e.cell(), it + 1);
      }
      ++it;
      res.history.push_back({it, residual_l2(U, next, dt)});
      U = std::move(next);
      if (!sc.local_time_stepping) t += dt[0];

      if (!std::isfinite(res.history.back().residual)) {
        throw NonPhysicalState("non-finite residual", std::nullopt, it);
      }
      if (cfg.snapshot_every && it % *cfg.snapshot_every == 0) {
        detail::write_snapshot(c, cfg, U, dir, "snapshot_" + detail::iteration_tag(it), gas);
      }
      if (cfg.snapshot_interval && !sc.local_time_stepping && snapshot_due(next_snapshot)) {
        detail::write_snapshot(c, cfg, U, dir, "snapshot_" + detail::iteration_tag(it), gas);
        while (snapshot_due(next_snapshot)) ++next_snapshot;
      }
      if (log && it % progress_every == 0) {
        *log << c.name << " [" << to_string(sc.scheme.kind) << "] iter " << it << " t " << t
             << " residual " << res.history.back().residual << "\n";
      }
    }
  } catch (const NonPhysicalState& e) {
    res.status = kExitNonPhysical;
    res.message = e.what();
    detail::write_snapshot(c, cfg, U, dir, "abort_snapshot", gas);
    write_residual_csv(res.history, dir / "residuals.csv");
    write_text(dir / "abort.txt", std::string(e.what()) + "\n");
    write_manifest(dir);
    res.iterations = it;
    res.time = t;
    res.final_field = std::move(U);
    return res;
  }

  res.iterations = it;
  res.time = t;
  detail::write_snapshot(c, cfg, U, dir, "final", gas);
  write_residual_csv(res.history, dir / "residuals.csv");
  res.metrics = instability_metrics(c.kind, c.name, c.grid, U, gas);
  std::vector<MetricRow> rows;
  for (const auto& m : res.metrics.values)
    rows.push_back({c.name, std::string(to_string(sc.scheme.kind)), it, t, m.name, m.value});
  write_metrics_csv(rows, dir / "metrics.csv");
  write_manifest(dir);
  res.final_field = std::move(U);
  return res;
}

struct SweepResult {
  int status = kExitOk;
  std::vector<RunResult> runs;
};

/// Runs the same case once per scheme into <directory>/<scheme>/ and
/// collects the metrics side by side in <directory>/sweep_metrics.csv.
inline SweepResult sweep(const RunConfig& base, const std::vector<FluxKind>& schemes,
                         std::ostream* log = nullptr) {
  SweepResult out;
  std::vector<MetricRow> rows;
  for (auto k : schemes) {
    RunConfig cfg = base;
    cfg.scheme.kind = k;
    cfg.directory = (fs::path(base.directory) / std::string(to_string(k))).string();
    RunResult r = run(cfg, log);
    if (r.status != kExitOk && out.status == kExitOk) out.status = r.status;
    for (const auto& m : r.metrics.values)
      rows.push_back({r.metrics.case_name, std::string(to_string(k)), r.iterations, r.time, m.name, m.value});
    out.runs.push_back(std::move(r));
  }
  const fs::path dir = resolve_output_dir(base.directory);
  write_metrics_csv(rows, dir / "sweep_metrics.csv");
  return out;
}

struct AnalyzeOptions {
  SchemeFamily family = SchemeFamily::HLLE;
  double rho0 = 1.0;
  double u0 = 1.0;
  double p0 = 1.0;
  double nu = 0.45;
  double gamma = 1.4;
  double rho_hat = -1e-3;
  /// Unset: rho_hat * u0 (no velocity perturbation).
  std::optional<double> rhou_hat;
  double p_hat = 1e-3;
  long steps = 50;
  double map_extent = 1e-3;
  int map_points = 11;
  std::string directory = "analysis";
};

struct AnalyzeResult {
  std::optional<LyapunovVerdict> verdict;
  std::vector<std::complex<double>> eigenvalues;
  std::optional<LyapunovTrace> trace;
  std::optional<std::vector<SignSample>> sign_map;
  fs::path output_dir;
};

/// Eigenvalues + verdict of the linear map (where one exists), the phase
/// portrait from the given perturbation and a dV sign map. Written to
/// eigenvalues.csv, trace.csv, sign_map.csv and report.json.
inline AnalyzeResult analyze(const AnalyzeOptions& o) {
  if (!(o.nu > 0.0 && o.nu < 1.0)) throw ConfigError("nu must lie in (0, 1)", 0, "nu");
  if (o.steps < 1) throw ConfigError("steps must be positive", 0, "steps");
  if (o.map_points < 2) throw ConfigError("map needs at least 2 points per axis", 0, "map-points");
  if (!(o.map_extent > 0.0)) throw ConfigError("map extent must be positive", 0, "map-extent");
  if (!(o.rho0 > 0.0 && o.p0 > 0.0)) throw ConfigError("base density and pressure must be positive");
  if (!(o.gamma > 1.0)) throw ConfigError("gamma must exceed 1", 0, "gamma");
  const GasModel gas{o.gamma};
  const BaseState base = BaseState::make(o.rho0, o.u0, o.p0, o.nu, gas);
  const PerturbationState x0{o.rho_hat, o.rhou_hat.value_or(o.rho_hat * o.u0), o.p_hat};

  AnalyzeResult res;
  res.output_dir = resolve_output_dir(o.directory);
  fs::create_directories(res.output_dir);

  nlohmann::ordered_json report;
  report["family"] = std::string(to_string(o.family));
  report["base"] = {{"rho0", base.rho0}, {"u0", base.u0}, {"p0", base.p0}, {"a0", base.a0}, {"nu", base.nu}};
  report["initial_perturbation"] = {{"rho_hat", x0.rho_hat}, {"rhou_hat", x0.rhou_hat}, {"p_hat", x0.p_hat}};

  if (o.family != SchemeFamily::HLLEM_FP1D) {
    const Matrix3 m = primitive_amplification_matrix(o.family, base);
    res.eigenvalues = eigenvalues(m);
    res.verdict = reduced_lyapunov_verdict(m);
    write_eigenvalue_csv(res.eigenvalues, res.output_dir / "eigenvalues.csv");
    report["verdict"] = std::string(to_string(*res.verdict));
    auto arr = nlohmann::ordered_json::array();
    for (const auto& e : res.eigenvalues) arr.push_back({{"real", e.real()}, {"imag", e.imag()}});
    report["eigenvalues"] = arr;
  } else {
    // nonlinear map: no linear amplification matrix
    report["verdict"] = nullptr;
  }

  if (o.family != SchemeFamily::HLL_CPS) {
    res.trace = phase_portrait(o.family, x0, base, o.steps);
    write_trace_csv(*res.trace, res.output_dir / "trace.csv");
    res.sign_map = stability_region_map(o.family, base, perturbation_grid(o.map_extent, o.map_points, base));
    write_sign_map_csv(*res.sign_map, res.output_dir / "sign_map.csv");
    long pos = 0, neg = 0, zero = 0;
    for (const auto& s : *res.sign_map) (s.sign > 0 ? pos : s.sign < 0 ? neg : zero)++;
    report["first_step_dV"] = res.trace->entries.front().dv;
    report["sign_map"] = {{"positive", pos}, {"negative", neg}, {"zero", zero}};
  } else {
    report["first_step_dV"] = nullptr;
  }
  write_json(res.output_dir / "report.json", report);
  write_manifest(res.output_dir);
  return res;
}

}  // namespace shockstab
