// shockstab: run benchmark cases, sweep schemes, analyse perturbation maps.
//
//   shockstab run configs/blunt_body_small.ini
//   shockstab sweep configs/planar_shock_small.ini --schemes hlle,hllem,hllem_fp1d
//   shockstab analyze roe_hllem_hllc --nu 0.45 --steps 40
//
// Exit status: 0 ok, 1 usage, 2 config error, 3 non-physical state, 4 I/O.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "shockstab/driver.hpp"

using namespace shockstab;

namespace {

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

int report(const RunResult& r) {
  if (r.status == kExitOk) {
    std::cout << "completed " << r.iterations << " iterations, t = " << r.time << "\n";
    for (const auto& m : r.metrics.values) std::cout << "  " << m.name << " = " << m.value << "\n";
    if (!r.history.empty()) std::cout << "  final residual = " << r.history.back().residual << "\n";
    std::cout << "artifacts in " << r.output_dir.string() << "\n";
  } else {
    std::cerr << r.message << "\n";
    if (r.status == kExitNonPhysical) std::cerr << "abort snapshot in " << r.output_dir.string() << "\n";
  }
  return r.status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"HLL-family shock-instability solver and stability lab"};
  app.require_subcommand(1);

  std::string run_config;
  std::string run_output;
  auto* run_cmd = app.add_subcommand("run", "march a case preset to its end condition");
  run_cmd->add_option("config", run_config, "run configuration file")->required();
  run_cmd->add_option("-o,--output", run_output, "override the output directory");

  std::string sweep_config;
  std::string sweep_output;
  std::vector<std::string> sweep_schemes;
  auto* sweep_cmd = app.add_subcommand("sweep", "run one case under several flux schemes");
  sweep_cmd->add_option("config", sweep_config, "run configuration file")->required();
  sweep_cmd->add_option("--schemes", sweep_schemes, "comma-separated flux schemes")
      ->delimiter(',')
      ->required();
  sweep_cmd->add_option("-o,--output", sweep_output, "override the output directory");

  AnalyzeOptions ao;
  std::string family;
  double rhou_hat = 0.0;
  auto* an_cmd = app.add_subcommand("analyze", "stability report for a scheme family");
  an_cmd->add_option("family", family,
                     "hlle | roe_hllem_hllc | hll_cps | hllcm_hllec | hlls_hlles | hllem_fp1d")
      ->required();
  an_cmd->add_option("--rho0", ao.rho0, "base density")->capture_default_str();
  an_cmd->add_option("--u0", ao.u0, "base normal velocity")->capture_default_str();
  an_cmd->add_option("--p0", ao.p0, "base pressure")->capture_default_str();
  an_cmd->add_option("--nu", ao.nu, "linearised CFL number")->capture_default_str();
  an_cmd->add_option("--gamma", ao.gamma, "ratio of specific heats")->capture_default_str();
  an_cmd->add_option("--rho-hat", ao.rho_hat, "initial density perturbation")->capture_default_str();
  auto* rhou_opt = an_cmd->add_option("--rhou-hat", rhou_hat, "initial momentum perturbation (default rho-hat*u0)");
  an_cmd->add_option("--p-hat", ao.p_hat, "initial pressure perturbation")->capture_default_str();
  an_cmd->add_option("--steps", ao.steps, "phase-portrait steps")->capture_default_str();
  an_cmd->add_option("--map-extent", ao.map_extent, "sign-map half width")->capture_default_str();
  an_cmd->add_option("--map-points", ao.map_points, "sign-map points per axis")->capture_default_str();
  an_cmd->add_option("-o,--output", ao.directory, "output directory")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*run_cmd) {
      RunConfig cfg = load_config(run_config);
      if (!run_output.empty()) cfg.directory = run_output;
      return report(run(cfg, &std::cout));
    }
    if (*sweep_cmd) {
      RunConfig cfg = load_config(sweep_config);
      if (!sweep_output.empty()) cfg.directory = sweep_output;
      std::vector<FluxKind> kinds;
      for (const auto& s : sweep_schemes) {
        try {
          kinds.push_back(parse_flux_kind(s));
        } catch (const Error& e) {
          throw ConfigError(e.what(), 0, "schemes");
        }
      }
      const SweepResult r = sweep(cfg, kinds, &std::cout);
      std::cout << "scheme,metric,value\n";
      for (std::size_t k = 0; k < r.runs.size(); ++k) {
        for (const auto& m : r.runs[k].metrics.values)
          std::cout << to_string(kinds[k]) << "," << m.name << "," << m.value << "\n";
        if (r.runs[k].status != kExitOk) std::cerr << to_string(kinds[k]) << ": " << r.runs[k].message << "\n";
      }
      return r.status;
    }
    if (*an_cmd) {
      try {
        ao.family = parse_scheme_family(family);
      } catch (const Error& e) {
        throw ConfigError(e.what(), 0, "family");
      }
      if (*rhou_opt) ao.rhou_hat = rhou_hat;
      const AnalyzeResult r = analyze(ao);
      std::cout << "family " << family << "\n";
      if (r.verdict) {
        std::cout << "verdict " << to_string(*r.verdict) << "\n";
        for (const auto& e : r.eigenvalues)
          std::cout << "  lambda = " << e.real() << (e.imag() < 0 ? " - " : " + ") << std::abs(e.imag())
                    << "i  |lambda| = " << std::abs(e) << "\n";
      } else {
        std::cout << "verdict n/a (nonlinear map)\n";
      }
      if (r.trace) {
        const double dv = r.trace->entries.front().dv;
        std::cout << "first-step dV = " << dv << (dv < 0 ? " (< 0)" : dv > 0 ? " (> 0)" : " (= 0)") << "\n";
        long pos = 0;
        for (const auto& s : *r.sign_map) pos += s.sign > 0;
        std::cout << "sign map: " << pos << " of " << r.sign_map->size() << " samples with dV > 0\n";
      }
      std::cout << "artifacts in " << r.output_dir.string() << "\n";
      return kExitOk;
    }
  } catch (const ConfigError& e) {
    std::cerr << e.what() << "\n";
    return kExitConfig;
  } catch (const IoError& e) {
    std::cerr << e.what() << "\n";
    return kExitIo;
  } catch (const fs::filesystem_error& e) {
    std::cerr << e.what() << "\n";
    return kExitIo;
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return kExitConfig;
  }
  return kExitUsage;
}
