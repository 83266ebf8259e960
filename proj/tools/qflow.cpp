// Command-line front end: evolve grid or radial configurations, solve the
// static planar pair, scan the out-of-plane second variation, sweep escape
// times over the tilt amplitude, and cross-check the 3D grid against the
// radial reduction.
//
// Exit codes: 0 success, 2 usage or config error, 3 solver failure,
// 4 invariant violation, 1 anything unexpected.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"
#include "qflow/qflow.hpp"

namespace {

using namespace qflow;

int env_threads() {
  const char* env = std::getenv("QFLOW_THREADS");
  if (env == nullptr || *env == '\0') {
    return 0;
  }
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (end == env || *end != '\0' || v < 0) {
    throw ConfigError(std::string("QFLOW_THREADS must be a nonnegative "
                                  "integer, got \"") +
                      env + "\"");
  }
  return static_cast<int>(v);
}

/// Flag beats config beats environment; 0 leaves the OpenMP default.
int resolve_threads(int flag, int from_config) {
  if (flag > 0) {
    return flag;
  }
  if (from_config > 0) {
    return from_config;
  }
  return env_threads();
}

void apply_threads(int threads) {
#ifdef _OPENMP
  if (threads > 0) {
    omp_set_num_threads(threads);
  }
#else
  (void)threads;
#endif
}

RunConfig resolve_config(const std::string& config_path,
                         const std::string& scenario,
                         const std::vector<std::string>& sets,
                         const std::string& out_override, int threads_flag) {
  if (!config_path.empty() && !scenario.empty()) {
    throw ConfigError("pass either --config or --scenario, not both");
  }
  RunConfig cfg;
  if (!config_path.empty()) {
    cfg = load_config(config_path);
  } else if (!scenario.empty()) {
    cfg = scenario_preset(scenario);
  } else {
    throw ConfigError("pass --config FILE or --scenario NAME");
  }
  apply_overrides(cfg, sets);
  if (!out_override.empty()) {
    cfg.out = out_override;
  }
  cfg.threads = resolve_threads(threads_flag, cfg.threads);
  validate_run(cfg);
  return cfg;
}

std::vector<double> parse_eps_list(const std::string& text) {
  std::vector<double> eps;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = text.find(',', pos);
    const std::string item =
        text.substr(pos, comma == std::string::npos ? comma : comma - pos);
    char* end = nullptr;
    const double v = std::strtod(item.c_str(), &end);
    if (end == item.c_str() || *end != '\0') {
      throw ConfigError("--eps: bad number \"" + item + "\"");
    }
    eps.push_back(v);
    if (comma == std::string::npos) {
      break;
    }
    pos = comma + 1;
  }
  return eps;
}

void print_run_report(const RunReport& rep) {
  std::printf("run %s: t = %.6g, energy %.6g -> %.6g, r* = %.4g\n",
              rep.cfg.scenario.empty() ? "(config)" : rep.cfg.scenario.c_str(),
              rep.final_time, rep.initial_energy, rep.final_energy,
              rep.final_r_star);
  if (std::isfinite(rep.t_star)) {
    std::printf("  escape time t* = %.6g\n", rep.t_star);
  }
  if (rep.fit_ok) {
    std::printf("  collapse fit: slope %.4g (reference %.4g), R^2 %.6f\n",
                rep.fit.slope, rep.fit.reference, rep.fit.r_squared);
  }
  std::printf("  physical seconds %.6g, runtime %.3f s, %ld steps\n",
              rep.physical_seconds, rep.runtime_seconds, rep.steps);
  if (!rep.energy_monotone) {
    std::printf("  INVARIANT VIOLATION: energy rose by %.3g relative\n",
                rep.worst_energy_rise_rel);
  }
  if (rep.bound_checked && !rep.bound_ok) {
    std::printf("  INVARIANT VIOLATION: |Q| reached %.6g past the transient\n",
                rep.max_abs_q_late);
  }
  if (!rep.failure_message.empty()) {
    std::printf("  SOLVER FAILURE: %s\n", rep.failure_message.c_str());
  }
  std::printf("  outputs in %s (exit %d)\n", rep.cfg.out.c_str(),
              rep.exit_code);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Gradient-flow simulations of the Q-tensor model at the "
      "nematic-isotropic transition"};
  app.require_subcommand(1);

  std::string config_path, scenario, out_dir;
  std::vector<std::string> sets;
  int threads = 0;

  auto add_common = [&](CLI::App* cmd, bool with_config) {
    if (with_config) {
      cmd->add_option("--config", config_path, "key = value config file");
      cmd->add_option("--scenario", scenario,
                      "named preset (list them with the scenarios subcommand)");
      cmd->add_option("--set", sets, "override key=value, repeatable");
    }
    cmd->add_option("--out", out_dir, "output directory");
    cmd->add_option("--threads", threads,
                    "OpenMP thread count (QFLOW_THREADS as fallback)");
  };

  int exit_code = 0;

  CLI::App* cmd_run = app.add_subcommand(
      "run", "Evolve an embedded-grid configuration");
  add_common(cmd_run, true);
  cmd_run->callback([&] {
    const RunConfig cfg =
        resolve_config(config_path, scenario, sets, out_dir, threads);
    if (cfg.kind != RunKind::Grid) {
      throw ConfigError(
          "run evolves the embedded grid; use radial for the reduced "
          "profiles and uv-static for the static pair");
    }
    const RunReport rep = run_simulation(cfg);
    print_run_report(rep);
    exit_code = rep.exit_code;
  });

  CLI::App* cmd_radial = app.add_subcommand(
      "radial", "Evolve a reduced radial profile");
  add_common(cmd_radial, true);
  cmd_radial->callback([&] {
    const RunConfig cfg =
        resolve_config(config_path, scenario, sets, out_dir, threads);
    if (cfg.kind != RunKind::Hedgehog && cfg.kind != RunKind::Uv &&
        cfg.kind != RunKind::S2d) {
      throw ConfigError(
          "radial evolves the reduced profiles (kind hedgehog, uv, or s2d)");
    }
    const RunReport rep = run_simulation(cfg);
    print_run_report(rep);
    exit_code = rep.exit_code;
  });

  int static_m = 512;
  double static_ltilde = 0.05;
  CLI::App* cmd_static = app.add_subcommand(
      "uv-static", "Solve the static planar pair to high accuracy");
  cmd_static->add_option("--m", static_m, "radial intervals");
  cmd_static->add_option("--ltilde", static_ltilde, "elastic constant");
  cmd_static->add_option("--set", sets, "override key=value, repeatable");
  add_common(cmd_static, false);
  cmd_static->callback([&] {
    RunConfig cfg;
    cfg.kind = RunKind::UvStatic;
    cfg.m = static_m;
    cfg.ltilde = static_ltilde;
    cfg.out = "out";
    apply_overrides(cfg, sets);
    if (!out_dir.empty()) {
      cfg.out = out_dir;
    }
    cfg.threads = resolve_threads(threads, cfg.threads);
    const RunReport rep = run_simulation(cfg);
    if (rep.exit_code == 0) {
      std::printf(
          "uv-static: m = %d, ltilde = %g, residual %.3g after %ld steps\n",
          cfg.m, cfg.ltilde, rep.static_residual, rep.steps);
    } else {
      std::printf("uv-static FAILED: %s\n", rep.failure_message.c_str());
    }
    std::printf("  outputs in %s (exit %d)\n", cfg.out.c_str(), rep.exit_code);
    exit_code = rep.exit_code;
  });

  double sv_from = -2.4, sv_to = -0.8, sv_step = 0.2;
  int sv_m = 512;
  CLI::App* cmd_secvar = app.add_subcommand(
      "secvar",
      "Scan the second variation of the planar state against the "
      "out-of-plane probe");
  cmd_secvar->add_option("--from", sv_from, "log10 ltilde, scan start");
  cmd_secvar->add_option("--to", sv_to, "log10 ltilde, scan end");
  cmd_secvar->add_option("--step", sv_step, "log10 step");
  cmd_secvar->add_option("--m", sv_m, "radial intervals");
  add_common(cmd_secvar, false);
  cmd_secvar->callback([&] {
    apply_threads(resolve_threads(threads, 0));
    const std::string dir = out_dir.empty() ? "out" : out_dir;
    const SecvarReport rep = secvar_scan(sv_from, sv_to, sv_step, sv_m, dir);
    for (const SecvarPoint& pt : rep.points) {
      std::printf("  log10 ltilde %+.3f: second variation %+.6e\n",
                  pt.log10_ltilde, pt.value);
    }
    if (rep.crossing_found) {
      std::printf("secvar: sign change inside [%g, %g]\n", rep.bracket_lo,
                  rep.bracket_hi);
    } else {
      std::printf("secvar: no sign change in [%g, %g]\n", sv_from, sv_to);
    }
    std::printf("  outputs in %s (exit %d)\n", dir.c_str(), rep.exit_code);
    exit_code = rep.exit_code;
  });

  std::string eps_text = "1e-2,1e-3,1e-4,1e-5,1e-6";
  CLI::App* cmd_sweep = app.add_subcommand(
      "sweep-tstar",
      "Run the tilted planar configuration across perturbation amplitudes "
      "and fit the escape time");
  cmd_sweep->add_option("--eps", eps_text, "comma-separated amplitudes");
  add_common(cmd_sweep, true);
  cmd_sweep->callback([&] {
    RunConfig base =
        resolve_config(config_path, scenario, sets, out_dir.empty() ? "out" : out_dir,
                       threads);
    const std::string dir = base.out;
    const SweepReport rep = sweep_tstar(base, parse_eps_list(eps_text), dir);
    for (const SweepPoint& pt : rep.points) {
      std::printf("  eps %.1e: t* = %.6g (exit %d)\n", pt.epsilon, pt.t_star,
                  pt.exit_code);
    }
    if (rep.fit_ok) {
      std::printf("sweep-tstar: t* vs -log10 eps slope %.4g, R^2 %.6f\n",
                  rep.slope, rep.r_squared);
    } else {
      std::printf("sweep-tstar: too few finite escape times to fit\n");
    }
    std::printf("  outputs in %s (exit %d)\n", dir.c_str(), rep.exit_code);
    exit_code = rep.exit_code;
  });

  int val_n = 64, val_m = 512;
  double val_ltilde = 0.05, val_r0 = 0.5, val_t_end = 0.005;
  CLI::App* cmd_validate = app.add_subcommand(
      "validate",
      "Evolve the same radial data on the 3D grid and the 1D reduction and "
      "compare");
  cmd_validate->add_option("--n", val_n, "grid nodes per axis");
  cmd_validate->add_option("--m", val_m, "radial intervals");
  cmd_validate->add_option("--ltilde", val_ltilde, "elastic constant");
  cmd_validate->add_option("--r0", val_r0, "front radius");
  cmd_validate->add_option("--t-end", val_t_end, "horizon");
  add_common(cmd_validate, false);
  cmd_validate->callback([&] {
    apply_threads(resolve_threads(threads, 0));
    const std::string dir = out_dir.empty() ? "out" : out_dir;
    const ValidateReport rep =
        cross_validate(val_n, val_m, val_ltilde, val_r0, val_t_end, dir);
    std::printf(
        "validate: relative L2 difference %.4g (tolerance %g), max %.4g -> "
        "%s\n",
        rep.rel_l2, rep.tolerance, rep.max_abs,
        rep.exit_code == 0 ? "PASS" : "FAIL");
    std::printf("  outputs in %s (exit %d)\n", dir.c_str(), rep.exit_code);
    exit_code = rep.exit_code;
  });

  CLI::App* cmd_scenarios =
      app.add_subcommand("scenarios", "List the named presets");
  cmd_scenarios->callback([&] {
    for (const std::string& name : scenario_names()) {
      std::printf("%s\n", name.c_str());
    }
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const DivergenceError& e) {
    std::fprintf(stderr, "solver failure: %s\n", e.what());
    return 3;
  } catch (const ConvergenceError& e) {
    std::fprintf(stderr, "solver failure: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "unexpected error: %s\n", e.what());
    return 1;
  }
  return exit_code;
}
