#include "qflow/driver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "qflow/bulk.hpp"
#include "qflow/errors.hpp"
#include "qflow/init.hpp"
#include "qflow/radial.hpp"

namespace qflow {

namespace fs = std::filesystem;

namespace {

/// Per-tick energy rises above this relative tolerance count as violations.
constexpr double kEnergyRiseTol = 1e-10;
/// Allowed slack over the theoretical sup-norm bound.
constexpr double kBoundSlack = 1.01;
/// Norm-bound monitoring starts after this fraction of the horizon.
constexpr double kTransientFraction = 0.1;

struct StepPlan {
  double dt = 0;
  long nsteps = 0;
};

/// With an explicit dt the horizon is covered by whole steps (the last one
/// may overshoot slightly); otherwise the stable step is shrunk just enough
/// to land on t_end exactly.
StepPlan plan_steps(double t_end, double dt_config, double dt_stable) {
  if (dt_config > 0.0) {
    const long n =
        std::max(1L, static_cast<long>(std::ceil(t_end / dt_config - 1e-12)));
    return {dt_config, n};
  }
  const long n =
      std::max(1L, static_cast<long>(std::ceil(t_end / dt_stable - 1e-12)));
  return {t_end / static_cast<double>(n), n};
}

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

InitSpec to_spec(const RunConfig& cfg) {
  InitSpec spec;
  spec.family = cfg.family;
  spec.r0 = cfg.r0;
  spec.u0 = cfg.u0;
  spec.v0 = cfg.v0;
  spec.eps = cfg.epsilon;
  return spec;
}

/// Families and boundary data whose evolution stays inside the uniaxial
/// norm bound; the biaxial ones start (or are held) outside it.
bool bound_admissible(const RunConfig& cfg) {
  if (cfg.kind == RunKind::S2d) {
    return false;
  }
  if (cfg.boundary == BoundaryScenario::DiscBiaxial) {
    return false;
  }
  return cfg.family != InitFamily::BiaxialSphere &&
         cfg.family != InitFamily::S2dTanh;
}

double max_qnorm(const FieldState& field, const std::vector<NodeClass>& cls) {
  const std::size_t n = cls.size();
  double best = 0.0;
#pragma omp parallel for reduction(max : best) schedule(static)
  for (std::size_t i = 0; i < n; ++i) {
    if (cls[i] != NodeClass::Exterior) {
      best = std::max(best, norm_sq(field.at(i)));
    }
  }
  return std::sqrt(best);
}

/// Accumulates series rows and run-level invariant state.
struct Monitor {
  RunReport& rep;
  SeriesWriter& writer;
  double t_end;
  bool check_bound;
  double bound_limit;
  bool have_prev = false;
  double prev_energy = 0;

  void tick(const SeriesRow& row) {
    writer.row(row);
    rep.series.push_back(row);
    rep.track.time.push_back(row.t);
    rep.track.radius.push_back(row.r_star);
    rep.max_planarity = std::max(rep.max_planarity, row.planarity_residual);
    if (have_prev) {
      const double scale = std::max(std::abs(prev_energy), 1e-30);
      const double rise = (row.energy - prev_energy) / scale;
      rep.worst_energy_rise_rel = std::max(rep.worst_energy_rise_rel, rise);
      if (rise > kEnergyRiseTol) {
        rep.energy_monotone = false;
      }
    }
    prev_energy = row.energy;
    have_prev = true;
    if (row.t >= kTransientFraction * t_end) {
      rep.max_abs_q_late = std::max(rep.max_abs_q_late, row.max_abs_q);
      if (check_bound && row.max_abs_q > bound_limit) {
        rep.bound_ok = false;
      }
    }
  }
};

void write_summary(const fs::path& dir, const RunReport& rep) {
  std::ofstream out(dir / "summary.txt");
  if (!out) {
    throw ConfigError("cannot open " + (dir / "summary.txt").string() +
                      " for writing");
  }
  out << "# configuration\n" << render_config(rep.cfg);
  out << "# results\n";
  auto kv = [&out](const char* key, const std::string& value) {
    out << key << " = " << value << "\n";
  };
  kv("steps", std::to_string(rep.steps));
  kv("dt_used", format_double(rep.dt));
  kv("final_time", format_double(rep.final_time));
  kv("physical_seconds", format_double(rep.physical_seconds));
  kv("runtime_seconds", format_double(rep.runtime_seconds));
  kv("initial_energy", format_double(rep.initial_energy));
  kv("final_energy", format_double(rep.final_energy));
  kv("worst_energy_rise_rel", format_double(rep.worst_energy_rise_rel));
  kv("energy_monotone", rep.energy_monotone ? "1" : "0");
  kv("t_star", format_double(rep.t_star));
  kv("final_r_star", format_double(rep.final_r_star));
  kv("max_planarity", format_double(rep.max_planarity));
  kv("max_abs_q_late", format_double(rep.max_abs_q_late));
  kv("bound_checked", rep.bound_checked ? "1" : "0");
  kv("bound_ok", rep.bound_ok ? "1" : "0");
  if (rep.cfg.kind == RunKind::UvStatic) {
    kv("static_residual", format_double(rep.static_residual));
  }
  if (rep.fit_ok) {
    kv("fit_slope", format_double(rep.fit.slope));
    kv("fit_intercept", format_double(rep.fit.intercept));
    kv("fit_r_squared", format_double(rep.fit.r_squared));
    kv("fit_samples", std::to_string(rep.fit.samples_used));
    kv("fit_reference", format_double(rep.fit.reference));
  }
  kv("exit_code", std::to_string(rep.exit_code));
  if (!rep.failure_message.empty()) {
    kv("failure", rep.failure_message);
  }
}

/// Shared post-loop bookkeeping: escape time, collapse fit, exit code,
/// summary file.
void finalize_report(RunReport& rep, const Parameters& p, const fs::path& dir,
                     long steps_done, int fit_dim) {
  rep.steps = steps_done;
  if (!rep.series.empty()) {
    rep.final_time = rep.series.back().t;
    rep.final_energy = rep.series.back().energy;
    rep.final_r_star = rep.series.back().r_star;
    std::vector<double> times, origin;
    times.reserve(rep.series.size());
    origin.reserve(rep.series.size());
    for (const SeriesRow& row : rep.series) {
      times.push_back(row.t);
      origin.push_back(row.qnorm_origin_sq);
    }
    rep.t_star = detect_t_star(times, origin, p);
  }
  try {
    rep.fit = mean_curvature_fit(rep.track, fit_dim);
    rep.fit_ok = true;
  } catch (const ConfigError&) {
    rep.fit_ok = false;
  }
  rep.physical_seconds = p.physical_seconds(rep.final_time);
  if (rep.exit_code == 0 &&
      (!rep.energy_monotone || (rep.bound_checked && !rep.bound_ok))) {
    rep.exit_code = 4;
  }
  write_summary(dir, rep);
}

RunReport run_grid(const RunConfig& cfg, const Parameters& p) {
  RunReport rep;
  rep.cfg = cfg;
  const fs::path dir(cfg.out);
  const GridGeometry geom = make_grid(cfg.dim, cfg.n);
  const std::vector<NodeClass> cls = classify(geom);
  FieldState field = generate_grid(to_spec(cfg), geom, cls, cfg.boundary, p);
  write_snapshot((dir / "initial.qsnap").string(), field);

  const StepPlan plan =
      plan_steps(cfg.t_end, cfg.dt, stable_dt_grid(geom, p, cfg.stencil));
  rep.dt = plan.dt;
  rep.bound_checked = bound_admissible(cfg);
  rep.track.r0 = cfg.r0;
  rep.track.spacing = geom.h();

  SeriesWriter writer((dir / "series.csv").string());
  Monitor mon{rep, writer, cfg.t_end, rep.bound_checked,
              p.bound_q() * kBoundSlack};

  const std::size_t origin = geom.origin_index();
  auto row_now = [&]() {
    SeriesRow row;
    row.t = field.time;
    row.energy = grid_energy(field, cls, p);
    row.r_star = interface_radius(field, p);
    row.qnorm_origin_sq = norm_sq(field.at(origin));
    row.planarity_residual =
        cfg.dim == 2 ? planarity_residual(field, cls) : 0.0;
    row.max_abs_q = max_qnorm(field, cls);
    return row;
  };

  const auto clock0 = std::chrono::steady_clock::now();
  mon.tick(row_now());
  rep.initial_energy = rep.series.front().energy;

  long done = 0;
  long next_snap = cfg.snapshot_every > 0 ? cfg.snapshot_every : -1;
  try {
    while (done < plan.nsteps) {
      const long chunk = std::min<long>(cfg.series_every, plan.nsteps - done);
      step_grid(field, cls, p, plan.dt, static_cast<int>(chunk), cfg.stencil);
      done += chunk;
      field.time = static_cast<double>(done) * plan.dt;
      mon.tick(row_now());
      if (next_snap > 0 && done >= next_snap) {
        char name[32];
        std::snprintf(name, sizeof name, "snap_%08ld.qsnap", done);
        write_snapshot((dir / name).string(), field);
        while (next_snap <= done) {
          next_snap += cfg.snapshot_every;
        }
      }
    }
  } catch (const DivergenceError& err) {
    rep.exit_code = 3;
    rep.failure_message = err.what();
  }
  rep.runtime_seconds = seconds_since(clock0);
  write_snapshot((dir / "final.qsnap").string(), field);
  finalize_report(rep, p, dir, done, cfg.dim);
  return rep;
}

template <typename Profile, typename EnergyFn, typename StepFn,
          typename OriginFn, typename MaxFn>
RunReport run_radial(const RunConfig& cfg, const Parameters& p, Profile prof,
                     double dt_stable, int intrinsic_dim, EnergyFn energy,
                     StepFn step, OriginFn origin_sq, MaxFn maxq) {
  RunReport rep;
  rep.cfg = cfg;
  const fs::path dir(cfg.out);
  write_profile((dir / "profile_initial.csv").string(), prof);

  const StepPlan plan = plan_steps(cfg.t_end, cfg.dt, dt_stable);
  rep.dt = plan.dt;
  rep.bound_checked = bound_admissible(cfg);
  rep.track.r0 = cfg.r0;
  rep.track.spacing = prof.mesh.dr();

  SeriesWriter writer((dir / "series.csv").string());
  Monitor mon{rep, writer, cfg.t_end, rep.bound_checked,
              p.bound_q() * kBoundSlack};

  auto row_now = [&]() {
    SeriesRow row;
    row.t = prof.time;
    row.energy = energy(prof);
    row.r_star = interface_radius(prof, p);
    row.qnorm_origin_sq = origin_sq(prof);
    row.planarity_residual = 0.0;
    row.max_abs_q = maxq(prof);
    return row;
  };

  const auto clock0 = std::chrono::steady_clock::now();
  mon.tick(row_now());
  rep.initial_energy = rep.series.front().energy;

  long done = 0;
  try {
    while (done < plan.nsteps) {
      const long chunk = std::min<long>(cfg.series_every, plan.nsteps - done);
      step(prof, plan.dt, static_cast<int>(chunk));
      done += chunk;
      prof.time = static_cast<double>(done) * plan.dt;
      mon.tick(row_now());
    }
  } catch (const DivergenceError& err) {
    rep.exit_code = 3;
    rep.failure_message = err.what();
  }
  rep.runtime_seconds = seconds_since(clock0);
  write_profile((dir / "profile_final.csv").string(), prof);
  finalize_report(rep, p, dir, done, intrinsic_dim);
  return rep;
}

RunReport run_uv_static(const RunConfig& cfg, const Parameters& p) {
  RunReport rep;
  rep.cfg = cfg;
  const fs::path dir(cfg.out);
  const auto clock0 = std::chrono::steady_clock::now();
  try {
    UVStaticStats stats;
    UVProfile prof = solve_uv_static(p, cfg.m, &stats);
    rep.steps = stats.total_steps;
    rep.dt = stats.dt_finest;
    rep.static_residual = uv_static_residual(prof, p);
    rep.initial_energy = rep.final_energy = uv_energy(prof, p);
    rep.final_r_star = interface_radius(prof, p);
    write_profile((dir / "profile_final.csv").string(), prof);
  } catch (const ConvergenceError& err) {
    rep.exit_code = 3;
    rep.failure_message = err.what();
  }
  rep.runtime_seconds = seconds_since(clock0);
  write_summary(dir, rep);
  return rep;
}

/// Simple least squares of y on x with coefficient of determination.
struct LineFit {
  double slope = 0, intercept = 0, r_squared = 1;
  bool ok = false;
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  LineFit fit;
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) {
    return fit;
  }
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx <= 0) {
    return fit;
  }
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0, ss_tot = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double pred = fit.intercept + fit.slope * x[i];
    ss_res += (y[i] - pred) * (y[i] - pred);
    ss_tot += (y[i] - my) * (y[i] - my);
  }
  fit.r_squared = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
  fit.ok = true;
  return fit;
}

}  // namespace

RunReport run_simulation(const RunConfig& cfg) {
  validate_run(cfg);
#ifdef _OPENMP
  if (cfg.threads > 0) {
    omp_set_num_threads(cfg.threads);
  }
#endif
  fs::create_directories(cfg.out);
  {
    std::ofstream out(fs::path(cfg.out) / "config.resolved");
    out << render_config(cfg);
  }
  const Parameters p = cfg.parameters();
  switch (cfg.kind) {
    case RunKind::Grid:
      return run_grid(cfg, p);
    case RunKind::Hedgehog: {
      RadialMesh mesh{cfg.m};
      return run_radial(
          cfg, p, generate_hedgehog(to_spec(cfg), mesh, p),
          stable_dt_hedgehog(mesh, p), 3,
          [&p](const HedgehogProfile& q) { return hedgehog_energy(q, p); },
          [&p](HedgehogProfile& q, double dt, int k) {
            step_hedgehog(q, p, dt, k);
          },
          [](const HedgehogProfile& q) {
            return (2.0 / 3.0) * q.h[0] * q.h[0];
          },
          [](const HedgehogProfile& q) {
            double best = 0;
            for (double v : q.h) {
              best = std::max(best, std::abs(v));
            }
            return std::sqrt(2.0 / 3.0) * best;
          });
    }
    case RunKind::Uv: {
      RadialMesh mesh{cfg.m};
      return run_radial(
          cfg, p, generate_uv(to_spec(cfg), mesh, p), stable_dt_uv(mesh, p), 2,
          [&p](const UVProfile& q) { return uv_energy(q, p); },
          [&p](UVProfile& q, double dt, int k) { step_uv(q, p, dt, k); },
          [](const UVProfile& q) {
            return 0.5 * q.u[0] * q.u[0] + (2.0 / 3.0) * q.v[0] * q.v[0];
          },
          [](const UVProfile& q) {
            double best = 0;
            for (std::size_t j = 0; j < q.u.size(); ++j) {
              best = std::max(best, 0.5 * q.u[j] * q.u[j] +
                                        (2.0 / 3.0) * q.v[j] * q.v[j]);
            }
            return std::sqrt(best);
          });
    }
    case RunKind::S2d: {
      RadialMesh mesh{cfg.m};
      return run_radial(
          cfg, p, generate_s2d(to_spec(cfg), mesh, p), stable_dt_s2d(mesh, p),
          2, [&p](const ScalarDiscProfile& q) { return s2d_energy(q, p); },
          [&p](ScalarDiscProfile& q, double dt, int k) {
            step_s2d(q, p, dt, k);
          },
          [](const ScalarDiscProfile& q) { return 2.0 * q.s[0] * q.s[0]; },
          [](const ScalarDiscProfile& q) {
            double best = 0;
            for (double v : q.s) {
              best = std::max(best, std::abs(v));
            }
            return std::sqrt(2.0) * best;
          });
    }
    case RunKind::UvStatic:
      return run_uv_static(cfg, p);
  }
  throw ConfigError("unhandled run kind");
}

SecvarReport secvar_scan(double log10_lo, double log10_hi, double step, int m,
                         const std::string& out_dir) {
  if (!(step > 0) || log10_hi < log10_lo) {
    throw ConfigError("secvar scan needs log10_lo <= log10_hi and a positive step");
  }
  if (m < 8) {
    throw ConfigError("secvar scan needs m at least 8");
  }
  fs::create_directories(out_dir);
  SecvarReport rep;
  const RadialMesh mesh{m};
  std::vector<double> r(mesh.nodes());
  for (int j = 0; j <= m; ++j) {
    r[j] = mesh.r(j);
  }
  const std::vector<double> psi = escape_probe(r);

  const long npts =
      std::lround((log10_hi - log10_lo) / step) + 1;
  try {
    for (long k = 0; k < npts; ++k) {
      const double x = log10_lo + static_cast<double>(k) * step;
      const Parameters p = transition_parameters(std::pow(10.0, x));
      const UVProfile prof = solve_uv_static(p, m);
      const double value = second_variation(r, prof.u, prof.v, psi, p);
      rep.points.push_back({x, p.Ltilde, value});
    }
  } catch (const ConvergenceError& err) {
    rep.exit_code = 3;
    rep.failure_message = err.what();
  }

  for (std::size_t i = 0; i + 1 < rep.points.size(); ++i) {
    if (rep.points[i].value * rep.points[i + 1].value < 0) {
      rep.crossing_found = true;
      rep.bracket_lo = rep.points[i].log10_ltilde;
      rep.bracket_hi = rep.points[i + 1].log10_ltilde;
      break;
    }
  }

  {
    std::ofstream out(fs::path(out_dir) / "secvar.csv");
    if (!out) {
      throw ConfigError("cannot open " + out_dir + "/secvar.csv for writing");
    }
    out << "log10_ltilde,ltilde,second_variation\n";
    for (const SecvarPoint& pt : rep.points) {
      out << format_double(pt.log10_ltilde) << ',' << format_double(pt.ltilde)
          << ',' << format_double(pt.value) << '\n';
    }
  }
  {
    std::ofstream out(fs::path(out_dir) / "summary.txt");
    out << "m = " << m << "\n";
    out << "points = " << rep.points.size() << "\n";
    out << "crossing_found = " << (rep.crossing_found ? "1" : "0") << "\n";
    if (rep.crossing_found) {
      out << "bracket_lo = " << format_double(rep.bracket_lo) << "\n";
      out << "bracket_hi = " << format_double(rep.bracket_hi) << "\n";
    }
    out << "exit_code = " << rep.exit_code << "\n";
    if (!rep.failure_message.empty()) {
      out << "failure = " << rep.failure_message << "\n";
    }
  }
  return rep;
}

SweepReport sweep_tstar(const RunConfig& base,
                        const std::vector<double>& eps_list,
                        const std::string& out_dir) {
  if (base.kind != RunKind::Grid || base.family != InitFamily::UvPerturbed) {
    throw ConfigError(
        "the escape-time sweep varies the tilt amplitude; the base config "
        "must be a grid run with family uv_perturbed");
  }
  if (eps_list.empty()) {
    throw ConfigError("the escape-time sweep needs at least one epsilon");
  }
  for (double eps : eps_list) {
    if (!(eps > 0.0 && eps < 1.0)) {
      throw ConfigError("sweep epsilons must lie strictly between 0 and 1");
    }
  }
  fs::create_directories(out_dir);
  SweepReport rep;
  for (std::size_t k = 0; k < eps_list.size(); ++k) {
    RunConfig cfg = base;
    cfg.epsilon = eps_list[k];
    cfg.out = (fs::path(out_dir) / ("eps_" + std::to_string(k))).string();
    const RunReport run = run_simulation(cfg);
    rep.points.push_back({eps_list[k], run.t_star, run.exit_code});
    rep.exit_code = std::max(rep.exit_code, run.exit_code);
  }

  std::vector<double> x, y;
  for (const SweepPoint& pt : rep.points) {
    if (std::isfinite(pt.t_star)) {
      x.push_back(-std::log10(pt.epsilon));
      y.push_back(pt.t_star);
    }
  }
  const LineFit fit = fit_line(x, y);
  rep.fit_ok = fit.ok;
  rep.slope = fit.slope;
  rep.intercept = fit.intercept;
  rep.r_squared = fit.r_squared;

  {
    std::ofstream out(fs::path(out_dir) / "sweep.csv");
    if (!out) {
      throw ConfigError("cannot open " + out_dir + "/sweep.csv for writing");
    }
    out << "epsilon,neg_log10_epsilon,t_star,exit_code\n";
    for (const SweepPoint& pt : rep.points) {
      out << format_double(pt.epsilon) << ','
          << format_double(-std::log10(pt.epsilon)) << ','
          << format_double(pt.t_star) << ',' << pt.exit_code << '\n';
    }
  }
  {
    std::ofstream out(fs::path(out_dir) / "summary.txt");
    out << "points = " << rep.points.size() << "\n";
    out << "fit_ok = " << (rep.fit_ok ? "1" : "0") << "\n";
    if (rep.fit_ok) {
      out << "slope = " << format_double(rep.slope) << "\n";
      out << "intercept = " << format_double(rep.intercept) << "\n";
      out << "r_squared = " << format_double(rep.r_squared) << "\n";
    }
    out << "exit_code = " << rep.exit_code << "\n";
  }
  return rep;
}

ValidateReport cross_validate(int n, int m, double ltilde, double r0,
                              double t_end, const std::string& out_dir) {
  if (n < 16 || n % 2 != 0) {
    throw ConfigError("cross validation needs n even and at least 16");
  }
  if (m < 8) {
    throw ConfigError("cross validation needs m at least 8");
  }
  if (!(ltilde > 0)) {
    throw ConfigError("ltilde must be positive");
  }
  if (!(r0 > 0 && r0 < 1)) {
    throw ConfigError("r0 must lie strictly between 0 and 1");
  }
  if (!(t_end > 0)) {
    throw ConfigError("t_end must be positive");
  }
  fs::create_directories(out_dir);
  const Parameters p = transition_parameters(ltilde);
  InitSpec spec;
  spec.family = InitFamily::CaseI;
  spec.r0 = r0;

  ValidateReport rep;
  try {
    const RadialMesh mesh{m};
    HedgehogProfile prof = generate_hedgehog(spec, mesh, p);
    const StepPlan rplan = plan_steps(t_end, 0.0, stable_dt_hedgehog(mesh, p));
    step_hedgehog(prof, p, rplan.dt, static_cast<int>(rplan.nsteps));

    const GridGeometry geom = make_grid(3, n);
    const std::vector<NodeClass> cls = classify(geom);
    FieldState field =
        generate_grid(spec, geom, cls, BoundaryScenario::BallRadial, p);
    const StepPlan gplan = plan_steps(t_end, 0.0, stable_dt_grid(geom, p));
    step_grid(field, cls, p, gplan.dt, static_cast<int>(gplan.nsteps));

    std::ofstream csv(fs::path(out_dir) / "validate.csv");
    if (!csv) {
      throw ConfigError("cannot open " + out_dir + "/validate.csv for writing");
    }
    csv << "r,qnorm_grid,qnorm_radial,diff\n";
    double num = 0, den = 0;
    const Vec3 axis{1, 0, 0};
    for (int j = 0; j <= m; ++j) {
      const double r = mesh.r(j);
      const QTensor qg = sample_field(field, {r, 0, 0});
      const QTensor qr = uniaxial(prof.h[j], axis);
      const double d2 = norm_sq(qg - qr);
      const double w = (j == 0 || j == m) ? 0.5 : 1.0;
      num += w * d2;
      den += w * norm_sq(qr);
      rep.max_abs = std::max(rep.max_abs, std::sqrt(d2));
      csv << format_double(r) << ',' << format_double(qnorm(qg)) << ','
          << format_double(qnorm(qr)) << ',' << format_double(std::sqrt(d2))
          << '\n';
    }
    rep.rel_l2 = den > 0 ? std::sqrt(num / den) : 0.0;
    if (rep.rel_l2 > rep.tolerance) {
      rep.exit_code = 4;
    }
  } catch (const DivergenceError& err) {
    rep.exit_code = 3;
    std::ofstream out(fs::path(out_dir) / "summary.txt");
    out << "exit_code = 3\nfailure = " << err.what() << "\n";
    return rep;
  }

  {
    std::ofstream out(fs::path(out_dir) / "summary.txt");
    out << "n = " << n << "\n";
    out << "m = " << m << "\n";
    out << "ltilde = " << format_double(ltilde) << "\n";
    out << "r0 = " << format_double(r0) << "\n";
    out << "t_end = " << format_double(t_end) << "\n";
    out << "rel_l2 = " << format_double(rep.rel_l2) << "\n";
    out << "max_abs = " << format_double(rep.max_abs) << "\n";
    out << "tolerance = " << format_double(rep.tolerance) << "\n";
    out << "exit_code = " << rep.exit_code << "\n";
  }
  return rep;
}

}  // namespace qflow
