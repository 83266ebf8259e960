#pragma once
#include <limits>
#include <string>
#include <vector>

#include "qflow/analysis.hpp"
#include "qflow/config.hpp"
#include "qflow/io.hpp"

namespace qflow {

/// Everything a finished (or aborted) run reports. Exit codes: 0 clean,
/// 3 solver failure (divergence or a static solve that ran out of budget),
/// 4 invariant violation (energy rise above tolerance or a norm-bound
/// breach after the transient window).
struct RunReport {
  RunConfig cfg;
  double final_time = 0;
  double initial_energy = 0;
  double final_energy = 0;
  double worst_energy_rise_rel = 0;
  bool energy_monotone = true;
  double t_star = std::numeric_limits<double>::infinity();
  double final_r_star = 0;
  double max_planarity = 0;
  double max_abs_q_late = 0;  ///< sup |Q| over ticks past the transient
  bool bound_checked = false;
  bool bound_ok = true;
  double static_residual = 0;  ///< UvStatic only: final residual max-norm
  double physical_seconds = 0;
  double runtime_seconds = 0;
  long steps = 0;
  double dt = 0;
  InterfaceTrack track;
  std::vector<SeriesRow> series;
  bool fit_ok = false;
  CurvatureFit fit;
  int exit_code = 0;
  std::string failure_message;
};

/// Runs one configuration end to end and writes its outputs (series CSV,
/// snapshots or profiles, summary.txt) under cfg.out. Solver failures are
/// caught and reported through the exit code; partial outputs are kept.
/// Identical configs with identical thread counts give bitwise-identical
/// outputs.
RunReport run_simulation(const RunConfig& cfg);

/// One sampled point of the out-of-plane second-variation scan.
struct SecvarPoint {
  double log10_ltilde = 0;
  double ltilde = 0;
  double value = 0;
};

struct SecvarReport {
  std::vector<SecvarPoint> points;
  bool crossing_found = false;
  double bracket_lo = 0;  ///< first of the two scan points straddling zero
  double bracket_hi = 0;  ///< second of the pair, one step further
  int exit_code = 0;
  std::string failure_message;
};

/// Solves the static planar pair across a log-spaced sweep of the elastic
/// constant and evaluates the second variation against the fixed
/// out-of-plane probe. Writes secvar.csv and summary.txt under out_dir.
SecvarReport secvar_scan(double log10_lo, double log10_hi, double step, int m,
                         const std::string& out_dir);

struct SweepPoint {
  double epsilon = 0;
  double t_star = 0;
  int exit_code = 0;
};

struct SweepReport {
  std::vector<SweepPoint> points;
  bool fit_ok = false;
  double slope = 0;      ///< d t* / d (-log10 eps)
  double intercept = 0;
  double r_squared = 0;
  int exit_code = 0;
};

/// Runs the base configuration once per perturbation amplitude (outputs in
/// eps_<k>/ subdirectories), collects the escape times, and fits t* against
/// -log10(eps). Writes sweep.csv and summary.txt under out_dir.
SweepReport sweep_tstar(const RunConfig& base,
                        const std::vector<double>& eps_list,
                        const std::string& out_dir);

struct ValidateReport {
  double rel_l2 = 0;
  double max_abs = 0;
  double tolerance = 0.02;
  int exit_code = 0;
};

/// Evolves the same radial-front initial data through the embedded 3D grid
/// and through the one-dimensional reduction, then compares the fields
/// along a coordinate axis at t_end. Writes validate.csv and summary.txt.
ValidateReport cross_validate(int n, int m, double ltilde, double r0,
                              double t_end, const std::string& out_dir);

}  // namespace qflow
