#pragma once
#include <string>
#include <vector>

#include "qflow/grid.hpp"
#include "qflow/init.hpp"
#include "qflow/params.hpp"

namespace qflow {

/// What a run evolves: the embedded grid or one of the radial reductions.
/// UvStatic solves the static planar pair instead of evolving anything.
enum class RunKind { Grid, Hedgehog, Uv, S2d, UvStatic };

/// A fully resolved run description. parse_config and scenario_preset
/// produce these; validate_run rejects inconsistent combinations.
struct RunConfig {
  std::string scenario;  ///< preset name, empty for hand-written configs
  RunKind kind = RunKind::Grid;
  int dim = 3;
  int n = 0;  ///< grid nodes per axis (Grid kind)
  int m = 0;  ///< radial intervals (radial kinds)
  double ltilde = 0.05;
  InitFamily family = InitFamily::CaseI;
  BoundaryScenario boundary = BoundaryScenario::BallRadial;
  double r0 = 0.5;
  double u0 = 0.5;
  double v0 = 0.5;
  double epsilon = 0.0;
  double t_end = 0.0;
  double dt = 0.0;  ///< 0 = use the stable default
  Stencil stencil = Stencil::SecondOrder;
  int series_every = 200;    ///< steps between diagnostic rows
  int snapshot_every = 0;    ///< steps between snapshots, 0 = endpoints only
  std::string out = "out";
  int threads = 0;  ///< 0 = leave the OpenMP default alone

  Parameters parameters() const { return transition_parameters(ltilde); }
};

/// Parses key = value text. Lines are trimmed, # starts a comment, keys may
/// appear once. A scenario key is applied first and the remaining keys
/// override the preset in file order. Errors cite the offending line.
RunConfig parse_config(const std::string& text);

/// Convenience: read_file + parse_config, errors prefixed with the path.
RunConfig load_config(const std::string& path);

/// Named preset catalog; each name reproduces one published configuration.
/// Throws ConfigError for unknown names (the message lists valid ones).
RunConfig scenario_preset(const std::string& name);
std::vector<std::string> scenario_names();

/// Applies command-line key=value overrides on top of a config, last one
/// wins. The scenario key is rejected here: pick the preset first, then
/// override fields. Errors cite the override text.
void apply_overrides(RunConfig& cfg, const std::vector<std::string>& sets);

/// Cross-field checks: size keys present for the kind, positive horizon for
/// evolutions, family compatible with the kind. Throws ConfigError.
void validate_run(const RunConfig& cfg);

/// Round-trips a config back to key = value text (stable key order).
std::string render_config(const RunConfig& cfg);

}  // namespace qflow
