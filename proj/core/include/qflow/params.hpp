#pragma once
#include <cmath>
#include <string>

namespace qflow {

/// Material constants and derived scales. Defaults are the transition
/// temperature set: A pinned to B^2/(27C) so the isotropic and nematic wells
/// are exactly degenerate (both at bulk energy 0).
struct Parameters {
  double B = 0.64e4;
  double C = 0.35e4;
  double A = 0.64e4 * 0.64e4 / (27.0 * 0.35e4);
  double gamma = 1.0;    ///< viscosity, 1 after the time rescaling
  double R2 = 1e-10;     ///< droplet radius squared [m^2], only a clock label
  double Ltilde = 0.05;  ///< rescaled elastic constant

  double Lbar() const { return 9.0 * Ltilde / C; }
  double h_plus() const { return B / (3.0 * C); }
  double s_plus() const { return B / (3.0 * C); }
  /// sup |Q| preserved by the flow from admissible data.
  double bound_q() const { return std::sqrt(2.0 / 3.0) * h_plus(); }
  /// |Q|^2 at the uniaxial well.
  double well_norm_sq() const { return (2.0 / 3.0) * h_plus() * h_plus(); }
  /// Interface tracking level: |Q|^2 = (1/3) h_+^2, half the well value.
  double interface_threshold() const { return h_plus() * h_plus() / 3.0; }

  /// Physical seconds for a simulation time t. The working clock is
  /// tbar = 20 t L / (gamma R^2) with L = Ltilde R^2, so the conversion is
  /// t = tbar gamma / (20 Ltilde) and R^2 cancels.
  double physical_seconds(double t_sim) const {
    return t_sim * gamma / (20.0 * Ltilde);
  }
};

/// Transition-temperature constants with the given elastic constant.
Parameters transition_parameters(double Ltilde);

/// Named parameter presets: "transition-L0.05", "transition-L0.01".
/// Throws ConfigError for unknown names.
Parameters parameter_preset(const std::string& name);

}  // namespace qflow
