#pragma once
#include <vector>

#include "qflow/params.hpp"

namespace qflow {

/// Uniform mesh on [0,1] with M intervals, nodes r_j = j/M.
struct RadialMesh {
  int M = 0;
  double dr() const { return 1.0 / M; }
  double r(int j) const { return static_cast<double>(j) / M; }
  int nodes() const { return M + 1; }
};

/// Radial hedgehog amplitude h(r); h(0) = 0, h(1) = h_+ held fixed.
struct HedgehogProfile {
  RadialMesh mesh;
  std::vector<double> h;
  double time = 0;
};

/// Planar disc amplitudes (u, v); u(0) = 0, u(1) = B/3C, v(1) = -B/6C held
/// fixed, v'(0) = 0 imposed by a second-order one-sided closure.
struct UVProfile {
  RadialMesh mesh;
  std::vector<double> u, v;
  double time = 0;
};

/// Two-component 2D amplitude s(r); s(0) = 0, s(1) = B/3C held fixed.
struct ScalarDiscProfile {
  RadialMesh mesh;
  std::vector<double> s;
  double time = 0;
};

/// Default stable RK4 steps. The diffusive part uses 2.5 dr^2/(4+kappa)
/// where kappa is the coefficient of the 1/r^2 geometric term (6 for the
/// hedgehog, 4 for u and s): the node at r = dr contributes a Jacobian entry
/// of about -(4+kappa)/dr^2, beyond the plain-Laplacian bound. The reaction
/// part uses 2.5 / (sampled bulk rate).
double stable_dt_hedgehog(const RadialMesh& mesh, const Parameters& p);
double stable_dt_uv(const RadialMesh& mesh, const Parameters& p);
double stable_dt_s2d(const RadialMesh& mesh, const Parameters& p);

/// Classical RK4 steps of the hedgehog equation
///   h_t = h_rr + (2/r) h_r - 6h/r^2 + (3/Lbar) h (h_+ - h)(2h - h_+),
/// with the radial operator discretized in conservative flux form
/// (1/r^2)(r^2 h')'. Endpoints are Dirichlet (zero right-hand side). Throws
/// DivergenceError on non-finite values, naming the first offending node.
void step_hedgehog(HedgehogProfile& prof, const Parameters& p, double dt, int nsteps = 1);

/// Classical RK4 steps of the coupled planar pair
///   u_t = u'' + u'/r - 4u/r^2 - (u/Lt)(A + (2/3)B v + C(u^2/2 + 2v^2/3))
///   v_t = v'' + v'/r - (v/Lt)(A - (B/3) v + C(u^2/2 + 2v^2/3)) - (B/4Lt) u^2.
void step_uv(UVProfile& prof, const Parameters& p, double dt, int nsteps = 1);

/// Classical RK4 steps of the 2D scalar equation
///   s_t = s'' + s'/r - 4s/r^2 - (s/Lt)(A + 2C s^2).
void step_s2d(ScalarDiscProfile& prof, const Parameters& p, double dt, int nsteps = 1);

/// Hedgehog energy, the integral of
///   r^2 [ sqrt(Lbar)(h'^2/3 + 2h^2/r^2) + h^2(h - h_+)^2 / sqrt(Lbar) ].
/// The r^2 weight absorbs the 1/r^2 geometric term, so r = 0 is regular.
/// Gradient terms are summed on edge midpoints and pointwise terms on nodes;
/// that quadrature is the exact Lyapunov function of the discrete flow, so
/// the value is nonincreasing along step_hedgehog up to time-integration
/// error.
double hedgehog_energy(const HedgehogProfile& prof, const Parameters& p);

/// Planar pair energy, the integral of
///   r [ u'^2/4 + v'^2/3 + u^2/r^2 + f_uv(u,v)/Lt ]
/// with f_uv = (A/2) t2 - (B/3) t3 + (C/4) t2^2, t2 = u^2/2 + 2v^2/3,
/// t3 = v(2v^2/9 - u^2/2). Same edge/node quadrature as hedgehog_energy;
/// decreases along step_uv.
double uv_energy(const UVProfile& prof, const Parameters& p);

enum class ScalarEnergyForm {
  /// Coefficients matched to the evolution equation (geometric term 4s^2/r,
  /// quartic C s^4): the discrete flow decreases this form.
  Descent,
  /// Alternative coefficient set (2s^2/r, (C/4) s^4), kept for reference;
  /// it is not a descent functional of the flow.
  Alternate,
};

/// 2D scalar energy, same edge/node quadrature; see ScalarEnergyForm.
double s2d_energy(const ScalarDiscProfile& prof, const Parameters& p,
                  ScalarEnergyForm form = ScalarEnergyForm::Descent);

/// Max-norm of the static residual of the (u,v) system over the evolved
/// nodes (with the Neumann closure applied at r=0 for the v stencil).
double uv_static_residual(const UVProfile& prof, const Parameters& p);

struct UVStaticStats {
  long total_steps = 0;
  double final_residual = 0;
  double dt_finest = 0;
};

/// Static (u,v) pair by gradient-flow relaxation on a coarse-to-fine mesh
/// cascade, polished on the target mesh until the static residual max-norm
/// is below 1e-8. Throws ConvergenceError if the step budget is exhausted.
UVProfile solve_uv_static(const Parameters& p, int M, UVStaticStats* stats = nullptr);

}  // namespace qflow
