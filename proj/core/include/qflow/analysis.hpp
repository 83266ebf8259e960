#pragma once
#include <array>
#include <vector>

#include "qflow/grid.hpp"
#include "qflow/params.hpp"
#include "qflow/radial.hpp"
#include "qflow/tensor.hpp"

namespace qflow {

/// Time series of the interface radius r*(t), with the bookkeeping the
/// curvature fit needs: the initial front radius and the mesh spacing that
/// sets the collapse cutoff (samples with r* < 3 spacing are past collapse).
struct InterfaceTrack {
  std::vector<double> time;
  std::vector<double> radius;
  double r0 = 0;
  double spacing = 0;
};

/// Least-squares fit of r*^2 = r0^2 - c t over the pre-collapse window.
struct CurvatureFit {
  double slope = 0;      ///< c
  double intercept = 0;  ///< fitted r*^2 at t = 0
  double r_squared = 0;
  int samples_used = 0;
  double reference = 0;  ///< slope of exact curvature-driven collapse, 2(dim-1)
};

/// Weighted interface-energy diagnostics of a radial amplitude profile,
/// evaluated in the frame moving with the front.
struct WeightedEnergyDiag {
  double e_phi = 0;        ///< weighted energy of the front profile
  double g_mass = 0;       ///< integral of |g(w) - g(v)| against the sharp step v
  double g_reference = 0;  ///< g(h_+) = h_+^3 / (3 sqrt 3)
};

/// Max and L2 deviation from a reference field over a radial window.
struct DeviationReport {
  double max_norm = 0;
  double l2_norm = 0;
};

/// One sampled point of an eigenvalue profile along a ray.
struct EigenRow {
  double r = 0;
  std::array<double, 3> value{};  ///< ascending
};

/// Multilinear interpolation of the field at a physical point, with
/// periodic wrap; the z component of the point is ignored on a disc.
QTensor sample_field(const FieldState& field, const Vec3& point);

/// Interface radius r*: the largest radius at which the angularly averaged
/// |Q|^2 crosses h_+^2/3 from below along increasing r, linearly
/// interpolated between samples. Returns 0 if the average is above the
/// threshold everywhere (no isotropic core) and 1 if below everywhere.
/// Grid fields are averaged over 256 equally spaced angles (dim 2) or a
/// 512-direction Fibonacci sphere (dim 3), sampled by linear interpolation
/// at radii spaced by the mesh width. Radial profiles use their nodes
/// directly; the profile forms are axisymmetric, so no averaging is needed.
double interface_radius(const FieldState& field, const Parameters& p);
double interface_radius(const HedgehogProfile& prof, const Parameters& p);
double interface_radius(const UVProfile& prof, const Parameters& p);
double interface_radius(const ScalarDiscProfile& prof, const Parameters& p);

/// Least-squares fit of r*^2 = r0^2 - c t. Samples from the first collapsed
/// entry (r* < 3 spacing) onward are dropped; at least 10 must remain or
/// ConfigError is thrown. The reference slope is 4 for a collapsing sphere
/// (dim 3) and 2 for a shrinking disc interface (dim 2).
CurvatureFit mean_curvature_fit(const InterfaceTrack& track, int dim);

/// Front position under exact curvature-driven collapse,
/// sqrt(max(0, r0^2 - c t)).
double predicted_front(double r0, double c, double t);

/// Max over interior nodes of max(|q13|, |q23|). Zero for exactly planar
/// states; a run started from a planar state keeps it at roundoff size.
double planarity_residual(const FieldState& field, const std::vector<NodeClass>& cls);

/// First time the origin value |Q(0,t)|^2 exceeds h_+^2/3, linearly
/// interpolated between samples; +infinity if it never does.
double detect_t_star(const std::vector<double>& time,
                     const std::vector<double>& origin_norm_sq,
                     const Parameters& p);

/// Pointwise deviation from a reference field, reported as max and L2 norms
/// over nodes with r_min < r < r_max. The plain variant measures the
/// Frobenius norm |Q - T|. The normalized variant measures
/// |Q/|Q| - T/h_+|, comparing the orientation structure against a
/// uniaxial reference of amplitude h_+, and skips points with |Q| < 1e-6.
/// The default window starts at 0.1 because the radial reference has no
/// defined direction at the origin.
DeviationReport harmonic_map_deviation(const FieldState& field, const FieldState& target,
                                       const Parameters& p, bool normalized = false,
                                       double r_min = 0.1, double r_max = 1.0);

/// Eigenvalues of the field along a ray from the origin, sampled at
/// mesh-width steps out to r = 1 by linear interpolation and ordered
/// ascending. Throws ConfigError on a zero direction.
std::vector<EigenRow> eigenvalue_profile(const FieldState& field, const Vec3& direction);

/// Weighted energy of a hedgehog amplitude profile around a front at radius
/// rho. With w(R) = h(R + rho) on R in [-rho, 1 - rho] and the weight
/// phi(R) = exp(-2R/rho) (1 + R/rho)^2, evaluates
///   E_phi = integral of phi [ sqrt(Lbar)(w_R^2/3 + 2w^2/(R+rho)^2)
///                             + w^2(h_+ - w)^2 / sqrt(Lbar) ] dR
/// by the edge/node quadrature of the radial energies, plus the mass of
/// |g(w) - g(v)| against the sharp step v (0 left of the front, h_+ right),
/// where g(s) = (2/sqrt 3) integral_0^s w(h_+ - w) dw. The geometric term is
/// dropped at r = 0, where the profile is pinned to zero. Throws ConfigError
/// unless rho is inside (0,1).
WeightedEnergyDiag weighted_energy(const HedgehogProfile& prof, double rho,
                                   const Parameters& p);

/// The moving-frame weight exp(-2R/rho) (1 + R/rho)^2 used inside
/// weighted_energy; equals 1 at the front (R = 0) and vanishes at the
/// origin (R = -rho).
double moving_frame_weight(double R, double rho);

/// g(s) = (2/sqrt 3) integral_0^s w (h_+ - w) dw, the least interface
/// energy carried by a front rising from 0 to amplitude s. Nondecreasing on
/// [0, h_+] with g(h_+) = h_+^3 / (3 sqrt 3).
double front_energy_scale(double s, const Parameters& p);

/// The exponential weight exp(-2(r/r0 - 1)) / r0^2 concentrated at the
/// initial front radius, used by the weighted lower-bound diagnostics.
double front_weight(double r, double r0);

}  // namespace qflow
