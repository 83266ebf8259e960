#pragma once
#include <vector>

#include "qflow/grid.hpp"
#include "qflow/params.hpp"
#include "qflow/radial.hpp"
#include "qflow/tensor.hpp"

namespace qflow {

/// Initial-data families. Ball families (dim 3) use the radial frame of the
/// unit ball, disc families (dim 2) the polar frame of the unit disc;
/// StepFront exists in both geometries and as a radial profile.
enum class InitFamily {
  CaseI,               ///< uniaxial radial, tanh front centred at r0
  CaseII,              ///< uniaxial radial, h = h_+ r, no front
  BiaxialSphere,       ///< CaseI amplitude plus an r(1-r) transverse biaxial part
  Ellipsoidal,         ///< uniaxial radial, tanh front on an ellipsoidal level set
  UvTanh,              ///< planar (u,v) pair with tanh fronts centred at u0, v0
  UvStar,              ///< (u,v) pair, front radii modulated by 1 + 0.25 sin 5t
  UvPerturbed,         ///< UvTanh with an out-of-plane director tilt eps(1-r)
  StepFront,           ///< sharp front: zero inside r0, boundary state outside
  EfficientInterface,  ///< five-piece sigmoid front with near-minimal interface energy
  S2dTanh,             ///< single-amplitude biaxial pair, tanh front centred at r0
  UvStaticSolution,    ///< relaxed static (u,v) pair, embedded as a tensor field
};

/// Dirichlet data held on the embedding band.
enum class BoundaryScenario {
  BallRadial,          ///< h_+ (rhat x rhat - I/3)
  DiscPlanarUniaxial,  ///< h_+ (n1 x n1 - I/3), n1 the planar radial director
  DiscBiaxial,         ///< h_+ (n1 x n1 - m x m), maximally biaxial
};

struct InitSpec {
  InitFamily family = InitFamily::CaseI;
  double r0 = 0.5;   ///< front radius, in (0,1)
  double u0 = 0.5;   ///< u front centre, in (0,1)
  double v0 = 0.5;   ///< v front centre, in (0,1)
  double eps = 0.0;  ///< director tilt amplitude, in [0,1)
};

/// Throws ConfigError when a parameter sits outside its documented range.
void validate_init(const InitSpec& spec);

/// Dirichlet tensor at position x. Band points lie near |x| = 1, so the
/// polar/radial frame is always well defined there.
QTensor boundary_tensor(BoundaryScenario scenario, const Vec3& x,
                        const Parameters& p);

/// Five-piece mollified front shape w(R), R the signed distance from the
/// front: a scaled logistic core, linear matching ramps, and constant
/// tails 0 / h_+. Continuous across the four junctions.
double piecewise_front(double R, const Parameters& p);

/// Evaluates the family formula at every node, then overwrites band nodes
/// with boundary_tensor(scenario). Exterior nodes keep the formula's smooth
/// extension. Where a family's angular frame degenerates at the origin the
/// tensor is set to zero. Deterministic: equal inputs give bitwise-equal
/// fields. Throws ConfigError when the family or scenario does not fit the
/// grid dimension.
FieldState generate_grid(const InitSpec& spec, const GridGeometry& geom,
                         const std::vector<NodeClass>& cls,
                         BoundaryScenario scenario, const Parameters& p);

/// Radial amplitude h(r) for CaseI, CaseII, StepFront, EfficientInterface.
/// The endpoints carry the Dirichlet values h(0) = 0, h(1) = h_+ exactly,
/// overriding the formula's (exponentially close) tail values.
HedgehogProfile generate_hedgehog(const InitSpec& spec, const RadialMesh& mesh,
                                  const Parameters& p);

/// Planar pair (u, v) for UvTanh and UvStaticSolution. Endpoints carry
/// u(0) = 0, u(1) = h_+, v(1) = -h_+/2 exactly; v(0) keeps the formula
/// value, the evolution's Neumann closure owns that node. UvStaticSolution
/// relaxes the static system on the given mesh.
UVProfile generate_uv(const InitSpec& spec, const RadialMesh& mesh,
                      const Parameters& p);

/// Scalar amplitude s(r) for S2dTanh and StepFront, endpoints s(0) = 0,
/// s(1) = h_+ exact.
ScalarDiscProfile generate_s2d(const InitSpec& spec, const RadialMesh& mesh,
                               const Parameters& p);

/// Bulk-minimizing radial state, zero at the origin where the radial frame
/// degenerates: dim 3 gives h_+ (rhat x rhat - I/3), dim 2 the planar
/// analogue on the in-plane radial director.
FieldState reference_radial(const GridGeometry& geom, const Parameters& p);

/// Everywhere-smooth escaped state h_+ (n2 x n2 - I/3) with
/// n2 = (2x, 2y, 1 - r^2)/(1 + r^2). Dim 2 only.
FieldState reference_escaped(const GridGeometry& geom, const Parameters& p);

}  // namespace qflow
