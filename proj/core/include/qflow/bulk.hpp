#pragma once
#include <vector>

#include "qflow/params.hpp"
#include "qflow/tensor.hpp"

namespace qflow {

/// Bulk free-energy density
///   f(Q) = (A/2) tr Q^2 - (B/3) tr Q^3 + (C/4) (tr Q^2)^2.
/// With A = B^2/27C both wells sit at f = 0.
double bulk_potential(const Parameters& p, const QTensor& q);

/// Minus the bulk gradient in the tensor (Frobenius) metric:
///   -( A Q - B (Q^2 - I tr(Q^2)/3) + C tr(Q^2) Q ).
/// The elastic prefactor 1/Ltilde is applied by the evolution routines,
/// never here.
QTensor reaction(const Parameters& p, const QTensor& q);

struct BulkEval {
  double value;            ///< f(Q)
  QTensor minus_gradient;  ///< reaction(Q)
};
BulkEval bulk_eval(const Parameters& p, const QTensor& q);

/// Deterministic sampled upper bound on the spectral norm of the reaction
/// Jacobian over |Q| <= bound_q, with a 1.25 safety factor. Reaction part of
/// time-step limits: dt_reaction = Ltilde / reaction_rate_bound.
double reaction_rate_bound(const Parameters& p);

/// Out-of-plane perturbation profile psi(r) = 100 r^2 (1-r^2)^2 / (1+100 r^2),
/// evaluated on a mesh. Vanishes at r = 0 and r = 1.
std::vector<double> escape_probe(const std::vector<double>& r);

/// Second variation of the energy at the planar critical point (u,v),
/// perturbed out of plane by V = psi (n1 x p + p x n1). Evaluated by
/// quadrature over the disc with the tensors assembled pointwise:
///   d2I = int 1/2 |grad V|^2
///       + (1/L)[ (A/2)|V|^2 - B tr(Q V^2) + C (Q.V)^2 + (C/2)|Q|^2 |V|^2 ].
/// Requires (u,v) to be a converged static pair on the mesh (residual
/// max-norm below 1e-6), else throws StaleInputError; psi must vanish at
/// r = 1. The elastic constant used is p.Ltilde.
double second_variation(const std::vector<double>& r, const std::vector<double>& u,
                        const std::vector<double>& v, const std::vector<double>& psi,
                        const Parameters& p);

/// Quadrature core of second_variation without the convergence gate.
/// Exposed for validation against an independent reduction.
double second_variation_quadrature(const std::vector<double>& r,
                                   const std::vector<double>& u,
                                   const std::vector<double>& v,
                                   const std::vector<double>& psi,
                                   const Parameters& p);

}  // namespace qflow
