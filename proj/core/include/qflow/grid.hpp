#pragma once
#include <array>
#include <cstddef>
#include <vector>

#include "qflow/params.hpp"
#include "qflow/tensor.hpp"

namespace qflow {

/// Node classes of the embedded-domain grid, by precedence:
/// Band if | |x| - 1 | < h/2 (boundary values pinned there), else Interior
/// if |x| < 1 - h/2 (full dynamics), else Exterior (diffusion only).
enum class NodeClass : unsigned char { Interior = 0, Band = 1, Exterior = 2 };

/// Periodic Cartesian grid on [-1,1)^dim with the unit ball (dim 3) or disc
/// (dim 2) embedded. Nodes sit at x_i = -1 + i h, h = 2/N; the origin is the
/// node with all indices N/2. Flattened index is x-major: (ix N + iy) N + iz
/// in 3D, ix N + iy in 2D.
struct GridGeometry {
  int dim = 3;
  int N = 0;

  double h() const { return 2.0 / N; }
  double coord(int i) const { return -1.0 + i * h(); }
  int origin_axis_index() const { return N / 2; }
  std::size_t size() const {
    std::size_t s = static_cast<std::size_t>(N) * N;
    return dim == 3 ? s * N : s;
  }
  std::size_t index2(int ix, int iy) const {
    return static_cast<std::size_t>(ix) * N + iy;
  }
  std::size_t index3(int ix, int iy, int iz) const {
    return (static_cast<std::size_t>(ix) * N + iy) * N + iz;
  }
  std::size_t origin_index() const {
    const int o = origin_axis_index();
    return dim == 3 ? index3(o, o, o) : index2(o, o);
  }
};

/// Validated geometry. Throws ConfigError unless dim is 2 or 3 and N is even
/// and at least 16. (An even N puts the origin exactly on a node.)
GridGeometry make_grid(int dim, int N);

/// Node classification for the whole grid, flattened-index order.
std::vector<NodeClass> classify(const GridGeometry& g);

/// Q-tensor field on a grid, component-major: five contiguous scalar arrays
/// in the slot order (11, 22, 12, 13, 23).
struct FieldState {
  GridGeometry geom;
  std::array<std::vector<double>, 5> comp;
  double time = 0;

  QTensor at(std::size_t idx) const {
    return {comp[0][idx], comp[1][idx], comp[2][idx], comp[3][idx], comp[4][idx]};
  }
  void set(std::size_t idx, const QTensor& q) {
    for (int k = 0; k < 5; ++k) comp[k][idx] = q.comp(k);
  }
};

/// Zero-initialized field on a validated geometry.
FieldState make_field(const GridGeometry& g);

enum class Stencil {
  SecondOrder,  ///< 3-point per axis
  FourthOrder,  ///< 5-point per axis (-1/12, 4/3, -5/2, 4/3, -1/12)/h^2
};

/// Right-hand side of the embedded gradient flow:
///   Interior: laplacian(Q) + reaction(Q)/Ltilde
///   Exterior: laplacian(Q)
///   Band:     0 (values pinned).
/// Periodic wrap in every axis. out must have the same geometry.
void grid_rhs(const FieldState& y, const std::vector<NodeClass>& cls,
              const Parameters& p, Stencil stencil, FieldState& out);

/// Largest stable RK4 step: the diffusive limit h^2/(2 dim 1.1) (times 3/4
/// for the wider stencil) combined with the reaction limit
/// Ltilde / reaction_rate_bound(p). The two safety margins are sized so the
/// combined real-axis excursion stays below the RK4 bound 2.785 even when
/// both limits bind at once.
double stable_dt_grid(const GridGeometry& g, const Parameters& p,
                      Stencil stencil = Stencil::SecondOrder);

/// Classical RK4 steps. Band values are captured on entry and rewritten
/// bitwise after every step (their stage slopes are zero already; the
/// rewrite guards the sign of zero under accumulation). After each step the
/// field is scanned in flattened-index order, components within a node, and
/// the first non-finite value raises DivergenceError with its index,
/// component slot, and time.
void step_grid(FieldState& y, const std::vector<NodeClass>& cls, const Parameters& p,
               double dt, int nsteps = 1, Stencil stencil = Stencil::SecondOrder);

/// Discrete energy of the embedded domain: cell quadrature over interior
/// nodes of (Ltilde/2)|grad Q|^2 + f_B, with gradients on cell faces:
///   sum over interior nodes of f_B(Q) h^dim
/// + sum over edges with an interior endpoint of
///     (Ltilde/2) |Q_+ - Q_-|^2 h^(dim-2),
/// interior-interior edges half-weighted from each side, interior-band edges
/// taken in full from the interior side. The band insulates the interior
/// from the exterior, so this value is exactly nonincreasing along step_grid
/// with the default stencil, up to time-integration error.
double grid_energy(const FieldState& y, const std::vector<NodeClass>& cls,
                   const Parameters& p);

}  // namespace qflow
