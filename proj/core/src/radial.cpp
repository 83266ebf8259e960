#include "qflow/radial.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "qflow/errors.hpp"
#include "qflow/reduce.hpp"

namespace qflow {

namespace {

void require_mesh(const RadialMesh& mesh, std::size_t n, const char* what) {
  if (mesh.M < 8) throw ConfigError(std::string(what) + ": mesh needs at least 8 intervals");
  if (n != static_cast<std::size_t>(mesh.nodes()))
    throw ConfigError(std::string(what) + ": profile length does not match mesh");
}

void check_finite(const std::vector<double>& y, double time, const char* model) {
  for (std::size_t j = 0; j < y.size(); ++j) {
    if (!std::isfinite(y[j]))
      throw DivergenceError(std::string(model) + " integration diverged at node " +
                                std::to_string(j) + ", t = " + std::to_string(time),
                            j, 0, time);
  }
}

// Second-order one-sided closure for v'(0) = 0.
inline double neumann_closure(const std::vector<double>& v) {
  return (4.0 * v[1] - v[2]) / 3.0;
}

double hedgehog_bulk_rate(const Parameters& p) {
  // sampled Lipschitz bound of the reaction (3/Lbar) h(h_+ - h)(2h - h_+)
  const double c = 3.0 / p.Lbar(), hp = p.h_plus();
  auto g = [&](double h) { return c * h * (hp - h) * (2.0 * h - hp); };
  double rate = 0;
  const double lo = -0.05 * hp, hi = 1.05 * hp, d = (hi - lo) / 256;
  for (int i = 0; i <= 256; ++i) {
    const double h = lo + i * d;
    rate = std::max(rate, std::abs(g(h + 1e-7) - g(h - 1e-7)) / 2e-7);
  }
  return 1.25 * rate;
}

double uv_bulk_rate(const Parameters& p) {
  const double A = p.A, B = p.B, C = p.C, Lt = p.Ltilde, hp = p.h_plus();
  auto fu = [&](double u, double v) {
    return -(u / Lt) * (A + (2.0 / 3.0) * B * v + C * (u * u / 2 + 2 * v * v / 3));
  };
  auto fv = [&](double u, double v) {
    return -(v / Lt) * (A - (B / 3.0) * v + C * (u * u / 2 + 2 * v * v / 3)) -
           (B / (4.0 * Lt)) * u * u;
  };
  double rate = 0;
  const double e = 1e-7;
  for (int i = 0; i <= 64; ++i) {
    for (int j = 0; j <= 64; ++j) {
      const double u = -0.05 * hp + (1.10 * hp) * i / 64.0;
      const double v = -0.55 * hp + (0.60 * hp) * j / 64.0;
      const double a = std::abs(fu(u + e, v) - fu(u - e, v)) / (2 * e) +
                       std::abs(fu(u, v + e) - fu(u, v - e)) / (2 * e);
      const double b = std::abs(fv(u + e, v) - fv(u - e, v)) / (2 * e) +
                       std::abs(fv(u, v + e) - fv(u, v - e)) / (2 * e);
      rate = std::max({rate, a, b});
    }
  }
  return 1.25 * rate;
}

double s2d_bulk_rate(const Parameters& p) {
  // d/ds of -(s/Lt)(A + 2C s^2) is -(A + 6C s^2)/Lt
  const double smax = 1.05 * p.h_plus();
  return 1.25 * (p.A + 6.0 * p.C * smax * smax) / p.Ltilde;
}

}  // namespace

double stable_dt_hedgehog(const RadialMesh& mesh, const Parameters& p) {
  const double dr = mesh.dr();
  return std::min(2.5 * dr * dr / 10.0, 2.5 / hedgehog_bulk_rate(p));
}

double stable_dt_uv(const RadialMesh& mesh, const Parameters& p) {
  const double dr = mesh.dr();
  return std::min(2.5 * dr * dr / 8.0, 2.5 / uv_bulk_rate(p));
}

double stable_dt_s2d(const RadialMesh& mesh, const Parameters& p) {
  const double dr = mesh.dr();
  return std::min(2.5 * dr * dr / 8.0, 2.5 / s2d_bulk_rate(p));
}

namespace {

// h'' + (2/r) h' in conservative flux form (1/r^2)(r^2 h')'. The flux form
// is what makes the discrete flow an exact gradient flow of the edge-based
// energy below, so the energy decreases monotonically per step up to the
// time-integration error.
void hedgehog_rhs(const RadialMesh& mesh, const Parameters& p,
                  const std::vector<double>& h, std::vector<double>& out) {
  const int M = mesh.M;
  const double dr = mesh.dr(), inv_dr2 = 1.0 / (dr * dr);
  const double c = 3.0 / p.Lbar(), hp = p.h_plus();
  out[0] = 0.0;
  out[M] = 0.0;
  for (int j = 1; j < M; ++j) {
    const double r = mesh.r(j);
    const double rp = r + 0.5 * dr, rm = r - 0.5 * dr;
    const double lap = (rp * rp * (h[j + 1] - h[j]) - rm * rm * (h[j] - h[j - 1])) *
                       inv_dr2 / (r * r);
    out[j] = lap - 6.0 * h[j] / (r * r) + c * h[j] * (hp - h[j]) * (2.0 * h[j] - hp);
  }
}

void uv_rhs(const RadialMesh& mesh, const Parameters& p, const std::vector<double>& u,
            const std::vector<double>& v, std::vector<double>& ou, std::vector<double>& ov) {
  const int M = mesh.M;
  const double dr = mesh.dr(), inv_dr2 = 1.0 / (dr * dr);
  const double A = p.A, B = p.B, C = p.C, invL = 1.0 / p.Ltilde;
  const double v0 = neumann_closure(v);
  ou[0] = ou[M] = ov[0] = ov[M] = 0.0;
  for (int j = 1; j < M; ++j) {
    const double r = mesh.r(j);
    const double vm = (j == 1) ? v0 : v[j - 1];
    const double lap_u =
        (u[j + 1] - 2.0 * u[j] + u[j - 1]) * inv_dr2 + (u[j + 1] - u[j - 1]) / (2.0 * dr * r);
    const double lap_v =
        (v[j + 1] - 2.0 * v[j] + vm) * inv_dr2 + (v[j + 1] - vm) / (2.0 * dr * r);
    const double t2 = u[j] * u[j] / 2.0 + 2.0 * v[j] * v[j] / 3.0;
    ou[j] = lap_u - 4.0 * u[j] / (r * r) -
            (u[j] * invL) * (A + (2.0 / 3.0) * B * v[j] + C * t2);
    ov[j] = lap_v - (v[j] * invL) * (A - (B / 3.0) * v[j] + C * t2) -
            (B / 4.0) * invL * u[j] * u[j];
  }
}

void s2d_rhs(const RadialMesh& mesh, const Parameters& p, const std::vector<double>& s,
             std::vector<double>& out) {
  const int M = mesh.M;
  const double dr = mesh.dr(), inv_dr2 = 1.0 / (dr * dr);
  const double A = p.A, C = p.C, invL = 1.0 / p.Ltilde;
  out[0] = 0.0;
  out[M] = 0.0;
  for (int j = 1; j < M; ++j) {
    const double r = mesh.r(j);
    const double lap =
        (s[j + 1] - 2.0 * s[j] + s[j - 1]) * inv_dr2 + (s[j + 1] - s[j - 1]) / (2.0 * dr * r);
    out[j] = lap - 4.0 * s[j] / (r * r) - (s[j] * invL) * (A + 2.0 * C * s[j] * s[j]);
  }
}

// y <- y + (dt/6)(k1 + 2 k2 + 2 k3 + k4)
void combine(std::vector<double>& y, double dt, const std::vector<double>& k1,
             const std::vector<double>& k2, const std::vector<double>& k3,
             const std::vector<double>& k4) {
  const double w = dt / 6.0;
  for (std::size_t j = 0; j < y.size(); ++j)
    y[j] += w * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
}

// ys <- y + a*k
void stage(std::vector<double>& ys, const std::vector<double>& y, double a,
           const std::vector<double>& k) {
  for (std::size_t j = 0; j < y.size(); ++j) ys[j] = y[j] + a * k[j];
}

}  // namespace

void step_hedgehog(HedgehogProfile& prof, const Parameters& p, double dt, int nsteps) {
  require_mesh(prof.mesh, prof.h.size(), "step_hedgehog");
  const std::size_t n = prof.h.size();
  std::vector<double> k1(n), k2(n), k3(n), k4(n), ys(n);
  for (int s = 0; s < nsteps; ++s) {
    hedgehog_rhs(prof.mesh, p, prof.h, k1);
    stage(ys, prof.h, 0.5 * dt, k1);
    hedgehog_rhs(prof.mesh, p, ys, k2);
    stage(ys, prof.h, 0.5 * dt, k2);
    hedgehog_rhs(prof.mesh, p, ys, k3);
    stage(ys, prof.h, dt, k3);
    hedgehog_rhs(prof.mesh, p, ys, k4);
    combine(prof.h, dt, k1, k2, k3, k4);
    prof.time += dt;
    check_finite(prof.h, prof.time, "hedgehog");
  }
}

void step_uv(UVProfile& prof, const Parameters& p, double dt, int nsteps) {
  require_mesh(prof.mesh, prof.u.size(), "step_uv");
  require_mesh(prof.mesh, prof.v.size(), "step_uv");
  const std::size_t n = prof.u.size();
  std::vector<double> ku1(n), ku2(n), ku3(n), ku4(n), us(n);
  std::vector<double> kv1(n), kv2(n), kv3(n), kv4(n), vs(n);
  for (int s = 0; s < nsteps; ++s) {
    uv_rhs(prof.mesh, p, prof.u, prof.v, ku1, kv1);
    stage(us, prof.u, 0.5 * dt, ku1);
    stage(vs, prof.v, 0.5 * dt, kv1);
    uv_rhs(prof.mesh, p, us, vs, ku2, kv2);
    stage(us, prof.u, 0.5 * dt, ku2);
    stage(vs, prof.v, 0.5 * dt, kv2);
    uv_rhs(prof.mesh, p, us, vs, ku3, kv3);
    stage(us, prof.u, dt, ku3);
    stage(vs, prof.v, dt, kv3);
    uv_rhs(prof.mesh, p, us, vs, ku4, kv4);
    combine(prof.u, dt, ku1, ku2, ku3, ku4);
    combine(prof.v, dt, kv1, kv2, kv3, kv4);
    prof.v[0] = neumann_closure(prof.v);
    prof.time += dt;
    check_finite(prof.u, prof.time, "planar pair (u)");
    check_finite(prof.v, prof.time, "planar pair (v)");
  }
}

void step_s2d(ScalarDiscProfile& prof, const Parameters& p, double dt, int nsteps) {
  require_mesh(prof.mesh, prof.s.size(), "step_s2d");
  const std::size_t n = prof.s.size();
  std::vector<double> k1(n), k2(n), k3(n), k4(n), ys(n);
  for (int s = 0; s < nsteps; ++s) {
    s2d_rhs(prof.mesh, p, prof.s, k1);
    stage(ys, prof.s, 0.5 * dt, k1);
    s2d_rhs(prof.mesh, p, ys, k2);
    stage(ys, prof.s, 0.5 * dt, k2);
    s2d_rhs(prof.mesh, p, ys, k3);
    stage(ys, prof.s, dt, k3);
    s2d_rhs(prof.mesh, p, ys, k4);
    combine(prof.s, dt, k1, k2, k3, k4);
    prof.time += dt;
    check_finite(prof.s, prof.time, "2D scalar");
  }
}

namespace {

// Gradient terms live on edge midpoints, pointwise terms on nodes with
// trapezoid end weights. With the flux-form spatial operators the node sum's
// gradient is exactly minus the discrete right-hand side (times the positive
// metric weight), so these energies are true Lyapunov functions of the
// discrete flows, not just consistent quadratures.
template <class Fe, class Fn>
double edge_node_sum(int M, double dr, Fe&& edge, Fn&& node) {
  const double ge = dr * deterministic_sum_indexed(
                             static_cast<std::size_t>(M),
                             [&](std::size_t j) { return edge(static_cast<int>(j)); });
  const double gn = dr * deterministic_sum_indexed(
                             static_cast<std::size_t>(M) + 1, [&](std::size_t j) {
                               const double w =
                                   (j == 0 || j == static_cast<std::size_t>(M)) ? 0.5 : 1.0;
                               return w * node(static_cast<int>(j));
                             });
  return ge + gn;
}

}  // namespace

double hedgehog_energy(const HedgehogProfile& prof, const Parameters& p) {
  require_mesh(prof.mesh, prof.h.size(), "hedgehog_energy");
  const int M = prof.mesh.M;
  const double dr = prof.mesh.dr(), inv_dr = 1.0 / dr;
  const double sL = std::sqrt(p.Lbar()), hp = p.h_plus();
  const auto& h = prof.h;
  return edge_node_sum(
      M, dr,
      [&](int j) {
        const double re = prof.mesh.r(j) + 0.5 * dr;
        const double g = (h[j + 1] - h[j]) * inv_dr;
        return re * re * sL * g * g / 3.0;
      },
      [&](int j) {
        const double r = prof.mesh.r(j);
        const double dw = h[j] * (h[j] - hp);
        return 2.0 * sL * h[j] * h[j] + r * r * dw * dw / sL;
      });
}

double uv_energy(const UVProfile& prof, const Parameters& p) {
  require_mesh(prof.mesh, prof.u.size(), "uv_energy");
  const int M = prof.mesh.M;
  const double dr = prof.mesh.dr(), inv_dr = 1.0 / dr;
  const double A = p.A, B = p.B, C = p.C, invL = 1.0 / p.Ltilde;
  const auto& u = prof.u;
  const auto& v = prof.v;
  return edge_node_sum(
      M, dr,
      [&](int j) {
        const double re = prof.mesh.r(j) + 0.5 * dr;
        const double gu = (u[j + 1] - u[j]) * inv_dr;
        const double gv = (v[j + 1] - v[j]) * inv_dr;
        return re * (gu * gu / 4.0 + gv * gv / 3.0);
      },
      [&](int j) {
        const double r = prof.mesh.r(j);
        const double t2 = u[j] * u[j] / 2.0 + 2.0 * v[j] * v[j] / 3.0;
        const double t3 = v[j] * (2.0 * v[j] * v[j] / 9.0 - u[j] * u[j] / 2.0);
        const double fb = (A / 2.0) * t2 - (B / 3.0) * t3 + (C / 4.0) * t2 * t2;
        const double geom = (j == 0) ? 0.0 : u[j] * u[j] / r;  // u(0) = 0
        return geom + r * fb * invL;
      });
}

double s2d_energy(const ScalarDiscProfile& prof, const Parameters& p, ScalarEnergyForm form) {
  require_mesh(prof.mesh, prof.s.size(), "s2d_energy");
  const int M = prof.mesh.M;
  const double dr = prof.mesh.dr(), inv_dr = 1.0 / dr;
  const double A = p.A, C = p.C, invL = 1.0 / p.Ltilde;
  const bool descent = form == ScalarEnergyForm::Descent;
  const double geom_c = descent ? 4.0 : 2.0;
  const double quart_c = descent ? C : C / 4.0;
  const auto& s = prof.s;
  return edge_node_sum(
      M, dr,
      [&](int j) {
        const double re = prof.mesh.r(j) + 0.5 * dr;
        const double g = (s[j + 1] - s[j]) * inv_dr;
        return re * g * g;
      },
      [&](int j) {
        const double r = prof.mesh.r(j);
        const double s2 = s[j] * s[j];
        const double geom = (j == 0) ? 0.0 : geom_c * s2 / r;  // s(0) = 0
        return geom + r * (A * s2 + quart_c * s2 * s2) * invL;
      });
}

double uv_static_residual(const UVProfile& prof, const Parameters& p) {
  require_mesh(prof.mesh, prof.u.size(), "uv_static_residual");
  const std::size_t n = prof.u.size();
  std::vector<double> ou(n), ov(n);
  uv_rhs(prof.mesh, p, prof.u, prof.v, ou, ov);
  double res = 0;
  for (int j = 1; j < prof.mesh.M; ++j)
    res = std::max({res, std::abs(ou[j]), std::abs(ov[j])});
  return res;
}

UVProfile solve_uv_static(const Parameters& p, int M, UVStaticStats* stats) {
  if (M < 16) throw ConfigError("solve_uv_static: mesh needs at least 16 intervals");
  std::vector<int> levels{M};
  while (levels.back() % 2 == 0 && levels.back() > 96) levels.push_back(levels.back() / 2);
  std::reverse(levels.begin(), levels.end());

  const double hp = p.h_plus(), sq = std::sqrt(p.Ltilde);
  UVProfile prof;
  prof.mesh.M = levels[0];
  prof.u.resize(prof.mesh.nodes());
  prof.v.resize(prof.mesh.nodes());
  for (int j = 0; j <= prof.mesh.M; ++j) {
    const double r = prof.mesh.r(j);
    prof.u[j] = 0.5 * hp * (1.0 + std::tanh((r - 0.5) / sq));
    prof.v[j] = -0.25 * hp * (1.0 + std::tanh((r - 0.5) / sq));
  }

  long total_steps = 0;
  double dt = 0, res = 0;
  for (std::size_t lev = 0; lev < levels.size(); ++lev) {
    if (lev > 0) {
      // linear refinement onto the doubled mesh
      UVProfile fine;
      fine.mesh.M = levels[lev];
      fine.u.resize(fine.mesh.nodes());
      fine.v.resize(fine.mesh.nodes());
      for (int j = 0; j <= prof.mesh.M; ++j) {
        fine.u[2 * j] = prof.u[j];
        fine.v[2 * j] = prof.v[j];
      }
      for (int j = 0; j < prof.mesh.M; ++j) {
        fine.u[2 * j + 1] = 0.5 * (prof.u[j] + prof.u[j + 1]);
        fine.v[2 * j + 1] = 0.5 * (prof.v[j] + prof.v[j + 1]);
      }
      prof = std::move(fine);
    }
    prof.u[0] = 0.0;
    prof.u[prof.mesh.M] = hp;
    prof.v[prof.mesh.M] = -0.5 * hp;
    prof.v[0] = (4.0 * prof.v[1] - prof.v[2]) / 3.0;

    dt = stable_dt_uv(prof.mesh, p);
    const double tol = (lev + 1 == levels.size()) ? 1e-8 : 1e-7;
    const long max_steps = 40000000;
    long steps = 0;
    const int chunk = 500;
    while (true) {
      res = uv_static_residual(prof, p);
      if (res < tol) break;
      if (steps >= max_steps)
        throw ConvergenceError("solve_uv_static: step budget exhausted at M = " +
                                   std::to_string(prof.mesh.M) +
                                   ", residual = " + std::to_string(res),
                               res);
      step_uv(prof, p, dt, chunk);
      steps += chunk;
    }
    total_steps += steps;
  }
  if (stats) {
    stats->total_steps = total_steps;
    stats->final_residual = res;
    stats->dt_finest = dt;
  }
  prof.time = 0;
  return prof;
}

}  // namespace qflow
