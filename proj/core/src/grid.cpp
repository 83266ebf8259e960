#include "qflow/grid.hpp"

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "qflow/bulk.hpp"
#include "qflow/errors.hpp"
#include "qflow/reduce.hpp"

namespace qflow {

GridGeometry make_grid(int dim, int N) {
  if (dim != 2 && dim != 3)
    throw ConfigError("grid: dim must be 2 or 3, got " + std::to_string(dim));
  if (N < 16 || N % 2 != 0)
    throw ConfigError("grid: N must be even and at least 16, got " + std::to_string(N));
  return GridGeometry{dim, N};
}

std::vector<NodeClass> classify(const GridGeometry& g) {
  make_grid(g.dim, g.N);
  std::vector<NodeClass> cls(g.size());
  const double half_h = 0.5 * g.h();
  auto tag = [&](double r) {
    if (std::abs(r - 1.0) < half_h) return NodeClass::Band;
    if (r < 1.0 - half_h) return NodeClass::Interior;
    return NodeClass::Exterior;
  };
  if (g.dim == 3) {
    for (int ix = 0; ix < g.N; ++ix) {
      const double x = g.coord(ix);
      for (int iy = 0; iy < g.N; ++iy) {
        const double y = g.coord(iy);
        for (int iz = 0; iz < g.N; ++iz) {
          const double z = g.coord(iz);
          cls[g.index3(ix, iy, iz)] = tag(std::sqrt(x * x + y * y + z * z));
        }
      }
    }
  } else {
    for (int ix = 0; ix < g.N; ++ix) {
      const double x = g.coord(ix);
      for (int iy = 0; iy < g.N; ++iy) {
        const double y = g.coord(iy);
        cls[g.index2(ix, iy)] = tag(std::sqrt(x * x + y * y));
      }
    }
  }
  return cls;
}

FieldState make_field(const GridGeometry& g) {
  make_grid(g.dim, g.N);
  FieldState f;
  f.geom = g;
  for (auto& c : f.comp) c.assign(g.size(), 0.0);
  return f;
}

namespace {

void require_compatible(const FieldState& y, const std::vector<NodeClass>& cls,
                        const char* what) {
  const std::size_t n = y.geom.size();
  if (cls.size() != n)
    throw ConfigError(std::string(what) + ": classification does not match the grid");
  for (const auto& c : y.comp)
    if (c.size() != n)
      throw ConfigError(std::string(what) + ": field storage does not match the grid");
}

void laplacian3_second(const GridGeometry& g, const double* f, double* out) {
  const int N = g.N;
  const double invh2 = 1.0 / (g.h() * g.h());
#pragma omp parallel for schedule(static)
  for (int ix = 0; ix < N; ++ix) {
    const int xm = ix ? ix - 1 : N - 1, xp = ix + 1 < N ? ix + 1 : 0;
    for (int iy = 0; iy < N; ++iy) {
      const int ym = iy ? iy - 1 : N - 1, yp = iy + 1 < N ? iy + 1 : 0;
      const double* row = f + (static_cast<std::size_t>(ix) * N + iy) * N;
      const double* rxm = f + (static_cast<std::size_t>(xm) * N + iy) * N;
      const double* rxp = f + (static_cast<std::size_t>(xp) * N + iy) * N;
      const double* rym = f + (static_cast<std::size_t>(ix) * N + ym) * N;
      const double* ryp = f + (static_cast<std::size_t>(ix) * N + yp) * N;
      double* o = out + (static_cast<std::size_t>(ix) * N + iy) * N;
      o[0] = (rxm[0] + rxp[0] + rym[0] + ryp[0] + row[N - 1] + row[1] - 6.0 * row[0]) * invh2;
      for (int iz = 1; iz < N - 1; ++iz)
        o[iz] = (rxm[iz] + rxp[iz] + rym[iz] + ryp[iz] + row[iz - 1] + row[iz + 1] -
                 6.0 * row[iz]) *
                invh2;
      o[N - 1] = (rxm[N - 1] + rxp[N - 1] + rym[N - 1] + ryp[N - 1] + row[N - 2] + row[0] -
                  6.0 * row[N - 1]) *
                 invh2;
    }
  }
}

void laplacian2_second(const GridGeometry& g, const double* f, double* out) {
  const int N = g.N;
  const double invh2 = 1.0 / (g.h() * g.h());
#pragma omp parallel for schedule(static)
  for (int ix = 0; ix < N; ++ix) {
    const int xm = ix ? ix - 1 : N - 1, xp = ix + 1 < N ? ix + 1 : 0;
    const double* row = f + static_cast<std::size_t>(ix) * N;
    const double* rxm = f + static_cast<std::size_t>(xm) * N;
    const double* rxp = f + static_cast<std::size_t>(xp) * N;
    double* o = out + static_cast<std::size_t>(ix) * N;
    o[0] = (rxm[0] + rxp[0] + row[N - 1] + row[1] - 4.0 * row[0]) * invh2;
    for (int iy = 1; iy < N - 1; ++iy)
      o[iy] = (rxm[iy] + rxp[iy] + row[iy - 1] + row[iy + 1] - 4.0 * row[iy]) * invh2;
    o[N - 1] = (rxm[N - 1] + rxp[N - 1] + row[N - 2] + row[0] - 4.0 * row[N - 1]) * invh2;
  }
}

// 5-point per-axis stencil (-1, 16, -30, 16, -1)/(12 h^2), periodic.
void laplacian_fourth(const GridGeometry& g, const double* f, double* out) {
  const int N = g.N;
  const double c = 1.0 / (12.0 * g.h() * g.h());
  std::vector<int> m1(N), p1(N), m2(N), p2(N);
  for (int i = 0; i < N; ++i) {
    m1[i] = (i + N - 1) % N;
    p1[i] = (i + 1) % N;
    m2[i] = (i + N - 2) % N;
    p2[i] = (i + 2) % N;
  }
  if (g.dim == 3) {
#pragma omp parallel for schedule(static)
    for (int ix = 0; ix < N; ++ix) {
      for (int iy = 0; iy < N; ++iy) {
        for (int iz = 0; iz < N; ++iz) {
          auto at = [&](int a, int b, int cc) {
            return f[(static_cast<std::size_t>(a) * N + b) * N + cc];
          };
          const double v = at(ix, iy, iz);
          double s = -90.0 * v;
          s += -at(m2[ix], iy, iz) + 16.0 * at(m1[ix], iy, iz) + 16.0 * at(p1[ix], iy, iz) -
               at(p2[ix], iy, iz);
          s += -at(ix, m2[iy], iz) + 16.0 * at(ix, m1[iy], iz) + 16.0 * at(ix, p1[iy], iz) -
               at(ix, p2[iy], iz);
          s += -at(ix, iy, m2[iz]) + 16.0 * at(ix, iy, m1[iz]) + 16.0 * at(ix, iy, p1[iz]) -
               at(ix, iy, p2[iz]);
          out[(static_cast<std::size_t>(ix) * N + iy) * N + iz] = s * c;
        }
      }
    }
  } else {
#pragma omp parallel for schedule(static)
    for (int ix = 0; ix < N; ++ix) {
      for (int iy = 0; iy < N; ++iy) {
        auto at = [&](int a, int b) { return f[static_cast<std::size_t>(a) * N + b]; };
        double s = -60.0 * at(ix, iy);
        s += -at(m2[ix], iy) + 16.0 * at(m1[ix], iy) + 16.0 * at(p1[ix], iy) - at(p2[ix], iy);
        s += -at(ix, m2[iy]) + 16.0 * at(ix, m1[iy]) + 16.0 * at(ix, p1[iy]) - at(ix, p2[iy]);
        out[static_cast<std::size_t>(ix) * N + iy] = s * c;
      }
    }
  }
}

}  // namespace

void grid_rhs(const FieldState& y, const std::vector<NodeClass>& cls,
              const Parameters& p, Stencil stencil, FieldState& out) {
  require_compatible(y, cls, "grid_rhs");
  require_compatible(out, cls, "grid_rhs");
  for (int k = 0; k < 5; ++k) {
    const double* f = y.comp[k].data();
    double* o = out.comp[k].data();
    if (stencil == Stencil::FourthOrder) {
      laplacian_fourth(y.geom, f, o);
    } else if (y.geom.dim == 3) {
      laplacian3_second(y.geom, f, o);
    } else {
      laplacian2_second(y.geom, f, o);
    }
  }
  const double invL = 1.0 / p.Ltilde;
  const std::int64_t n = static_cast<std::int64_t>(y.geom.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t idx = 0; idx < n; ++idx) {
    const NodeClass k = cls[idx];
    if (k == NodeClass::Band) {
      for (int c = 0; c < 5; ++c) out.comp[c][idx] = 0.0;
    } else if (k == NodeClass::Interior) {
      const QTensor r = reaction(p, y.at(idx));
      for (int c = 0; c < 5; ++c) out.comp[c][idx] += r.comp(c) * invL;
    }
  }
  out.time = y.time;
}

double stable_dt_grid(const GridGeometry& g, const Parameters& p, Stencil stencil) {
  make_grid(g.dim, g.N);
  double diff = g.h() * g.h() / (2.0 * g.dim * 1.1);
  if (stencil == Stencil::FourthOrder) diff *= 0.75;
  return std::min(diff, p.Ltilde / reaction_rate_bound(p));
}

void step_grid(FieldState& y, const std::vector<NodeClass>& cls, const Parameters& p,
               double dt, int nsteps, Stencil stencil) {
  require_compatible(y, cls, "step_grid");
  if (!(dt > 0.0)) throw ConfigError("step_grid: dt must be positive");
  const std::size_t n = y.geom.size();
  FieldState k = make_field(y.geom), ys = make_field(y.geom), acc = make_field(y.geom);

  std::vector<std::size_t> band;
  for (std::size_t i = 0; i < n; ++i)
    if (cls[i] == NodeClass::Band) band.push_back(i);
  std::array<std::vector<double>, 5> band_val;
  for (int c = 0; c < 5; ++c) {
    band_val[c].resize(band.size());
    for (std::size_t b = 0; b < band.size(); ++b) band_val[c][b] = y.comp[c][band[b]];
  }

  const std::int64_t nn = static_cast<std::int64_t>(n);
  auto stage = [&](double a) {
    for (int c = 0; c < 5; ++c) {
      const double* yc = y.comp[c].data();
      const double* kc = k.comp[c].data();
      double* sc = ys.comp[c].data();
#pragma omp parallel for schedule(static)
      for (std::int64_t i = 0; i < nn; ++i) sc[i] = yc[i] + a * kc[i];
    }
  };
  auto accumulate = [&](double w, bool first) {
    for (int c = 0; c < 5; ++c) {
      const double* kc = k.comp[c].data();
      double* ac = acc.comp[c].data();
      if (first) {
#pragma omp parallel for schedule(static)
        for (std::int64_t i = 0; i < nn; ++i) ac[i] = kc[i];
      } else {
#pragma omp parallel for schedule(static)
        for (std::int64_t i = 0; i < nn; ++i) ac[i] += w * kc[i];
      }
    }
  };

  for (int s = 0; s < nsteps; ++s) {
    grid_rhs(y, cls, p, stencil, k);
    accumulate(1.0, true);
    stage(0.5 * dt);
    ys.time = y.time + 0.5 * dt;
    grid_rhs(ys, cls, p, stencil, k);
    accumulate(2.0, false);
    stage(0.5 * dt);
    grid_rhs(ys, cls, p, stencil, k);
    accumulate(2.0, false);
    stage(dt);
    ys.time = y.time + dt;
    grid_rhs(ys, cls, p, stencil, k);
    accumulate(1.0, false);
    const double w = dt / 6.0;
    for (int c = 0; c < 5; ++c) {
      double* yc = y.comp[c].data();
      const double* ac = acc.comp[c].data();
#pragma omp parallel for schedule(static)
      for (std::int64_t i = 0; i < nn; ++i) yc[i] += w * ac[i];
    }
    y.time += dt;
    for (int c = 0; c < 5; ++c)
      for (std::size_t b = 0; b < band.size(); ++b) y.comp[c][band[b]] = band_val[c][b];
    for (std::size_t i = 0; i < n; ++i)
      for (int c = 0; c < 5; ++c)
        if (!std::isfinite(y.comp[c][i]))
          throw DivergenceError("field diverged at index " + std::to_string(i) +
                                    ", component " + std::to_string(c) +
                                    ", t = " + std::to_string(y.time),
                                i, c, y.time);
  }
}

double grid_energy(const FieldState& y, const std::vector<NodeClass>& cls,
                   const Parameters& p) {
  require_compatible(y, cls, "grid_energy");
  const GridGeometry& g = y.geom;
  const int N = g.N;
  const double hd = g.dim == 3 ? g.h() * g.h() * g.h() : g.h() * g.h();
  const double edge_f = g.dim == 3 ? g.h() : 1.0;
  const double half_L = 0.5 * p.Ltilde;

  auto edge_term = [&](const QTensor& q, std::size_t nidx) {
    const QTensor d = q - y.at(nidx);
    const double w = cls[nidx] == NodeClass::Interior ? 0.5 : 1.0;
    return w * half_L * norm_sq(d) * edge_f;
  };

  if (g.dim == 3) {
    return deterministic_sum_indexed(g.size(), [&](std::size_t idx) {
      if (cls[idx] != NodeClass::Interior) return 0.0;
      const int iz = static_cast<int>(idx % N);
      const int iy = static_cast<int>((idx / N) % N);
      const int ix = static_cast<int>(idx / (static_cast<std::size_t>(N) * N));
      const QTensor q = y.at(idx);
      double e = bulk_potential(p, q) * hd;
      e += edge_term(q, g.index3(ix ? ix - 1 : N - 1, iy, iz));
      e += edge_term(q, g.index3(ix + 1 < N ? ix + 1 : 0, iy, iz));
      e += edge_term(q, g.index3(ix, iy ? iy - 1 : N - 1, iz));
      e += edge_term(q, g.index3(ix, iy + 1 < N ? iy + 1 : 0, iz));
      e += edge_term(q, g.index3(ix, iy, iz ? iz - 1 : N - 1));
      e += edge_term(q, g.index3(ix, iy, iz + 1 < N ? iz + 1 : 0));
      return e;
    });
  }
  return deterministic_sum_indexed(g.size(), [&](std::size_t idx) {
    if (cls[idx] != NodeClass::Interior) return 0.0;
    const int iy = static_cast<int>(idx % N);
    const int ix = static_cast<int>(idx / N);
    const QTensor q = y.at(idx);
    double e = bulk_potential(p, q) * hd;
    e += edge_term(q, g.index2(ix ? ix - 1 : N - 1, iy));
    e += edge_term(q, g.index2(ix + 1 < N ? ix + 1 : 0, iy));
    e += edge_term(q, g.index2(ix, iy ? iy - 1 : N - 1));
    e += edge_term(q, g.index2(ix, iy + 1 < N ? iy + 1 : 0));
    return e;
  });
}

}  // namespace qflow
