#include "qflow/init.hpp"

#include <cmath>
#include <string>

#include "qflow/errors.hpp"

namespace qflow {
namespace {

void require_range(const char* name, double value, double lo, double hi,
                   bool closed_lo) {
  const bool ok = (closed_lo ? value >= lo : value > lo) && value < hi;
  if (!ok)
    throw ConfigError(std::string(name) + " = " + std::to_string(value) +
                      " is outside its admissible range");
}

bool is_ball_family(InitFamily f) {
  switch (f) {
    case InitFamily::CaseI:
    case InitFamily::CaseII:
    case InitFamily::BiaxialSphere:
    case InitFamily::Ellipsoidal:
    case InitFamily::EfficientInterface:
      return true;
    default:
      return false;
  }
}

bool is_disc_family(InitFamily f) {
  switch (f) {
    case InitFamily::UvTanh:
    case InitFamily::UvStar:
    case InitFamily::UvPerturbed:
    case InitFamily::S2dTanh:
    case InitFamily::UvStaticSolution:
      return true;
    default:
      return false;
  }
}

QTensor add(const QTensor& a, const QTensor& b) {
  return {a.q11 + b.q11, a.q22 + b.q22, a.q12 + b.q12, a.q13 + b.q13,
          a.q23 + b.q23};
}

double tanh_step(double r, double centre, double sq_l) {
  return 1.0 + std::tanh((r - centre) / sq_l);
}

/// Q = u (n x n - I2/2) + v (p x p - I/3) with n the radial director tilted
/// out of plane by nz = tilt and renormalized, I2 the identity on the
/// untilted plane frame, p = z-hat. With tilt = 0 this reduces exactly
/// (same arithmetic) to the planar pair form (u/2)(n1 x n1 - m x m)
/// + v (p x p - I/3), which keeps the tilted and untilted families
/// bitwise-comparable.
QTensor uv_tilted(double u, double v, double c, double s, double tilt) {
  const double f = std::sqrt(1.0 - tilt * tilt);
  const double nx = f * c, ny = f * s, nz = tilt;
  const double i11 = c * c + s * s;
  const double i12 = c * s - s * c;
  QTensor q;
  q.q11 = u * (nx * nx - 0.5 * i11) - v / 3.0;
  q.q22 = u * (ny * ny - 0.5 * i11) - v / 3.0;
  q.q12 = u * (nx * ny - 0.5 * i12);
  q.q13 = u * nx * nz;
  q.q23 = u * ny * nz;
  return q;
}

struct DiscFrame {
  double r, c, s;  // radius and in-plane radial direction (cos, sin)
};

DiscFrame disc_frame(double x, double y) {
  const double r = std::sqrt(x * x + y * y);
  if (r == 0.0) return {0.0, 1.0, 0.0};
  return {r, x / r, y / r};
}

QTensor eval_disc(const InitSpec& spec, BoundaryScenario scenario,
                  const Parameters& p, const UVProfile* st, double x,
                  double y) {
  if (x == 0.0 && y == 0.0) return {};
  const DiscFrame fr = disc_frame(x, y);
  const double hp = p.h_plus();
  const double sq_l = std::sqrt(p.Ltilde);
  switch (spec.family) {
    case InitFamily::UvTanh: {
      const double u = 0.5 * hp * tanh_step(fr.r, spec.u0, sq_l);
      const double v = -0.25 * hp * tanh_step(fr.r, spec.v0, sq_l);
      return uv_tilted(u, v, fr.c, fr.s, 0.0);
    }
    case InitFamily::UvStar: {
      const double mod = 1.0 + 0.25 * std::sin(5.0 * std::atan2(y, x));
      const double u = 0.5 * hp * tanh_step(fr.r, spec.u0 * mod, sq_l);
      const double v = -0.25 * hp * tanh_step(fr.r, spec.v0 * mod, sq_l);
      return uv_tilted(u, v, fr.c, fr.s, 0.0);
    }
    case InitFamily::UvPerturbed: {
      const double u = 0.5 * hp * tanh_step(fr.r, spec.u0, sq_l);
      const double v = -0.25 * hp * tanh_step(fr.r, spec.v0, sq_l);
      // + 0.0 turns the -0.0 produced by eps = 0 beyond r = 1 into +0.0,
      // keeping the eps = 0 output bitwise equal to the untilted family
      const double tilt = spec.eps * (1.0 - fr.r) + 0.0;
      return uv_tilted(u, v, fr.c, fr.s, tilt);
    }
    case InitFamily::S2dTanh: {
      const double s2 = 0.5 * hp * tanh_step(fr.r, spec.r0, sq_l);
      return planar_biaxial(s2, Vec3{fr.c, fr.s, 0.0},
                            Vec3{-fr.s, fr.c, 0.0});
    }
    case InitFamily::UvStaticSolution: {
      const int M = st->mesh.M;
      double u, v;
      if (fr.r >= 1.0) {
        u = st->u[M];
        v = st->v[M];
      } else {
        const double pos = fr.r * M;
        const int j = static_cast<int>(pos);
        const double w = pos - j;
        u = st->u[j] + w * (st->u[j + 1] - st->u[j]);
        v = st->v[j] + w * (st->v[j + 1] - st->v[j]);
      }
      return uv_tilted(u, v, fr.c, fr.s, 0.0);
    }
    case InitFamily::StepFront:
      if (fr.r < spec.r0) return {};
      return boundary_tensor(scenario, Vec3{x, y, 0.0}, p);
    default:
      throw ConfigError("initial-data family is not defined on a disc");
  }
}

QTensor eval_ball(const InitSpec& spec, BoundaryScenario scenario,
                  const Parameters& p, double x, double y, double z) {
  if (x == 0.0 && y == 0.0 && z == 0.0) return {};
  const double r = std::sqrt(x * x + y * y + z * z);
  const Vec3 rhat{x / r, y / r, z / r};
  const double hp = p.h_plus();
  const double sq_l = std::sqrt(p.Ltilde);
  switch (spec.family) {
    case InitFamily::CaseI:
      return uniaxial(0.5 * hp * tanh_step(r, spec.r0, sq_l), rhat);
    case InitFamily::CaseII:
      return uniaxial(hp * r, rhat);
    case InitFamily::BiaxialSphere: {
      const double h = 0.5 * hp * tanh_step(r, spec.r0, sq_l);
      const double s = r * (1.0 - r);
      // transverse frame: m the meridional and q the azimuthal direction
      const double rho = std::sqrt(x * x + y * y);
      const double ct = z / r, stt = rho / r;
      const double cp = rho == 0.0 ? 1.0 : x / rho;
      const double sp = rho == 0.0 ? 0.0 : y / rho;
      const Vec3 m{ct * cp, ct * sp, -stt};
      const Vec3 az{-sp, cp, 0.0};
      return add(uniaxial(h, rhat), planar_biaxial(s, m, az));
    }
    case InitFamily::Ellipsoidal: {
      const double level = x * x + 4.0 * y * y + 2.0 * z * z - 0.5;
      const double h = 0.5 * hp * (1.0 + std::tanh(level / sq_l));
      return uniaxial(h, rhat);
    }
    case InitFamily::EfficientInterface:
      return uniaxial(piecewise_front(r - spec.r0, p), rhat);
    case InitFamily::StepFront:
      if (r < spec.r0) return {};
      return boundary_tensor(scenario, Vec3{x, y, z}, p);
    default:
      throw ConfigError("initial-data family is not defined on a ball");
  }
}

}  // namespace

void validate_init(const InitSpec& spec) {
  require_range("r0", spec.r0, 0.0, 1.0, false);
  require_range("u0", spec.u0, 0.0, 1.0, false);
  require_range("v0", spec.v0, 0.0, 1.0, false);
  require_range("epsilon", spec.eps, 0.0, 1.0, true);
}

QTensor boundary_tensor(BoundaryScenario scenario, const Vec3& x,
                        const Parameters& p) {
  const double hp = p.h_plus();
  switch (scenario) {
    case BoundaryScenario::BallRadial: {
      const double r = std::sqrt(x.x * x.x + x.y * x.y + x.z * x.z);
      return uniaxial(hp, Vec3{x.x / r, x.y / r, x.z / r});
    }
    case BoundaryScenario::DiscPlanarUniaxial: {
      const DiscFrame fr = disc_frame(x.x, x.y);
      return uniaxial(hp, Vec3{fr.c, fr.s, 0.0});
    }
    case BoundaryScenario::DiscBiaxial: {
      const DiscFrame fr = disc_frame(x.x, x.y);
      return planar_biaxial(hp, Vec3{fr.c, fr.s, 0.0},
                            Vec3{-fr.s, fr.c, 0.0});
    }
  }
  throw ConfigError("unknown boundary scenario");
}

double piecewise_front(double R, const Parameters& p) {
  const double hp = p.h_plus();
  const double lb = p.Lbar();
  const double q = std::pow(lb, 0.25);
  auto sig = [&](double zz) {
    return hp / (1.0 + std::exp(-std::sqrt(3.0) * hp * zz));
  };
  if (R > 2.0 * q) return hp;
  if (R >= q) return (hp - sig(1.0 / q)) * (R - 2.0 * q) / q + hp;
  if (R >= -q) return sig(R / std::sqrt(lb));
  if (R >= -2.0 * q) return sig(-1.0 / q) * (R + 2.0 * q) / q;
  return 0.0;
}

FieldState generate_grid(const InitSpec& spec, const GridGeometry& geom,
                         const std::vector<NodeClass>& cls,
                         BoundaryScenario scenario, const Parameters& p) {
  validate_init(spec);
  const bool ball_scenario = scenario == BoundaryScenario::BallRadial;
  if (ball_scenario != (geom.dim == 3))
    throw ConfigError("boundary scenario does not match the grid dimension");
  if (spec.family != InitFamily::StepFront) {
    if (geom.dim == 3 && !is_ball_family(spec.family))
      throw ConfigError("initial-data family is not defined on a ball");
    if (geom.dim == 2 && !is_disc_family(spec.family))
      throw ConfigError("initial-data family is not defined on a disc");
  }

  UVProfile st;
  if (spec.family == InitFamily::UvStaticSolution)
    st = solve_uv_static(p, 512);

  FieldState f = make_field(geom);
  const int n = geom.N;
  if (geom.dim == 2) {
#pragma omp parallel for schedule(static)
    for (int ix = 0; ix < n; ++ix) {
      const double x = geom.coord(ix);
      for (int iy = 0; iy < n; ++iy) {
        f.set(f.geom.index2(ix, iy),
              eval_disc(spec, scenario, p, &st, x, geom.coord(iy)));
      }
    }
  } else {
#pragma omp parallel for schedule(static)
    for (int ix = 0; ix < n; ++ix) {
      const double x = geom.coord(ix);
      for (int iy = 0; iy < n; ++iy) {
        const double y = geom.coord(iy);
        for (int iz = 0; iz < n; ++iz) {
          f.set(f.geom.index3(ix, iy, iz),
                eval_ball(spec, scenario, p, x, y, geom.coord(iz)));
        }
      }
    }
  }

#pragma omp parallel for schedule(static)
  for (long idx = 0; idx < static_cast<long>(geom.size()); ++idx) {
    if (cls[idx] != NodeClass::Band) continue;
    long rem = idx;
    int iz = 0;
    if (geom.dim == 3) {
      iz = static_cast<int>(rem % n);
      rem /= n;
    }
    const int iy = static_cast<int>(rem % n);
    const int ix = static_cast<int>(rem / n);
    const Vec3 x{geom.coord(ix), geom.coord(iy),
                 geom.dim == 3 ? geom.coord(iz) : 0.0};
    f.set(idx, boundary_tensor(scenario, x, p));
  }
  return f;
}

HedgehogProfile generate_hedgehog(const InitSpec& spec, const RadialMesh& mesh,
                                  const Parameters& p) {
  validate_init(spec);
  const double hp = p.h_plus();
  const double sq_l = std::sqrt(p.Ltilde);
  HedgehogProfile prof{mesh, std::vector<double>(mesh.nodes(), 0.0), 0.0};
  for (int j = 1; j < mesh.M; ++j) {
    const double r = mesh.r(j);
    switch (spec.family) {
      case InitFamily::CaseI:
        prof.h[j] = 0.5 * hp * tanh_step(r, spec.r0, sq_l);
        break;
      case InitFamily::CaseII:
        prof.h[j] = hp * r;
        break;
      case InitFamily::StepFront:
        prof.h[j] = r < spec.r0 ? 0.0 : hp;
        break;
      case InitFamily::EfficientInterface:
        prof.h[j] = piecewise_front(r - spec.r0, p);
        break;
      default:
        throw ConfigError(
            "initial-data family has no radial hedgehog reduction");
    }
  }
  prof.h[0] = 0.0;
  prof.h[mesh.M] = hp;
  return prof;
}

UVProfile generate_uv(const InitSpec& spec, const RadialMesh& mesh,
                      const Parameters& p) {
  validate_init(spec);
  if (spec.family == InitFamily::UvStaticSolution)
    return solve_uv_static(p, mesh.M);
  if (spec.family != InitFamily::UvTanh)
    throw ConfigError("initial-data family has no radial planar reduction");
  const double hp = p.h_plus();
  const double sq_l = std::sqrt(p.Ltilde);
  UVProfile prof{mesh, std::vector<double>(mesh.nodes(), 0.0),
                 std::vector<double>(mesh.nodes(), 0.0), 0.0};
  for (int j = 0; j <= mesh.M; ++j) {
    const double r = mesh.r(j);
    prof.u[j] = 0.5 * hp * tanh_step(r, spec.u0, sq_l);
    prof.v[j] = -0.25 * hp * tanh_step(r, spec.v0, sq_l);
  }
  prof.u[0] = 0.0;
  prof.u[mesh.M] = hp;
  prof.v[mesh.M] = -0.5 * hp;
  return prof;
}

ScalarDiscProfile generate_s2d(const InitSpec& spec, const RadialMesh& mesh,
                               const Parameters& p) {
  validate_init(spec);
  const double hp = p.h_plus();
  const double sq_l = std::sqrt(p.Ltilde);
  ScalarDiscProfile prof{mesh, std::vector<double>(mesh.nodes(), 0.0), 0.0};
  for (int j = 1; j < mesh.M; ++j) {
    const double r = mesh.r(j);
    switch (spec.family) {
      case InitFamily::S2dTanh:
        prof.s[j] = 0.5 * hp * tanh_step(r, spec.r0, sq_l);
        break;
      case InitFamily::StepFront:
        prof.s[j] = r < spec.r0 ? 0.0 : hp;
        break;
      default:
        throw ConfigError(
            "initial-data family has no radial scalar reduction");
    }
  }
  prof.s[0] = 0.0;
  prof.s[mesh.M] = hp;
  return prof;
}

FieldState reference_radial(const GridGeometry& geom, const Parameters& p) {
  FieldState f = make_field(geom);
  const int n = geom.N;
  const double hp = p.h_plus();
#pragma omp parallel for schedule(static)
  for (int ix = 0; ix < n; ++ix) {
    const double x = geom.coord(ix);
    for (int iy = 0; iy < n; ++iy) {
      const double y = geom.coord(iy);
      if (geom.dim == 2) {
        const DiscFrame fr = disc_frame(x, y);
        if (fr.r > 0.0)
          f.set(geom.index2(ix, iy), uniaxial(hp, Vec3{fr.c, fr.s, 0.0}));
      } else {
        for (int iz = 0; iz < n; ++iz) {
          const double z = geom.coord(iz);
          const double r = std::sqrt(x * x + y * y + z * z);
          if (r == 0.0) continue;
          f.set(geom.index3(ix, iy, iz),
                uniaxial(hp, Vec3{x / r, y / r, z / r}));
        }
      }
    }
  }
  return f;
}

FieldState reference_escaped(const GridGeometry& geom, const Parameters& p) {
  if (geom.dim != 2)
    throw ConfigError("the escaped reference state lives on a disc");
  FieldState f = make_field(geom);
  const int n = geom.N;
  const double hp = p.h_plus();
#pragma omp parallel for schedule(static)
  for (int ix = 0; ix < n; ++ix) {
    const double x = geom.coord(ix);
    for (int iy = 0; iy < n; ++iy) {
      const double y = geom.coord(iy);
      const double r2 = x * x + y * y;
      const double den = 1.0 + r2;
      const Vec3 n2{2.0 * x / den, 2.0 * y / den, (1.0 - r2) / den};
      f.set(geom.index2(ix, iy), uniaxial(hp, n2));
    }
  }
  return f;
}

}  // namespace qflow
