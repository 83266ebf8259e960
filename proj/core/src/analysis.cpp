#include "qflow/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "qflow/errors.hpp"

namespace qflow {
namespace {

int wrap_index(int i, int N) {
  int m = i % N;
  return m < 0 ? m + N : m;
}

QTensor sample2(const FieldState& f, double x, double y) {
  const GridGeometry& g = f.geom;
  const double ux = (x + 1.0) / g.h();
  const double uy = (y + 1.0) / g.h();
  const int ix = static_cast<int>(std::floor(ux));
  const int iy = static_cast<int>(std::floor(uy));
  const double ax = ux - ix;
  const double ay = uy - iy;
  const int x0 = wrap_index(ix, g.N), x1 = wrap_index(ix + 1, g.N);
  const int y0 = wrap_index(iy, g.N), y1 = wrap_index(iy + 1, g.N);
  const std::size_t i00 = g.index2(x0, y0), i10 = g.index2(x1, y0);
  const std::size_t i01 = g.index2(x0, y1), i11 = g.index2(x1, y1);
  QTensor q;
  for (int k = 0; k < 5; ++k) {
    const std::vector<double>& c = f.comp[k];
    const double v0 = (1.0 - ax) * c[i00] + ax * c[i10];
    const double v1 = (1.0 - ax) * c[i01] + ax * c[i11];
    q.comp(k) = (1.0 - ay) * v0 + ay * v1;
  }
  return q;
}

QTensor sample3(const FieldState& f, double x, double y, double z) {
  const GridGeometry& g = f.geom;
  const double ux = (x + 1.0) / g.h();
  const double uy = (y + 1.0) / g.h();
  const double uz = (z + 1.0) / g.h();
  const int ix = static_cast<int>(std::floor(ux));
  const int iy = static_cast<int>(std::floor(uy));
  const int iz = static_cast<int>(std::floor(uz));
  const double ax = ux - ix, ay = uy - iy, az = uz - iz;
  const int x0 = wrap_index(ix, g.N), x1 = wrap_index(ix + 1, g.N);
  const int y0 = wrap_index(iy, g.N), y1 = wrap_index(iy + 1, g.N);
  const int z0 = wrap_index(iz, g.N), z1 = wrap_index(iz + 1, g.N);
  QTensor q;
  for (int k = 0; k < 5; ++k) {
    const std::vector<double>& c = f.comp[k];
    const double v000 = c[g.index3(x0, y0, z0)], v100 = c[g.index3(x1, y0, z0)];
    const double v010 = c[g.index3(x0, y1, z0)], v110 = c[g.index3(x1, y1, z0)];
    const double v001 = c[g.index3(x0, y0, z1)], v101 = c[g.index3(x1, y0, z1)];
    const double v011 = c[g.index3(x0, y1, z1)], v111 = c[g.index3(x1, y1, z1)];
    const double v00 = (1.0 - ax) * v000 + ax * v100;
    const double v10 = (1.0 - ax) * v010 + ax * v110;
    const double v01 = (1.0 - ax) * v001 + ax * v101;
    const double v11 = (1.0 - ax) * v011 + ax * v111;
    const double v0 = (1.0 - ay) * v00 + ay * v10;
    const double v1 = (1.0 - ay) * v01 + ay * v11;
    q.comp(k) = (1.0 - az) * v0 + az * v1;
  }
  return q;
}

/// Largest up-crossing of the threshold along increasing radius, linearly
/// interpolated; 0 if the values start at-or-above and never cross up,
/// 1 if they stay below throughout.
double crossing_radius(const std::vector<double>& radius, const std::vector<double>& value,
                       double threshold) {
  for (int k = static_cast<int>(value.size()) - 1; k >= 1; --k) {
    if (value[k] >= threshold && value[k - 1] < threshold) {
      const double span = value[k] - value[k - 1];
      const double f = span > 0 ? (threshold - value[k - 1]) / span : 1.0;
      return radius[k - 1] + f * (radius[k] - radius[k - 1]);
    }
  }
  return value.front() >= threshold ? 0.0 : 1.0;
}

std::vector<Vec3> angular_directions(int dim) {
  std::vector<Vec3> dirs;
  if (dim == 2) {
    const int n = 256;
    dirs.reserve(n);
    for (int i = 0; i < n; ++i) {
      const double th = 2.0 * M_PI * i / n;
      dirs.push_back({std::cos(th), std::sin(th), 0.0});
    }
  } else {
    // Fibonacci sphere: near-uniform deterministic covering.
    const int n = 512;
    const double golden = M_PI * (3.0 - std::sqrt(5.0));
    dirs.reserve(n);
    for (int i = 0; i < n; ++i) {
      const double z = 1.0 - (2.0 * i + 1.0) / n;
      const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double phi = golden * i;
      dirs.push_back({rho * std::cos(phi), rho * std::sin(phi), z});
    }
  }
  return dirs;
}

double g_of(double s, double hp) {
  return (2.0 / std::sqrt(3.0)) * (hp * s * s / 2.0 - s * s * s / 3.0);
}

}  // namespace

QTensor sample_field(const FieldState& field, const Vec3& point) {
  return field.geom.dim == 3 ? sample3(field, point.x, point.y, point.z)
                             : sample2(field, point.x, point.y);
}

double interface_radius(const FieldState& field, const Parameters& p) {
  const GridGeometry& g = field.geom;
  const std::vector<Vec3> dirs = angular_directions(g.dim);
  const int K = g.N / 2;
  std::vector<double> radius(K + 1), avg(K + 1, 0.0);
  for (int k = 0; k <= K; ++k) radius[k] = k * g.h();
  for (int k = 0; k <= K; ++k) {
    double acc = 0;
    for (const Vec3& d : dirs) acc += norm_sq(sample_field(field, radius[k] * d));
    avg[k] = acc / dirs.size();
  }
  return crossing_radius(radius, avg, p.interface_threshold());
}

double interface_radius(const HedgehogProfile& prof, const Parameters& p) {
  std::vector<double> radius(prof.mesh.nodes()), nsq(prof.mesh.nodes());
  for (int j = 0; j < prof.mesh.nodes(); ++j) {
    radius[j] = prof.mesh.r(j);
    nsq[j] = (2.0 / 3.0) * prof.h[j] * prof.h[j];
  }
  return crossing_radius(radius, nsq, p.interface_threshold());
}

double interface_radius(const UVProfile& prof, const Parameters& p) {
  std::vector<double> radius(prof.mesh.nodes()), nsq(prof.mesh.nodes());
  for (int j = 0; j < prof.mesh.nodes(); ++j) {
    radius[j] = prof.mesh.r(j);
    nsq[j] = prof.u[j] * prof.u[j] / 2.0 + (2.0 / 3.0) * prof.v[j] * prof.v[j];
  }
  return crossing_radius(radius, nsq, p.interface_threshold());
}

double interface_radius(const ScalarDiscProfile& prof, const Parameters& p) {
  std::vector<double> radius(prof.mesh.nodes()), nsq(prof.mesh.nodes());
  for (int j = 0; j < prof.mesh.nodes(); ++j) {
    radius[j] = prof.mesh.r(j);
    nsq[j] = 2.0 * prof.s[j] * prof.s[j];
  }
  return crossing_radius(radius, nsq, p.interface_threshold());
}

CurvatureFit mean_curvature_fit(const InterfaceTrack& track, int dim) {
  if (dim != 2 && dim != 3) throw ConfigError("curvature fit: dim must be 2 or 3");
  if (track.time.size() != track.radius.size())
    throw ConfigError("curvature fit: track has mismatched time and radius lengths");
  const double cutoff = 3.0 * track.spacing;
  std::size_t n = 0;
  while (n < track.radius.size() && track.radius[n] >= cutoff) ++n;
  if (n < 10)
    throw ConfigError("curvature fit: needs at least 10 samples before collapse, have " +
                      std::to_string(n));
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += track.time[i];
    sy += track.radius[i] * track.radius[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = track.time[i] - mx;
    const double dy = track.radius[i] * track.radius[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
  }
  if (sxx <= 0) throw ConfigError("curvature fit: all samples share one time");
  const double b = sxy / sxx;
  double ss_res = 0, ss_tot = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double y = track.radius[i] * track.radius[i];
    const double fit = my + b * (track.time[i] - mx);
    ss_res += (y - fit) * (y - fit);
    ss_tot += (y - my) * (y - my);
  }
  CurvatureFit out;
  out.slope = -b;
  out.intercept = my - b * mx;
  out.r_squared = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
  out.samples_used = static_cast<int>(n);
  out.reference = 2.0 * (dim - 1);
  return out;
}

double predicted_front(double r0, double c, double t) {
  return std::sqrt(std::max(0.0, r0 * r0 - c * t));
}

double planarity_residual(const FieldState& field, const std::vector<NodeClass>& cls) {
  if (cls.size() != field.geom.size())
    throw ConfigError("planarity residual: classification does not match the field geometry");
  double worst = 0;
  for (std::size_t i = 0; i < cls.size(); ++i) {
    if (cls[i] != NodeClass::Interior) continue;
    worst = std::max(worst, std::max(std::abs(field.comp[3][i]), std::abs(field.comp[4][i])));
  }
  return worst;
}

double detect_t_star(const std::vector<double>& time,
                     const std::vector<double>& origin_norm_sq, const Parameters& p) {
  if (time.size() != origin_norm_sq.size())
    throw ConfigError("t* detection: mismatched time and value lengths");
  const double threshold = p.interface_threshold();
  for (std::size_t i = 0; i < origin_norm_sq.size(); ++i) {
    if (!(origin_norm_sq[i] > threshold)) continue;
    if (i == 0) return time[0];
    const double span = origin_norm_sq[i] - origin_norm_sq[i - 1];
    const double f = span > 0 ? (threshold - origin_norm_sq[i - 1]) / span : 0.0;
    return time[i - 1] + f * (time[i] - time[i - 1]);
  }
  return std::numeric_limits<double>::infinity();
}

DeviationReport harmonic_map_deviation(const FieldState& field, const FieldState& target,
                                       const Parameters& p, bool normalized, double r_min,
                                       double r_max) {
  const GridGeometry& g = field.geom;
  if (target.geom.dim != g.dim || target.geom.N != g.N)
    throw ConfigError("deviation: field and target geometries differ");
  DeviationReport out;
  double sum_sq = 0;
  const double hp = p.h_plus();
  auto visit = [&](std::size_t idx, double r) {
    if (r <= r_min || r >= r_max) return;
    const QTensor q = field.at(idx);
    const QTensor t = target.at(idx);
    double d;
    if (normalized) {
      const double nq = qnorm(q);
      if (nq < 1e-6) return;
      d = qnorm((1.0 / nq) * q - (1.0 / hp) * t);
    } else {
      d = qnorm(q - t);
    }
    out.max_norm = std::max(out.max_norm, d);
    sum_sq += d * d;
  };
  if (g.dim == 3) {
    for (int ix = 0; ix < g.N; ++ix)
      for (int iy = 0; iy < g.N; ++iy)
        for (int iz = 0; iz < g.N; ++iz) {
          const double x = g.coord(ix), y = g.coord(iy), z = g.coord(iz);
          visit(g.index3(ix, iy, iz), std::sqrt(x * x + y * y + z * z));
        }
  } else {
    for (int ix = 0; ix < g.N; ++ix)
      for (int iy = 0; iy < g.N; ++iy) {
        const double x = g.coord(ix), y = g.coord(iy);
        visit(g.index2(ix, iy), std::sqrt(x * x + y * y));
      }
  }
  out.l2_norm = std::sqrt(sum_sq * std::pow(g.h(), g.dim));
  return out;
}

std::vector<EigenRow> eigenvalue_profile(const FieldState& field, const Vec3& direction) {
  const double n = norm(direction);
  if (!(n > 0)) throw ConfigError("eigenvalue profile: ray direction is zero");
  if (field.geom.dim == 2 && direction.z != 0)
    throw ConfigError("eigenvalue profile: ray must lie in the plane for a disc field");
  const Vec3 d = (1.0 / n) * direction;
  const int K = field.geom.N / 2;
  std::vector<EigenRow> rows(K + 1);
  for (int k = 0; k <= K; ++k) {
    const double r = k * field.geom.h();
    rows[k].r = r;
    rows[k].value = eigen_decompose(sample_field(field, r * d)).value;
  }
  return rows;
}

WeightedEnergyDiag weighted_energy(const HedgehogProfile& prof, double rho,
                                   const Parameters& p) {
  if (!(rho > 0.0 && rho < 1.0))
    throw ConfigError("weighted energy: front radius must lie inside (0,1)");
  const RadialMesh& mesh = prof.mesh;
  const double dr = mesh.dr();
  const double sq = std::sqrt(p.Lbar());
  const double hp = p.h_plus();
  auto phi = [rho](double R) { return moving_frame_weight(R, rho); };
  WeightedEnergyDiag out;
  out.g_reference = hp * hp * hp / (3.0 * std::sqrt(3.0));
  // Gradient term on edge midpoints, everything else trapezoid on nodes;
  // the moving-frame coordinate is R = r - rho, so the geometric factor
  // 1/(R + rho)^2 is just 1/r^2 and is dropped at the pinned node r = 0.
  for (int j = 0; j < mesh.M; ++j) {
    const double dw = (prof.h[j + 1] - prof.h[j]) / dr;
    const double mid = (mesh.r(j) + mesh.r(j + 1)) / 2.0 - rho;
    out.e_phi += phi(mid) * sq * dw * dw / 3.0 * dr;
  }
  for (int j = 0; j <= mesh.M; ++j) {
    const double r = mesh.r(j);
    const double w = prof.h[j];
    const double tw = (j == 0 || j == mesh.M) ? 0.5 : 1.0;
    const double geometric = r > 0 ? sq * 2.0 * w * w / (r * r) : 0.0;
    const double potential = w * w * (hp - w) * (hp - w) / sq;
    out.e_phi += phi(r - rho) * (geometric + potential) * tw * dr;
    const double gv = r - rho < 0 ? 0.0 : g_of(hp, hp);
    out.g_mass += std::abs(g_of(w, hp) - gv) * tw * dr;
  }
  return out;
}

double moving_frame_weight(double R, double rho) {
  if (!(rho > 0)) throw ConfigError("moving-frame weight: front radius must be positive");
  const double x = R / rho;
  return std::exp(-2.0 * x) * (1.0 + x) * (1.0 + x);
}

double front_energy_scale(double s, const Parameters& p) {
  return g_of(s, p.h_plus());
}

double front_weight(double r, double r0) {
  if (!(r0 > 0)) throw ConfigError("front weight: front radius must be positive");
  return std::exp(-2.0 * (r / r0 - 1.0)) / (r0 * r0);
}

}  // namespace qflow
