#include "qflow/bulk.hpp"

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "qflow/errors.hpp"
#include "qflow/radial.hpp"
#include "qflow/reduce.hpp"

namespace qflow {

double bulk_potential(const Parameters& p, const QTensor& q) {
  const double t2 = norm_sq(q);
  const double t3 = trace_cubed(q);
  return (p.A / 2.0) * t2 - (p.B / 3.0) * t3 + (p.C / 4.0) * t2 * t2;
}

QTensor reaction(const Parameters& p, const QTensor& q) {
  const double t2 = norm_sq(q);
  // Q^2 entries after eliminating q33 = -(q11+q22)
  const double s11 = q.q11 * q.q11 + q.q12 * q.q12 + q.q13 * q.q13;
  const double s22 = q.q12 * q.q12 + q.q22 * q.q22 + q.q23 * q.q23;
  const double s12 = q.q12 * (q.q11 + q.q22) + q.q13 * q.q23;
  const double s13 = q.q12 * q.q23 - q.q13 * q.q22;
  const double s23 = q.q12 * q.q13 - q.q23 * q.q11;
  const double A = p.A, B = p.B, C = p.C, third = t2 / 3.0;
  QTensor r;
  r.q11 = -(A * q.q11 - B * (s11 - third) + C * t2 * q.q11);
  r.q22 = -(A * q.q22 - B * (s22 - third) + C * t2 * q.q22);
  r.q12 = -(A * q.q12 - B * s12 + C * t2 * q.q12);
  r.q13 = -(A * q.q13 - B * s13 + C * t2 * q.q13);
  r.q23 = -(A * q.q23 - B * s23 + C * t2 * q.q23);
  return r;
}

BulkEval bulk_eval(const Parameters& p, const QTensor& q) {
  return {bulk_potential(p, q), reaction(p, q)};
}

namespace {

// Pinned normal deviates: Box-Muller on a fixed mt19937 stream, so the
// sample set is identical across platforms and standard libraries.
struct GaussianStream {
  std::mt19937 gen{12345};
  bool have_spare = false;
  double spare = 0;

  double uniform01() { return (static_cast<double>(gen()) + 0.5) / 4294967296.0; }

  double operator()() {
    if (have_spare) {
      have_spare = false;
      return spare;
    }
    const double u1 = uniform01(), u2 = uniform01();
    const double m = std::sqrt(-2.0 * std::log(u1));
    spare = m * std::sin(2.0 * 3.14159265358979323846 * u2);
    have_spare = true;
    return m * std::cos(2.0 * 3.14159265358979323846 * u2);
  }
};

// Spectral norm of the 5x5 finite-difference Jacobian of the reaction map
// at q, by power iteration on J^T J.
double jacobian_norm(const Parameters& p, const QTensor& q) {
  double J[5][5];
  for (int j = 0; j < 5; ++j) {
    const double h = 1e-6 * std::max(1.0, std::abs(q.comp(j)));
    QTensor qp = q, qm = q;
    qp.comp(j) += h;
    qm.comp(j) -= h;
    const QTensor rp = reaction(p, qp), rm = reaction(p, qm);
    for (int i = 0; i < 5; ++i) J[i][j] = (rp.comp(i) - rm.comp(i)) / (2.0 * h);
  }
  double x[5] = {1, 1, 1, 1, 1};
  double lambda = 0;
  for (int it = 0; it < 50; ++it) {
    double y[5] = {0, 0, 0, 0, 0}, z[5] = {0, 0, 0, 0, 0};
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 5; ++j) y[i] += J[i][j] * x[j];
    for (int j = 0; j < 5; ++j)
      for (int i = 0; i < 5; ++i) z[j] += J[i][j] * y[i];
    double xx = 0, xz = 0, zz = 0;
    for (int i = 0; i < 5; ++i) {
      xx += x[i] * x[i];
      xz += x[i] * z[i];
      zz += z[i] * z[i];
    }
    lambda = xz / xx;
    if (zz == 0) break;
    const double inv = 1.0 / std::sqrt(zz);
    for (int i = 0; i < 5; ++i) x[i] = z[i] * inv;
  }
  return std::sqrt(std::max(0.0, lambda));
}

}  // namespace

double reaction_rate_bound(const Parameters& p) {
  GaussianStream gauss;
  const double bq = p.bound_q();
  double worst = jacobian_norm(p, QTensor{});
  worst = std::max(worst, jacobian_norm(p, uniaxial(p.h_plus(), Vec3{0, 0, 1})));
  worst = std::max(worst, jacobian_norm(p, planar_biaxial(bq / std::sqrt(2.0),
                                                          Vec3{1, 0, 0}, Vec3{0, 1, 0})));
  for (int s = 0; s < 2048; ++s) {
    QTensor q;
    for (int k = 0; k < 5; ++k) q.comp(k) = gauss();
    const double qn = qnorm(q);
    if (qn < 1e-12) continue;
    const double radius = gauss.uniform01() * bq;
    q *= radius / qn;
    worst = std::max(worst, jacobian_norm(p, q));
  }
  return 1.25 * worst;
}

std::vector<double> escape_probe(const std::vector<double>& r) {
  std::vector<double> psi(r.size());
  for (std::size_t j = 0; j < r.size(); ++j) {
    const double r2 = r[j] * r[j], w = 1.0 - r2;
    psi[j] = 100.0 * r2 * w * w / (1.0 + 100.0 * r2);
  }
  return psi;
}

namespace {

double trace_qvv(const QTensor& q, const QTensor& v) {
  double t = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) t += q(i, j) * v(j, k) * v(k, i);
  return t;
}

inline double deriv(const std::vector<double>& y, std::size_t j, std::size_t M, double dr) {
  if (j == 0) return (-3.0 * y[0] + 4.0 * y[1] - y[2]) / (2.0 * dr);
  if (j == M) return (3.0 * y[M] - 4.0 * y[M - 1] + y[M - 2]) / (2.0 * dr);
  return (y[j + 1] - y[j - 1]) / (2.0 * dr);
}

}  // namespace

double second_variation_quadrature(const std::vector<double>& r,
                                   const std::vector<double>& u,
                                   const std::vector<double>& v,
                                   const std::vector<double>& psi,
                                   const Parameters& p) {
  const std::size_t n = r.size();
  if (n < 3 || u.size() != n || v.size() != n || psi.size() != n)
    throw ConfigError("second_variation: profile lengths do not match the mesh");
  const std::size_t M = n - 1;
  const double dr = r[1] - r[0];
  const double invL = 1.0 / p.Ltilde;
  constexpr int kAngles = 16;
  constexpr double kPi = 3.14159265358979323846;

  const double integral = dr * deterministic_sum_indexed(n, [&](std::size_t j) {
    if (j == 0) return 0.0;  // r weight kills the axis row
    const double w = (j == M) ? 0.5 : 1.0;
    const double rp = r[j];
    const double dpsi = deriv(psi, j, M, dr);
    double acc = 0;
    for (int a = 0; a < kAngles; ++a) {
      const double th = 2.0 * kPi * a / kAngles;
      const double c = std::cos(th), s = std::sin(th);
      const QTensor q = uv_tensor_polar(u[j], v[j], rp * c, rp * s);
      const QTensor V{0, 0, 0, psi[j] * c, psi[j] * s};
      const QTensor dVr{0, 0, 0, dpsi * c, dpsi * s};
      const QTensor dVt{0, 0, 0, -psi[j] * s / rp, psi[j] * c / rp};
      const double grad2 = norm_sq(dVr) + norm_sq(dVt);
      const double qv = frobenius_dot(q, V);
      const double bulk = (p.A / 2.0) * norm_sq(V) - p.B * trace_qvv(q, V) +
                          p.C * qv * qv + (p.C / 2.0) * norm_sq(q) * norm_sq(V);
      acc += 0.5 * grad2 + bulk * invL;
    }
    return w * rp * acc / kAngles;
  });
  return 2.0 * kPi * integral;
}

double second_variation(const std::vector<double>& r, const std::vector<double>& u,
                        const std::vector<double>& v, const std::vector<double>& psi,
                        const Parameters& p) {
  const std::size_t n = r.size();
  if (n < 9 || u.size() != n || v.size() != n || psi.size() != n)
    throw ConfigError("second_variation: profile lengths do not match the mesh");
  const std::size_t M = n - 1;
  const double dr = 1.0 / static_cast<double>(M);
  for (std::size_t j = 0; j < n; ++j) {
    if (std::abs(r[j] - static_cast<double>(j) * dr) > 1e-12)
      throw ConfigError("second_variation: mesh must be uniform on [0,1]");
  }
  if (std::abs(psi[M]) > 1e-12)
    throw ConfigError("second_variation: perturbation must vanish at r = 1");

  UVProfile prof;
  prof.mesh.M = static_cast<int>(M);
  prof.u = u;
  prof.v = v;
  const double res = uv_static_residual(prof, p);
  if (res >= 1e-6)
    throw StaleInputError("second_variation: (u,v) is not a converged static pair, residual = " +
                          std::to_string(res));
  return second_variation_quadrature(r, u, v, psi, p);
}

}  // namespace qflow
