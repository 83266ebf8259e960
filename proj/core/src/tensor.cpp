#include "qflow/tensor.hpp"

#include <algorithm>
#include <cmath>

namespace qflow {

namespace {
constexpr double kFrameTol = 1e-9;
}

double QTensor::operator()(int i, int j) const {
  if (i > j) std::swap(i, j);
  if (i == 0) {
    if (j == 0) return q11;
    if (j == 1) return q12;
    return q13;
  }
  if (i == 1) {
    if (j == 1) return q22;
    return q23;
  }
  return q33();
}

double frobenius_dot(const QTensor& a, const QTensor& b) {
  // off-diagonals count twice; the 33 product expands to (a11+a22)(b11+b22)
  return a.q11 * b.q11 + a.q22 * b.q22 + (a.q11 + a.q22) * (b.q11 + b.q22) +
         2.0 * (a.q12 * b.q12 + a.q13 * b.q13 + a.q23 * b.q23);
}

double norm_sq(const QTensor& q) { return frobenius_dot(q, q); }

double qnorm(const QTensor& q) { return std::sqrt(norm_sq(q)); }

double det(const QTensor& q) {
  const double q33 = q.q33();
  return q.q11 * (q.q22 * q33 - q.q23 * q.q23) -
         q.q12 * (q.q12 * q33 - q.q23 * q.q13) +
         q.q13 * (q.q12 * q.q23 - q.q22 * q.q13);
}

double trace_cubed(const QTensor& q) { return 3.0 * det(q); }

double biaxiality(const QTensor& q) {
  const double t2 = norm_sq(q);
  if (t2 < 1e-100) return 0.0;  // includes Q = 0 exactly
  const double t3 = trace_cubed(q);
  const double b = 1.0 - 6.0 * t3 * t3 / (t2 * t2 * t2);
  return std::clamp(b, 0.0, 1.0);
}

QTensor uniaxial(double s, const Vec3& n) {
  if (std::abs(norm(n) - 1.0) > kFrameTol)
    throw FrameError("uniaxial: director is not unit length");
  QTensor q;
  q.q11 = s * (n.x * n.x - 1.0 / 3.0);
  q.q22 = s * (n.y * n.y - 1.0 / 3.0);
  q.q12 = s * n.x * n.y;
  q.q13 = s * n.x * n.z;
  q.q23 = s * n.y * n.z;
  return q;
}

QTensor planar_biaxial(double s, const Vec3& n, const Vec3& m) {
  if (std::abs(norm(n) - 1.0) > kFrameTol || std::abs(norm(m) - 1.0) > kFrameTol)
    throw FrameError("planar_biaxial: frame vector is not unit length");
  if (std::abs(dot(n, m)) > kFrameTol)
    throw FrameError("planar_biaxial: frame vectors are not orthogonal");
  QTensor q;
  q.q11 = s * (n.x * n.x - m.x * m.x);
  q.q22 = s * (n.y * n.y - m.y * m.y);
  q.q12 = s * (n.x * n.y - m.x * m.y);
  q.q13 = s * (n.x * n.z - m.x * m.z);
  q.q23 = s * (n.y * n.z - m.y * m.z);
  return q;
}

QTensor uv_tensor(double u, double v, const Vec3& n1, const Vec3& m, const Vec3& p) {
  QTensor q = planar_biaxial(0.5 * u, n1, m);
  if (std::abs(norm(p) - 1.0) > kFrameTol)
    throw FrameError("uv_tensor: p is not unit length");
  q.q11 += v * (p.x * p.x - 1.0 / 3.0);
  q.q22 += v * (p.y * p.y - 1.0 / 3.0);
  q.q12 += v * p.x * p.y;
  q.q13 += v * p.x * p.z;
  q.q23 += v * p.y * p.z;
  return q;
}

QTensor uv_tensor_polar(double u, double v, double x, double y) {
  const double t = std::atan2(y, x);
  const double c = std::cos(t), s = std::sin(t);
  // assembled directly: (u/2)(n1 n1 - m m) has components (u/2)cos2t etc.,
  // p = z-hat contributes -v/3 on the in-plane diagonal
  QTensor q;
  const double c2 = c * c - s * s, s2 = 2.0 * s * c;
  q.q11 = 0.5 * u * c2 - v / 3.0;
  q.q22 = -0.5 * u * c2 - v / 3.0;
  q.q12 = 0.5 * u * s2;
  q.q13 = 0.0;
  q.q23 = 0.0;
  return q;
}

namespace {

// Eigenvector of (Q - lambda I) from the two most independent rows.
Vec3 null_direction(const QTensor& q, double lambda) {
  const Vec3 r0{q.q11 - lambda, q.q12, q.q13};
  const Vec3 r1{q.q12, q.q22 - lambda, q.q23};
  const Vec3 r2{q.q13, q.q23, q.q33() - lambda};
  const Vec3 c01 = cross(r0, r1), c02 = cross(r0, r2), c12 = cross(r1, r2);
  const double n01 = dot(c01, c01), n02 = dot(c02, c02), n12 = dot(c12, c12);
  if (n01 >= n02 && n01 >= n12) return normalized(c01);
  if (n02 >= n12) return normalized(c02);
  return normalized(c12);
}

}  // namespace

EigenSystem eigen_decompose(const QTensor& q) {
  EigenSystem es;
  const double scale = std::max({std::abs(q.q11), std::abs(q.q22), std::abs(q.q12),
                                 std::abs(q.q13), std::abs(q.q23)});
  if (scale < 1e-300) {
    es.value = {0.0, 0.0, 0.0};
    es.vector = {Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, 0, 1}};
    return es;
  }

  // Characteristic polynomial of a traceless symmetric tensor:
  // lambda^3 - (tr Q^2 / 2) lambda - det Q = 0. Trigonometric roots.
  const double j2 = 0.5 * norm_sq(q);
  const double j3 = det(q);
  const double m = 2.0 * std::sqrt(j2 / 3.0);
  double arg = (j2 > 0.0) ? 4.0 * j3 / (m * m * m) : 0.0;
  arg = std::clamp(arg, -1.0, 1.0);
  const double phi = std::acos(arg) / 3.0;
  std::array<double, 3> lam;
  for (int k = 0; k < 3; ++k)
    lam[k] = m * std::cos(phi - 2.0 * M_PI * k / 3.0);
  std::sort(lam.begin(), lam.end());
  // re-center: the trigonometric roots sum to zero up to roundoff
  const double mean = (lam[0] + lam[1] + lam[2]) / 3.0;
  for (double& l : lam) l -= mean;

  // IMPORTANT: near-degenerate pairs make single null-space extraction
  // ill-conditioned. Extract the best-separated eigenvalue's vector first,
  // then diagonalize exactly in its orthogonal plane.
  const double g0 = std::min(std::abs(lam[0] - lam[1]), std::abs(lam[0] - lam[2]));
  const double g1 = std::min(std::abs(lam[1] - lam[0]), std::abs(lam[1] - lam[2]));
  const double g2 = std::min(std::abs(lam[2] - lam[0]), std::abs(lam[2] - lam[1]));
  int best = 0;
  if (g1 > g0 && g1 >= g2) best = 1;
  else if (g2 > g0 && g2 > g1) best = 2;

  const Vec3 v_best = null_direction(q, lam[best]);

  // orthonormal basis of the complement
  Vec3 a = std::abs(v_best.x) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
  a = normalized(a - dot(a, v_best) * v_best);
  const Vec3 b = cross(v_best, a);

  // project Q into span{a,b} and solve the 2x2 symmetric problem
  auto apply = [&q](const Vec3& w) {
    return Vec3{q.q11 * w.x + q.q12 * w.y + q.q13 * w.z,
                q.q12 * w.x + q.q22 * w.y + q.q23 * w.z,
                q.q13 * w.x + q.q23 * w.y + q.q33() * w.z};
  };
  const Vec3 qa = apply(a), qb = apply(b);
  const double baa = dot(a, qa), bab = dot(a, qb), bbb = dot(b, qb);
  const double theta = 0.5 * std::atan2(2.0 * bab, baa - bbb);
  const double ct = std::cos(theta), st = std::sin(theta);
  const Vec3 e1 = normalized(ct * a + st * b);
  const Vec3 e2 = normalized(-1.0 * st * a + ct * b);
  const double mu1 = baa * ct * ct + 2.0 * bab * st * ct + bbb * st * st;
  const double mu2 = baa * st * st - 2.0 * bab * st * ct + bbb * ct * ct;

  // slot the three pairs back in ascending order of the analytic eigenvalues
  const int o1 = (best + 1) % 3, o2 = (best + 2) % 3;
  es.value = lam;
  es.vector[best] = v_best;
  if ((std::abs(mu1 - lam[o1]) + std::abs(mu2 - lam[o2])) <=
      (std::abs(mu1 - lam[o2]) + std::abs(mu2 - lam[o1]))) {
    es.vector[o1] = e1;
    es.vector[o2] = e2;
  } else {
    es.vector[o1] = e2;
    es.vector[o2] = e1;
  }
  return es;
}

}  // namespace qflow
