#pragma once
#include <array>
#include <cmath>

#include "qflow/errors.hpp"

namespace qflow {

struct Vec3 {
  double x = 0, y = 0, z = 0;
  double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
};

inline Vec3 operator+(const Vec3& a, const Vec3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
inline Vec3 operator-(const Vec3& a, const Vec3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
inline Vec3 operator*(double s, const Vec3& a) { return {s * a.x, s * a.y, s * a.z}; }
inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
inline Vec3 normalized(const Vec3& a) {
  double n = norm(a);
  return {a.x / n, a.y / n, a.z / n};
}

/// Symmetric traceless second-order tensor. Five stored components in the
/// order (11, 22, 12, 13, 23); the 33 entry is always -(q11+q22).
struct QTensor {
  double q11 = 0, q22 = 0, q12 = 0, q13 = 0, q23 = 0;

  double q33() const { return -q11 - q22; }

  /// Full 3x3 element access, i,j in 0..2.
  double operator()(int i, int j) const;

  /// Component slot access, k in 0..4 following the storage order.
  double comp(int k) const {
    switch (k) {
      case 0: return q11;
      case 1: return q22;
      case 2: return q12;
      case 3: return q13;
      default: return q23;
    }
  }
  double& comp(int k) {
    switch (k) {
      case 0: return q11;
      case 1: return q22;
      case 2: return q12;
      case 3: return q13;
      default: return q23;
    }
  }

  QTensor& operator+=(const QTensor& o) {
    q11 += o.q11; q22 += o.q22; q12 += o.q12; q13 += o.q13; q23 += o.q23;
    return *this;
  }
  QTensor& operator-=(const QTensor& o) {
    q11 -= o.q11; q22 -= o.q22; q12 -= o.q12; q13 -= o.q13; q23 -= o.q23;
    return *this;
  }
  QTensor& operator*=(double s) {
    q11 *= s; q22 *= s; q12 *= s; q13 *= s; q23 *= s;
    return *this;
  }
};

inline QTensor operator+(QTensor a, const QTensor& b) { return a += b; }
inline QTensor operator-(QTensor a, const QTensor& b) { return a -= b; }
inline QTensor operator*(double s, QTensor a) { return a *= s; }
inline QTensor operator*(QTensor a, double s) { return a *= s; }

/// sum_ij a_ij b_ij over the full 3x3 matrices.
double frobenius_dot(const QTensor& a, const QTensor& b);

/// tr Q^2 = sum_ij q_ij^2.
double norm_sq(const QTensor& q);
double qnorm(const QTensor& q);

/// tr Q^3. Computed as 3 det Q (valid for traceless Q).
double trace_cubed(const QTensor& q);
double det(const QTensor& q);

/// Biaxiality measure 1 - 6 (tr Q^3)^2 / (tr Q^2)^3, clamped to [0,1].
/// Zero for Q = 0 and for any uniaxial tensor.
double biaxiality(const QTensor& q);

/// s (n x n - I/3). Throws FrameError if | |n|-1 | > 1e-9.
QTensor uniaxial(double s, const Vec3& n);

/// s (n x n - m x m). Throws FrameError if n, m are not unit and mutually
/// orthogonal within 1e-9.
QTensor planar_biaxial(double s, const Vec3& n, const Vec3& m);

/// (u/2)(n1 x n1 - m x m) + v (p x p - I/3) on an explicit orthonormal frame.
QTensor uv_tensor(double u, double v, const Vec3& n1, const Vec3& m, const Vec3& p);

/// uv_tensor on the polar frame at (x, y): n1 = (cos t, sin t, 0),
/// m = (-sin t, cos t, 0), p = z-hat, t = atan2(y, x) (atan2(0,0) = 0).
QTensor uv_tensor_polar(double u, double v, double x, double y);

struct EigenSystem {
  std::array<double, 3> value;  ///< ascending
  std::array<Vec3, 3> vector;   ///< orthonormal, matching order
};

/// Closed-form eigen-decomposition of a symmetric traceless 3x3 tensor.
/// Eigenvalues sum to zero within 1e-10 |Q|; residual |Q v - lambda v| is
/// below 1e-8 max(1,|Q|) per pair.
EigenSystem eigen_decompose(const QTensor& q);

}  // namespace qflow
