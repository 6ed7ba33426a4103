#pragma once

// Dense 2x2 tensor and 2-vector algebra. Everything here is a plain value
// type; all functions are pure.

#include <cmath>
#include <ostream>

#include "sla/errors.hpp"

namespace sla {

inline constexpr double kSingularEpsilon = 1e-14;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2& operator+=(const Vec2& o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  constexpr Vec2& operator-=(const Vec2& o) {
    x -= o.x;
    y -= o.y;
    return *this;
  }
  constexpr Vec2& operator*=(double s) {
    x *= s;
    y *= s;
    return *this;
  }
  friend constexpr bool operator==(const Vec2&, const Vec2&) = default;
};

constexpr Vec2 operator+(Vec2 a, const Vec2& b) { return a += b; }
constexpr Vec2 operator-(Vec2 a, const Vec2& b) { return a -= b; }
constexpr Vec2 operator-(const Vec2& a) { return {-a.x, -a.y}; }
constexpr Vec2 operator*(double s, Vec2 a) { return a *= s; }
constexpr Vec2 operator*(Vec2 a, double s) { return a *= s; }

constexpr double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
/// z-component of the 3D cross product.
constexpr double cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }
inline double norm(const Vec2& a) { return std::hypot(a.x, a.y); }

/// Second-order tensor in 2D, row-major: [[a11, a12], [a21, a22]].
struct Tensor2 {
  double a11 = 0.0;
  double a12 = 0.0;
  double a21 = 0.0;
  double a22 = 0.0;

  static constexpr Tensor2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
  static constexpr Tensor2 zero() { return {}; }
  static constexpr Tensor2 diag(double d1, double d2) { return {d1, 0.0, 0.0, d2}; }

  constexpr Tensor2& operator+=(const Tensor2& o) {
    a11 += o.a11;
    a12 += o.a12;
    a21 += o.a21;
    a22 += o.a22;
    return *this;
  }
  constexpr Tensor2& operator-=(const Tensor2& o) {
    a11 -= o.a11;
    a12 -= o.a12;
    a21 -= o.a21;
    a22 -= o.a22;
    return *this;
  }
  constexpr Tensor2& operator*=(double s) {
    a11 *= s;
    a12 *= s;
    a21 *= s;
    a22 *= s;
    return *this;
  }
  friend constexpr bool operator==(const Tensor2&, const Tensor2&) = default;
};

constexpr Tensor2 operator+(Tensor2 a, const Tensor2& b) { return a += b; }
constexpr Tensor2 operator-(Tensor2 a, const Tensor2& b) { return a -= b; }
constexpr Tensor2 operator-(const Tensor2& a) { return {-a.a11, -a.a12, -a.a21, -a.a22}; }
constexpr Tensor2 operator*(double s, Tensor2 a) { return a *= s; }
constexpr Tensor2 operator*(Tensor2 a, double s) { return a *= s; }

constexpr Tensor2 matmul(const Tensor2& a, const Tensor2& b) {
  return {a.a11 * b.a11 + a.a12 * b.a21, a.a11 * b.a12 + a.a12 * b.a22,
          a.a21 * b.a11 + a.a22 * b.a21, a.a21 * b.a12 + a.a22 * b.a22};
}
constexpr Tensor2 operator*(const Tensor2& a, const Tensor2& b) { return matmul(a, b); }

constexpr Vec2 operator*(const Tensor2& a, const Vec2& v) {
  return {a.a11 * v.x + a.a12 * v.y, a.a21 * v.x + a.a22 * v.y};
}

constexpr double det(const Tensor2& a) { return a.a11 * a.a22 - a.a12 * a.a21; }
constexpr double trace(const Tensor2& a) { return a.a11 + a.a22; }
constexpr Tensor2 transpose(const Tensor2& a) { return {a.a11, a.a21, a.a12, a.a22}; }
constexpr Tensor2 sym(const Tensor2& a) {
  const double off = 0.5 * (a.a12 + a.a21);
  return {a.a11, off, off, a.a22};
}

/// A . B = tr(A B^T).
constexpr double frobenius_inner(const Tensor2& a, const Tensor2& b) {
  return a.a11 * b.a11 + a.a12 * b.a12 + a.a21 * b.a21 + a.a22 * b.a22;
}

inline double frobenius_norm(const Tensor2& a) { return std::sqrt(frobenius_inner(a, a)); }

/// a (x) b, i.e. (a b^T).
constexpr Tensor2 outer(const Vec2& a, const Vec2& b) {
  return {a.x * b.x, a.x * b.y, a.y * b.x, a.y * b.y};
}

inline Tensor2 inverse(const Tensor2& a, double epsilon = kSingularEpsilon) {
  const double d = det(a);
  if (!(std::abs(d) > epsilon)) {
    throw SingularTensor("tensor is singular (det = " + std::to_string(d) + ")");
  }
  const double inv = 1.0 / d;
  return {a.a22 * inv, -a.a12 * inv, -a.a21 * inv, a.a11 * inv};
}

inline bool is_finite(const Tensor2& a) {
  return std::isfinite(a.a11) && std::isfinite(a.a12) && std::isfinite(a.a21) &&
         std::isfinite(a.a22);
}
inline bool is_finite(const Vec2& v) { return std::isfinite(v.x) && std::isfinite(v.y); }

inline std::ostream& operator<<(std::ostream& os, const Tensor2& a) {
  return os << "[[" << a.a11 << ", " << a.a12 << "], [" << a.a21 << ", " << a.a22 << "]]";
}
inline std::ostream& operator<<(std::ostream& os, const Vec2& v) {
  return os << "(" << v.x << ", " << v.y << ")";
}

}  // namespace sla
