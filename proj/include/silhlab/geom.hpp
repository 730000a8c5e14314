#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <variant>

namespace silhlab {

inline constexpr double kPi = 3.14159265358979323846;

/// Default tolerance for geometric comparisons.
inline constexpr double kGeomTol = 1e-9;

/// Tolerance for front/back classification of a face against a viewpoint.
inline constexpr double kClassifyTol = 1e-12;

struct Vec3 {
  double x = 0, y = 0, z = 0;
};

inline constexpr Vec3 operator+(const Vec3& a, const Vec3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
inline constexpr Vec3 operator-(const Vec3& a, const Vec3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
inline constexpr Vec3 operator-(const Vec3& a) { return {-a.x, -a.y, -a.z}; }
inline constexpr Vec3 operator*(double s, const Vec3& a) { return {s * a.x, s * a.y, s * a.z}; }
inline constexpr Vec3 operator*(const Vec3& a, double s) { return s * a; }
inline constexpr Vec3 operator/(const Vec3& a, double s) { return {a.x / s, a.y / s, a.z / s}; }

inline constexpr double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

inline constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline constexpr double norm2(const Vec3& a) { return dot(a, a); }
inline double norm(const Vec3& a) { return std::sqrt(norm2(a)); }

inline bool is_finite(const Vec3& a) {
  return std::isfinite(a.x) && std::isfinite(a.y) && std::isfinite(a.z);
}

/// Unit vector; the constructor normalizes, so the invariant |v| = 1 (within
/// 1e-12) holds for every instance.
class Direction {
 public:
  explicit Direction(const Vec3& v) {
    if (!is_finite(v)) throw std::invalid_argument("Direction: non-finite vector");
    double n = norm(v);
    if (n == 0.0) throw std::invalid_argument("Direction: zero vector");
    v_ = v / n;
  }
  const Vec3& vec() const { return v_; }
  operator const Vec3&() const { return v_; }

 private:
  Vec3 v_;
};

/// Angle in [0, pi]. The atan2 form stays well-conditioned near 0 and pi,
/// where acos of the dot product loses half the significant digits.
inline double angle_between(const Direction& u, const Direction& v) {
  return std::atan2(norm(cross(u.vec(), v.vec())), dot(u.vec(), v.vec()));
}

/// Either a direction (viewpoint at infinity) or a finite point in space.
class Viewpoint {
 public:
  static Viewpoint at_infinity(const Direction& d) { return Viewpoint(Repr{d}); }
  static Viewpoint finite(const Vec3& p) {
    if (!is_finite(p)) throw std::invalid_argument("Viewpoint: non-finite point");
    return Viewpoint(Repr{p});
  }
  bool is_at_infinity() const { return std::holds_alternative<Direction>(v_); }
  const Direction& direction() const { return std::get<Direction>(v_); }
  const Vec3& point() const { return std::get<Vec3>(v_); }

 private:
  using Repr = std::variant<Direction, Vec3>;
  explicit Viewpoint(Repr v) : v_(std::move(v)) {}
  Repr v_;
};

/// Right-handed orthonormal frame {u, v, d}: cross(u, v) = d. The helper axis
/// is the coordinate axis least aligned with d (first of x, y, z on ties), so
/// the frame is a deterministic function of d.
inline std::pair<Direction, Direction> orthonormal_frame(const Direction& d) {
  const Vec3& n = d.vec();
  double ax = std::fabs(n.x), ay = std::fabs(n.y), az = std::fabs(n.z);
  Vec3 h{1, 0, 0};
  if (ay < ax && ay <= az)
    h = {0, 1, 0};
  else if (az < ax && az < ay)
    h = {0, 0, 1};
  Direction u(cross(h, n));
  Direction v(cross(n, u.vec()));
  return {u, v};
}

}  // namespace silhlab
