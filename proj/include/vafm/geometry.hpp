#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <vector>

#include "vafm/error.hpp"
#include "vafm/rng.hpp"

namespace vafm {

struct Vec3 {
  double x = 0, y = 0, z = 0;

  constexpr double& operator[](int i) noexcept { return i == 0 ? x : (i == 1 ? y : z); }
  constexpr double operator[](int i) const noexcept { return i == 0 ? x : (i == 1 ? y : z); }

  friend constexpr Vec3 operator+(Vec3 a, Vec3 b) noexcept { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend constexpr Vec3 operator-(Vec3 a, Vec3 b) noexcept { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  friend constexpr Vec3 operator*(double s, Vec3 a) noexcept { return {s * a.x, s * a.y, s * a.z}; }
  friend constexpr Vec3 operator*(Vec3 a, double s) noexcept { return s * a; }
  friend constexpr bool operator==(Vec3, Vec3) = default;
};

constexpr double dot(Vec3 a, Vec3 b) noexcept { return a.x * b.x + a.y * b.y + a.z * b.z; }

constexpr Vec3 cross(Vec3 a, Vec3 b) noexcept {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double norm(Vec3 a) noexcept { return std::sqrt(dot(a, a)); }

inline bool is_finite(Vec3 a) noexcept {
  return std::isfinite(a.x) && std::isfinite(a.y) && std::isfinite(a.z);
}

struct BoundingBox {
  Vec3 min{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
           std::numeric_limits<double>::infinity()};
  Vec3 max{-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
           -std::numeric_limits<double>::infinity()};

  bool empty() const noexcept { return min.x > max.x || min.y > max.y || min.z > max.z; }

  void expand(Vec3 p) noexcept {
    for (int a = 0; a < 3; ++a) {
      min[a] = std::min(min[a], p[a]);
      max[a] = std::max(max[a], p[a]);
    }
  }

  Vec3 center() const noexcept { return 0.5 * (min + max); }
  Vec3 extent() const noexcept { return max - min; }

  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

inline BoundingBox bounding_box(std::span<const Vec3> points) noexcept {
  BoundingBox box;
  for (const auto& p : points) box.expand(p);
  return box;
}

using Matrix3 = std::array<std::array<double, 3>, 3>;

inline Vec3 operator*(const Matrix3& m, Vec3 v) noexcept {
  return {m[0][0] * v.x + m[0][1] * v.y + m[0][2] * v.z,
          m[1][0] * v.x + m[1][1] * v.y + m[1][2] * v.z,
          m[2][0] * v.x + m[2][1] * v.y + m[2][2] * v.z};
}

/// Unit quaternion (w, x, y, z) acting on column vectors as v' = q v q*.
class Rotation {
 public:
  constexpr Rotation() noexcept = default;

  /// Normalizes the input; throws on a zero or non-finite quaternion.
  Rotation(double w, double x, double y, double z) {
    const double n = std::sqrt(w * w + x * x + y * y + z * z);
    if (!(n > 0) || !std::isfinite(n)) {
      throw Error(ErrorCode::InvalidArgument, "quaternion must be finite and non-zero");
    }
    w_ = w / n;
    x_ = x / n;
    y_ = y / n;
    z_ = z / n;
  }

  static Rotation identity() noexcept { return {}; }

  static Rotation from_axis_angle(Vec3 axis, double radians) {
    const double n = vafm::norm(axis);
    if (!(n > 0)) throw Error(ErrorCode::InvalidArgument, "rotation axis must be non-zero");
    const double s = std::sin(0.5 * radians) / n;
    return Rotation(std::cos(0.5 * radians), axis.x * s, axis.y * s, axis.z * s);
  }

  double w() const noexcept { return w_; }
  double x() const noexcept { return x_; }
  double y() const noexcept { return y_; }
  double z() const noexcept { return z_; }
  std::array<double, 4> wxyz() const noexcept { return {w_, x_, y_, z_}; }
  double norm() const noexcept { return std::sqrt(w_ * w_ + x_ * x_ + y_ * y_ + z_ * z_); }

  Rotation inverse() const noexcept { return raw(w_, -x_, -y_, -z_); }

  /// Hamilton product: (a * b) applies b first, then a.
  friend Rotation operator*(const Rotation& a, const Rotation& b) noexcept {
    return raw(a.w_ * b.w_ - a.x_ * b.x_ - a.y_ * b.y_ - a.z_ * b.z_,
               a.w_ * b.x_ + a.x_ * b.w_ + a.y_ * b.z_ - a.z_ * b.y_,
               a.w_ * b.y_ - a.x_ * b.z_ + a.y_ * b.w_ + a.z_ * b.x_,
               a.w_ * b.z_ + a.x_ * b.y_ - a.y_ * b.x_ + a.z_ * b.w_);
  }

  Matrix3 matrix() const noexcept {
    const double w = w_, x = x_, y = y_, z = z_;
    return {{{1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)},
             {2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)},
             {2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)}}};
  }

  Vec3 apply(Vec3 v) const noexcept { return matrix() * v; }

 private:
  static Rotation raw(double w, double x, double y, double z) noexcept {
    Rotation r;
    r.w_ = w;
    r.x_ = x;
    r.y_ = y;
    r.z_ = z;
    return r;
  }

  double w_ = 1, x_ = 0, y_ = 0, z_ = 0;
};

/// Maps each point p to center + R (p - center).
inline std::vector<Vec3> rotate_points(std::span<const Vec3> points, const Rotation& r, Vec3 center) {
  const Matrix3 m = r.matrix();
  std::vector<Vec3> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back(center + m * (p - center));
  return out;
}

/// Uniform rotation by Shoemake's subgroup construction: three uniform
/// variates u1, u2, u3 in [0,1) give
///   q = (sqrt(u1) cos 2pi u3, sqrt(1-u1) sin 2pi u2, sqrt(1-u1) cos 2pi u2, sqrt(u1) sin 2pi u3)
/// in (w, x, y, z) order. The variates are drawn in the order u1, u2, u3.
inline Rotation sample_rotation(Rng& rng) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  const double u1 = rng.uniform();
  const double u2 = rng.uniform();
  const double u3 = rng.uniform();
  const double a = std::sqrt(1.0 - u1);
  const double b = std::sqrt(u1);
  return Rotation(b * std::cos(two_pi * u3), a * std::sin(two_pi * u2), a * std::cos(two_pi * u2),
                  b * std::sin(two_pi * u3));
}

}  // namespace vafm
