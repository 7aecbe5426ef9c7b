#pragma once

#include <array>
#include <cmath>

namespace qlb {

// Coordinate triple for momenta and positions (program units).
struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr Vec3() = default;
  constexpr Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

  constexpr Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  constexpr Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  constexpr Vec3 operator-() const { return {-x, -y, -z}; }
  constexpr Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  constexpr Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
  Vec3& operator+=(const Vec3& o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }

  constexpr double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  constexpr double norm2() const { return dot(*this); }
  double norm() const { return std::sqrt(norm2()); }
};

inline constexpr Vec3 operator*(double s, const Vec3& v) { return v * s; }

inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

// Two unit vectors spanning the plane perpendicular to q (q != 0).
inline std::array<Vec3, 2> perpendicular_basis(const Vec3& q) {
  const Vec3 qh = q / q.norm();
  // pick the axis least aligned with q
  Vec3 seed = std::abs(qh.x) <= std::abs(qh.y)
                  ? (std::abs(qh.x) <= std::abs(qh.z) ? Vec3{1, 0, 0} : Vec3{0, 0, 1})
                  : (std::abs(qh.y) <= std::abs(qh.z) ? Vec3{0, 1, 0} : Vec3{0, 0, 1});
  Vec3 e1 = cross(qh, seed);
  e1 = e1 / e1.norm();
  Vec3 e2 = cross(qh, e1);
  return {e1, e2};
}

}  // namespace qlb
