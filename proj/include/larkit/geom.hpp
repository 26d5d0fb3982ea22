#pragma once

#include <array>
#include <cmath>
#include <vector>

namespace larkit {

using Vec2 = std::array<double, 2>;
using Vec3 = std::array<double, 3>;

inline Vec3 operator+(const Vec3& a, const Vec3& b) {
  return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}
inline Vec3 operator-(const Vec3& a, const Vec3& b) {
  return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}
inline Vec3 operator*(double s, const Vec3& a) {
  return {s * a[0], s * a[1], s * a[2]};
}
inline double dot(const Vec3& a, const Vec3& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}
inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
          a[0] * b[1] - a[1] * b[0]};
}
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
inline Vec3 normalized(const Vec3& a) {
  const double n = norm(a);
  return n > 0 ? (1.0 / n) * a : a;
}
inline double det3(const Vec3& a, const Vec3& b, const Vec3& c) {
  return dot(a, cross(b, c));
}

inline Vec2 operator-(const Vec2& a, const Vec2& b) {
  return {a[0] - b[0], a[1] - b[1]};
}
inline double cross2(const Vec2& a, const Vec2& b) {
  return a[0] * b[1] - a[1] * b[0];
}
inline double dot2(const Vec2& a, const Vec2& b) {
  return a[0] * b[0] + a[1] * b[1];
}
inline double norm2d(const Vec2& a) { return std::sqrt(dot2(a, a)); }

// Rigid frame mapping a supporting plane to z=0.
struct PlaneFrame {
  Vec3 origin;            // point on the plane
  Vec3 u, v, n;           // orthonormal, n = plane normal
  Vec2 to_plane(const Vec3& p) const {
    const Vec3 d = p - origin;
    return {dot(d, u), dot(d, v)};
  }
  double height(const Vec3& p) const { return dot(p - origin, n); }
  Vec3 from_plane(const Vec2& q) const {
    return origin + q[0] * u + q[1] * v;
  }
};

// Total-least-squares plane through the given points. Throws on
// (near-)collinear input.
PlaneFrame fit_plane(const std::vector<Vec3>& points);

// Newell normal of a closed 3D loop (area-weighted, not normalized).
Vec3 newell_normal(const std::vector<Vec3>& loop);

// Signed area of a closed 2D polygon loop.
double polygon_area(const std::vector<Vec2>& loop);

enum class PointClass { inside, outside, on_boundary };

// Crossing-parity classification of a point against a set of closed
// loops (holes included), with on-boundary detection within eps.
PointClass classify_point(const Vec2& p,
                          const std::vector<std::vector<Vec2>>& loops,
                          double eps);

// A point strictly inside the polygon described by the loop (centroid
// when interior, otherwise an ear centroid). Single loop, no holes.
Vec2 interior_point(const std::vector<Vec2>& loop);

// Rz(rz) * Rx(rx) rotation followed by translation.
Vec3 rigid_transform(const Vec3& p, double rx, double ry, double rz,
                     const Vec3& t);

}  // namespace larkit
