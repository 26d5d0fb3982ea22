#include "larkit/geom.hpp"

#include <algorithm>
#include <stdexcept>

namespace larkit {

namespace {

// Jacobi eigensolver for a symmetric 3x3 matrix; returns eigenvalues
// ascending with matching column eigenvectors.
void eig_sym3(double a[3][3], double eval[3], double evec[3][3]) {
  double v[3][3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = std::abs(a[0][1]) + std::abs(a[0][2]) + std::abs(a[1][2]);
    if (off < 1e-300) break;
    for (int p = 0; p < 2; ++p) {
      for (int q = p + 1; q < 3; ++q) {
        if (std::abs(a[p][q]) < 1e-300) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < 3; ++k) {
          const double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (int k = 0; k < 3; ++k) {
          const double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
        for (int k = 0; k < 3; ++k) {
          const double vkp = v[k][p], vkq = v[k][q];
          v[k][p] = c * vkp - s * vkq;
          v[k][q] = s * vkp + c * vkq;
        }
      }
    }
  }
  int order[3] = {0, 1, 2};
  double d[3] = {a[0][0], a[1][1], a[2][2]};
  std::sort(order, order + 3, [&](int x, int y) { return d[x] < d[y]; });
  for (int i = 0; i < 3; ++i) {
    eval[i] = d[order[i]];
    for (int k = 0; k < 3; ++k) evec[k][i] = v[k][order[i]];
  }
}

}  // namespace

PlaneFrame fit_plane(const std::vector<Vec3>& points) {
  if (points.size() < 3) throw std::invalid_argument("fit_plane: < 3 points");
  Vec3 c{0, 0, 0};
  for (const auto& p : points) c = c + p;
  c = (1.0 / static_cast<double>(points.size())) * c;
  double cov[3][3] = {};
  for (const auto& p : points) {
    const Vec3 d = p - c;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) cov[i][j] += d[i] * d[j];
  }
  double eval[3], evec[3][3];
  eig_sym3(cov, eval, evec);
  // Smallest-variance direction is the normal; the two larger ones must
  // be nondegenerate (collinear input has two near-zero eigenvalues).
  if (eval[1] <= 1e-24 * std::max(1.0, eval[2]))
    throw std::invalid_argument("fit_plane: degenerate (collinear) points");
  Vec3 n{evec[0][0], evec[1][0], evec[2][0]};
  n = normalized(n);
  // Deterministic in-plane axes from the smallest normal component.
  int k = 0;
  if (std::abs(n[1]) < std::abs(n[k])) k = 1;
  if (std::abs(n[2]) < std::abs(n[k])) k = 2;
  Vec3 axis{0, 0, 0};
  axis[k] = 1.0;
  PlaneFrame f;
  f.origin = c;
  f.n = n;
  f.u = normalized(axis - dot(axis, n) * n);
  f.v = cross(n, f.u);
  return f;
}

Vec3 newell_normal(const std::vector<Vec3>& loop) {
  Vec3 n{0, 0, 0};
  const size_t m = loop.size();
  for (size_t i = 0; i < m; ++i) {
    const Vec3& a = loop[i];
    const Vec3& b = loop[(i + 1) % m];
    n[0] += (a[1] - b[1]) * (a[2] + b[2]);
    n[1] += (a[2] - b[2]) * (a[0] + b[0]);
    n[2] += (a[0] - b[0]) * (a[1] + b[1]);
  }
  return {0.5 * n[0], 0.5 * n[1], 0.5 * n[2]};
}

double polygon_area(const std::vector<Vec2>& loop) {
  double a = 0;
  const size_t m = loop.size();
  for (size_t i = 0; i < m; ++i) {
    const Vec2& p = loop[i];
    const Vec2& q = loop[(i + 1) % m];
    a += p[0] * q[1] - q[0] * p[1];
  }
  return 0.5 * a;
}

PointClass classify_point(const Vec2& p,
                          const std::vector<std::vector<Vec2>>& loops,
                          double eps) {
  bool inside = false;
  for (const auto& loop : loops) {
    const size_t m = loop.size();
    for (size_t i = 0; i < m; ++i) {
      const Vec2& a = loop[i];
      const Vec2& b = loop[(i + 1) % m];
      // Distance to segment ab.
      const Vec2 ab = b - a;
      const Vec2 ap = p - a;
      const double len2 = dot2(ab, ab);
      const double t =
          len2 > 0 ? std::clamp(dot2(ap, ab) / len2, 0.0, 1.0) : 0.0;
      const Vec2 q{a[0] + t * ab[0], a[1] + t * ab[1]};
      if (norm2d(p - q) <= eps) return PointClass::on_boundary;
      // Crossing parity for a ray toward +x.
      if ((a[1] > p[1]) != (b[1] > p[1])) {
        const double x = a[0] + (p[1] - a[1]) / (b[1] - a[1]) * (b[0] - a[0]);
        if (x > p[0]) inside = !inside;
      }
    }
  }
  return inside ? PointClass::inside : PointClass::outside;
}

namespace {

bool point_in_triangle(const Vec2& p, const Vec2& a, const Vec2& b,
                       const Vec2& c) {
  const double d1 = cross2(b - a, p - a);
  const double d2 = cross2(c - b, p - b);
  const double d3 = cross2(a - c, p - c);
  const bool has_neg = d1 < 0 || d2 < 0 || d3 < 0;
  const bool has_pos = d1 > 0 || d2 > 0 || d3 > 0;
  return !(has_neg && has_pos);
}

}  // namespace

Vec2 interior_point(const std::vector<Vec2>& loop) {
  Vec2 centroid{0, 0};
  for (const auto& p : loop) {
    centroid[0] += p[0];
    centroid[1] += p[1];
  }
  centroid[0] /= static_cast<double>(loop.size());
  centroid[1] /= static_cast<double>(loop.size());
  if (classify_point(centroid, {loop}, 0.0) == PointClass::inside)
    return centroid;

  // Ear clipping fallback for non-convex loops.
  std::vector<Vec2> poly = loop;
  const double orient = polygon_area(poly);
  while (poly.size() > 3) {
    const size_t m = poly.size();
    bool clipped = false;
    for (size_t i = 0; i < m; ++i) {
      const Vec2& a = poly[(i + m - 1) % m];
      const Vec2& b = poly[i];
      const Vec2& c = poly[(i + 1) % m];
      const double turn = cross2(b - a, c - b);
      if ((orient > 0 && turn <= 0) || (orient < 0 && turn >= 0)) continue;
      bool ear = true;
      for (size_t j = 0; j < m; ++j) {
        if (j == i || j == (i + m - 1) % m || j == (i + 1) % m) continue;
        if (point_in_triangle(poly[j], a, b, c)) {
          ear = false;
          break;
        }
      }
      if (!ear) continue;
      const Vec2 q{(a[0] + b[0] + c[0]) / 3.0, (a[1] + b[1] + c[1]) / 3.0};
      if (classify_point(q, {loop}, 0.0) == PointClass::inside) return q;
      poly.erase(poly.begin() + static_cast<long>(i));
      clipped = true;
      break;
    }
    if (!clipped) break;  // numerically stuck, fall through
  }
  if (poly.size() == 3) {
    return {(poly[0][0] + poly[1][0] + poly[2][0]) / 3.0,
            (poly[0][1] + poly[1][1] + poly[2][1]) / 3.0};
  }
  return centroid;
}

Vec3 rigid_transform(const Vec3& p, double rx, double ry, double rz,
                     const Vec3& t) {
  const double cx = std::cos(rx), sx = std::sin(rx);
  const double cy = std::cos(ry), sy = std::sin(ry);
  const double cz = std::cos(rz), sz = std::sin(rz);
  // X rotation first, then Y, then Z.
  Vec3 q{p[0], cx * p[1] - sx * p[2], sx * p[1] + cx * p[2]};
  q = {cy * q[0] + sy * q[2], q[1], -sy * q[0] + cy * q[2]};
  q = {cz * q[0] - sz * q[1], sz * q[0] + cz * q[1], q[2]};
  return q + t;
}

}  // namespace larkit
