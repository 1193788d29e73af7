#ifndef MLAFEM_GEOMETRY_HPP
#define MLAFEM_GEOMETRY_HPP

#include <array>
#include <cmath>

namespace mlafem {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend constexpr Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Point2 operator*(double s, Point2 a) { return {s * a.x, s * a.y}; }
  friend constexpr bool operator==(Point2, Point2) = default;
};

using Vec2 = Point2;

constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline double distance(Point2 a, Point2 b) { return norm(b - a); }
constexpr Point2 midpoint(Point2 a, Point2 b) { return {0.5 * (a.x + b.x), 0.5 * (a.y + b.y)}; }

/// Twice the signed area of (a, b, c); positive for counterclockwise order.
constexpr double signed_area2(Point2 a, Point2 b, Point2 c) { return cross(b - a, c - a); }

/// Symmetric 2x2 matrix [[xx, xy], [xy, yy]].
struct SymMat2 {
  double xx = 0.0;
  double xy = 0.0;
  double yy = 0.0;

  static constexpr SymMat2 identity(double s = 1.0) { return {s, 0.0, s}; }

  friend constexpr Vec2 operator*(const SymMat2& m, Vec2 v) {
    return {m.xx * v.x + m.xy * v.y, m.xy * v.x + m.yy * v.y};
  }
  friend constexpr SymMat2 operator+(const SymMat2& a, const SymMat2& b) {
    return {a.xx + b.xx, a.xy + b.xy, a.yy + b.yy};
  }
  friend constexpr SymMat2 operator*(double s, const SymMat2& a) { return {s * a.xx, s * a.xy, s * a.yy}; }

  /// Smallest eigenvalue.
  [[nodiscard]] double min_eigenvalue() const {
    const double mean = 0.5 * (xx + yy);
    const double half_gap = std::hypot(0.5 * (xx - yy), xy);
    return mean - half_gap;
  }
};

/// Barycentric coordinates of p with respect to triangle (a, b, c).
inline std::array<double, 3> barycentric(Point2 p, Point2 a, Point2 b, Point2 c) {
  const double total = signed_area2(a, b, c);
  return {signed_area2(p, b, c) / total, signed_area2(a, p, c) / total, signed_area2(a, b, p) / total};
}

} // namespace mlafem

#endif
