#ifndef MLAFEM_DOMAIN_HPP
#define MLAFEM_DOMAIN_HPP

#include "errors.hpp"
#include "geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace mlafem {

enum class DomainKind { square, l_shape };

/// Polygonal computational domain. Squares are (lo, hi)^2; the L-shape is
/// (-1,1)^2 minus [0,1) x (-1,0].
struct DomainDef {
  DomainKind kind = DomainKind::square;
  double lo = 0.0;
  double hi = 1.0;

  static DomainDef square(double lo, double hi) { return {DomainKind::square, lo, hi}; }
  static DomainDef l_shape() { return {DomainKind::l_shape, -1.0, 1.0}; }

  [[nodiscard]] std::string name() const {
    return kind == DomainKind::square ? "square(" + std::to_string(lo) + "," + std::to_string(hi) + ")" : "l_shape";
  }

  void validate() const {
    if (!(std::isfinite(lo) && std::isfinite(hi) && lo < hi)) {
      throw ConfigurationError("domain " + name() + ": need finite lo < hi");
    }
    if (kind == DomainKind::l_shape && (lo != -1.0 || hi != 1.0)) {
      throw ConfigurationError("l_shape domain is fixed to (-1,1)^2 \\ [0,1)x(-1,0]");
    }
  }

  /// Boundary polygon, counterclockwise.
  [[nodiscard]] std::vector<Point2> polygon() const {
    if (kind == DomainKind::square) return {{lo, lo}, {hi, lo}, {hi, hi}, {lo, hi}};
    return {{-1, -1}, {0, -1}, {0, 0}, {1, 0}, {1, 1}, {-1, 1}};
  }

  [[nodiscard]] double area() const {
    const auto poly = polygon();
    double a2 = 0.0;
    for (std::size_t i = 0; i < poly.size(); ++i) a2 += cross(poly[i], poly[(i + 1) % poly.size()]);
    return 0.5 * a2;
  }

  /// Distance from p to the boundary polygon.
  [[nodiscard]] double boundary_distance(Point2 p) const {
    const auto poly = polygon();
    double best = INFINITY;
    for (std::size_t i = 0; i < poly.size(); ++i) {
      const Point2 a = poly[i];
      const Point2 b = poly[(i + 1) % poly.size()];
      const Vec2 ab = b - a;
      const double t = std::clamp(dot(p - a, ab) / dot(ab, ab), 0.0, 1.0);
      best = std::min(best, distance(p, a + t * ab));
    }
    return best;
  }

  [[nodiscard]] bool on_boundary(Point2 p, double tol = 1e-12) const {
    return boundary_distance(p) <= tol * std::max(1.0, hi - lo);
  }

  /// Closed-domain membership.
  [[nodiscard]] bool contains(Point2 p, double tol = 1e-12) const {
    const bool in_box = p.x >= lo - tol && p.x <= hi + tol && p.y >= lo - tol && p.y <= hi + tol;
    if (kind == DomainKind::square || !in_box) return in_box;
    return !(p.x > tol && p.y < -tol);
  }

  /// The reentrant corner for the L-shape; the square has none.
  [[nodiscard]] Point2 reentrant_corner() const { return {0.0, 0.0}; }
};

} // namespace mlafem

#endif
