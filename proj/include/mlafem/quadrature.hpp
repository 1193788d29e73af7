#ifndef MLAFEM_QUADRATURE_HPP
#define MLAFEM_QUADRATURE_HPP

#include <array>
#include <cmath>
#include <span>

namespace mlafem::quadrature {

/// Point in barycentric coordinates with a weight relative to the element area.
struct TrianglePoint {
  std::array<double, 3> bary;
  double weight;
};

/// Edge-midpoint rule, exact for quadratics.
inline constexpr std::array<TrianglePoint, 3> midpoint_rule{{
    {{0.0, 0.5, 0.5}, 1.0 / 3.0},
    {{0.5, 0.0, 0.5}, 1.0 / 3.0},
    {{0.5, 0.5, 0.0}, 1.0 / 3.0},
}};

namespace detail {
inline constexpr double a4 = 0.445948490915965;
inline constexpr double w4a = 0.223381589678011;
inline constexpr double b4 = 0.091576213509771;
inline constexpr double w4b = 0.109951743655322;
} // namespace detail

/// Six-point Dunavant rule, exact for polynomials of degree 4.
inline constexpr std::array<TrianglePoint, 6> degree4_rule{{
    {{detail::a4, detail::a4, 1 - 2 * detail::a4}, detail::w4a},
    {{detail::a4, 1 - 2 * detail::a4, detail::a4}, detail::w4a},
    {{1 - 2 * detail::a4, detail::a4, detail::a4}, detail::w4a},
    {{detail::b4, detail::b4, 1 - 2 * detail::b4}, detail::w4b},
    {{detail::b4, 1 - 2 * detail::b4, detail::b4}, detail::w4b},
    {{1 - 2 * detail::b4, detail::b4, detail::b4}, detail::w4b},
}};

/// Point on [0,1] with weight relative to the segment length.
struct LinePoint {
  double t;
  double weight;
};

/// Two-point Gauss-Legendre on [0,1], exact for cubics.
inline const std::array<LinePoint, 2> gauss2_line{{
    {0.5 - 0.5 / std::sqrt(3.0), 0.5},
    {0.5 + 0.5 / std::sqrt(3.0), 0.5},
}};

} // namespace mlafem::quadrature

#endif
