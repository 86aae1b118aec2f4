#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace wavedecay {

/// Geometry of a run. Radial3D stores radially symmetric 3-D fields on the
/// half line r >= 0 through the reduction w = r u.
enum class DimMode { Line1D, Plane2D, Radial3D };

/// Physical space dimension n.
constexpr int space_dim(DimMode m) {
  switch (m) {
    case DimMode::Line1D: return 1;
    case DimMode::Plane2D: return 2;
    case DimMode::Radial3D: return 3;
  }
  return 0;
}

/// Number of array axes used to store a field.
constexpr int grid_rank(DimMode m) { return m == DimMode::Plane2D ? 2 : 1; }

std::string_view to_string(DimMode m);
DimMode parse_dim_mode(std::string_view s);

/// A point. Line1D uses x, Plane2D uses (x, y), Radial3D stores r in x.
struct Coord {
  double x = 0.0;
  double y = 0.0;
};

inline double radius(Coord p, DimMode m) {
  switch (m) {
    case DimMode::Line1D: return std::abs(p.x);
    case DimMode::Plane2D: return std::hypot(p.x, p.y);
    case DimMode::Radial3D: return std::abs(p.x);
  }
  return 0.0;
}

/// Uniform node grid. Line1D and Plane2D cover [-extent, extent] per axis,
/// Radial3D covers [0, extent]. `extent` is always an integer multiple of h.
struct Grid {
  DimMode mode = DimMode::Line1D;
  double h = 0.0;
  double extent = 0.0;
  std::size_t n = 0;  // nodes per axis

  std::size_t size() const { return grid_rank(mode) == 2 ? n * n : n; }
  double origin() const { return mode == DimMode::Radial3D ? 0.0 : -extent; }
  double axis(std::size_t i) const { return origin() + static_cast<double>(i) * h; }

  Coord point(std::size_t flat) const {
    if (grid_rank(mode) == 2) return {axis(flat / n), axis(flat % n)};
    return {axis(flat), 0.0};
  }
  double radius_at(std::size_t flat) const { return radius(point(flat), mode); }
};

/// Smallest grid with spacing h whose extent is at least `min_extent`.
Grid make_grid(DimMode mode, double h, double min_extent);

/// Quadrature on a Grid works with "line densities": the integrand itself
/// for Line1D and Plane2D, and r^2 times the integrand for Radial3D (the
/// 4*pi factor is applied by the integrator). Passing r^2-scaled densities
/// avoids dividing the reduced field w by r at the origin.
///
/// Composite trapezoidal rule over the whole grid.
double integrate(const Grid& g, std::span<const double> density);

/// Integral over the closed ball |x| <= R. Rank-1 grids include the partial
/// cell at R by linear interpolation; Plane2D counts nodes inside the disc.
double integrate_ball(const Grid& g, std::span<const double> density, double R);

/// Trapezoid weights (including the 4*pi for Radial3D) such that
/// integrate(g, f) == sum_i w_i f_i.
std::vector<double> quadrature_weights(const Grid& g);

/// Samples `f(Coord)` at every node.
template <class F>
std::vector<double> sample(const Grid& g, F&& f) {
  std::vector<double> out(g.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = f(g.point(i));
  return out;
}

/// Fixed-order Gauss-Legendre rule on [a, b]; exact for polynomials of
/// degree <= 15.
template <class F>
double gauss_legendre(F&& f, double a, double b) {
  static constexpr double nodes[8] = {
      -0.9602898564975363, -0.7966664774136267, -0.5255324099163290, -0.1834346424956498,
      0.1834346424956498,  0.5255324099163290,  0.7966664774136267,  0.9602898564975363};
  static constexpr double weights[8] = {
      0.1012285362903763, 0.2223810344533745, 0.3137066458778873, 0.3626837833783620,
      0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double s = 0.0;
  for (int k = 0; k < 8; ++k) s += weights[k] * f(mid + half * nodes[k]);
  return s * half;
}

}  // namespace wavedecay
