#include "wavedecay/grid.hpp"

#include <algorithm>
#include <numbers>

#include "wavedecay/error.hpp"

namespace wavedecay {

std::string_view to_string(DimMode m) {
  switch (m) {
    case DimMode::Line1D: return "line-1d";
    case DimMode::Plane2D: return "plane-2d";
    case DimMode::Radial3D: return "radial-3d";
  }
  return "?";
}

DimMode parse_dim_mode(std::string_view s) {
  if (s == "line-1d" || s == "1d") return DimMode::Line1D;
  if (s == "plane-2d" || s == "2d") return DimMode::Plane2D;
  if (s == "radial-3d" || s == "3d") return DimMode::Radial3D;
  throw PreconditionError("unknown dim_mode '" + std::string(s) +
                          "' (expected line-1d, plane-2d or radial-3d)");
}

Grid make_grid(DimMode mode, double h, double min_extent) {
  if (!(h > 0.0)) throw PreconditionError("grid spacing h must be positive");
  if (!(min_extent > 0.0)) throw PreconditionError("grid extent must be positive");
  Grid g;
  g.mode = mode;
  g.h = h;
  const auto cells = static_cast<std::size_t>(std::ceil(min_extent / h - 1e-9));
  g.extent = static_cast<double>(cells) * h;
  g.n = mode == DimMode::Radial3D ? cells + 1 : 2 * cells + 1;
  return g;
}

namespace {

std::vector<double> axis_weights(const Grid& g) {
  std::vector<double> w(g.n, g.h);
  w.front() *= 0.5;
  w.back() *= 0.5;
  return w;
}

// Integral of a piecewise-linear interpolant of f over [lo, hi] on a rank-1 grid.
double trapezoid_segment(const Grid& g, std::span<const double> f, double lo, double hi) {
  lo = std::max(lo, g.axis(0));
  hi = std::min(hi, g.axis(g.n - 1));
  if (hi <= lo) return 0.0;
  const double o = g.origin();
  const double eps = 1e-9;
  auto interp = [&](double x) {
    const double s = (x - o) / g.h;
    auto i = static_cast<std::size_t>(std::clamp(std::floor(s), 0.0, double(g.n - 2)));
    const double frac = s - double(i);
    return f[i] + (f[i + 1] - f[i]) * frac;
  };
  const auto first = static_cast<std::size_t>(std::ceil((lo - o) / g.h - eps));
  const auto last = static_cast<std::size_t>(std::floor((hi - o) / g.h + eps));
  if (first > last) return 0.5 * (hi - lo) * (interp(lo) + interp(hi));
  double s = 0.0;
  for (std::size_t i = first; i < last; ++i) s += 0.5 * g.h * (f[i] + f[i + 1]);
  const double xf = g.axis(first);
  const double xl = g.axis(last);
  if (xf - lo > eps * g.h) s += 0.5 * (xf - lo) * (interp(lo) + f[first]);
  if (hi - xl > eps * g.h) s += 0.5 * (hi - xl) * (f[last] + interp(hi));
  return s;
}

}  // namespace

std::vector<double> quadrature_weights(const Grid& g) {
  const auto aw = axis_weights(g);
  if (grid_rank(g.mode) == 2) {
    std::vector<double> w(g.size());
    for (std::size_t i = 0; i < g.n; ++i)
      for (std::size_t j = 0; j < g.n; ++j) w[i * g.n + j] = aw[i] * aw[j];
    return w;
  }
  if (g.mode == DimMode::Radial3D) {
    std::vector<double> w = aw;
    for (double& x : w) x *= 4.0 * std::numbers::pi;
    return w;
  }
  return aw;
}

double integrate(const Grid& g, std::span<const double> density) {
  if (grid_rank(g.mode) == 2) {
    const auto aw = axis_weights(g);
    double s = 0.0;
    for (std::size_t i = 0; i < g.n; ++i) {
      double row = 0.0;
      for (std::size_t j = 0; j < g.n; ++j) row += aw[j] * density[i * g.n + j];
      s += aw[i] * row;
    }
    return s;
  }
  return trapezoid_segment(g, density, g.axis(0), g.axis(g.n - 1)) *
         (g.mode == DimMode::Radial3D ? 4.0 * std::numbers::pi : 1.0);
}

double integrate_ball(const Grid& g, std::span<const double> density, double R) {
  switch (g.mode) {
    case DimMode::Line1D: return trapezoid_segment(g, density, -R, R);
    case DimMode::Radial3D: return 4.0 * std::numbers::pi * trapezoid_segment(g, density, 0.0, R);
    case DimMode::Plane2D: {
      const double cell = g.h * g.h;
      const double R2 = R * R * (1.0 + 1e-12);
      double s = 0.0;
      for (std::size_t i = 0; i < g.n; ++i) {
        const double x = g.axis(i);
        if (x * x > R2) continue;
        for (std::size_t j = 0; j < g.n; ++j) {
          const double y = g.axis(j);
          if (x * x + y * y <= R2) s += density[i * g.n + j];
        }
      }
      return s * cell;
    }
  }
  return 0.0;
}

}  // namespace wavedecay
