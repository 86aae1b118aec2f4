#include <doctest.h>

#include <cmath>
#include <numbers>

#include "wavedecay/error.hpp"
#include "wavedecay/grid.hpp"

using namespace wavedecay;
using doctest::Approx;

TEST_SUITE("grid") {
  TEST_CASE("make_grid covers the requested extent with a whole number of cells") {
    const Grid g = make_grid(DimMode::Line1D, 0.1, 2.05);
    CHECK(g.extent >= 2.05);
    CHECK(g.extent < 2.05 + 0.1 + 1e-12);
    CHECK(g.n == std::size_t(std::lround(2 * g.extent / g.h)) + 1);
    CHECK(g.axis(0) == Approx(-g.extent));
    CHECK(g.axis(g.n - 1) == Approx(g.extent));

    const Grid r = make_grid(DimMode::Radial3D, 0.1, 2.0);
    CHECK(r.origin() == 0.0);
    CHECK(r.axis(r.n - 1) == Approx(r.extent));

    const Grid p = make_grid(DimMode::Plane2D, 0.5, 1.0);
    CHECK(p.size() == p.n * p.n);
    CHECK(p.point(p.n + 2).x == Approx(p.axis(1)));
    CHECK(p.point(p.n + 2).y == Approx(p.axis(2)));
  }

  TEST_CASE("make_grid rejects non-positive sizes") {
    CHECK_THROWS_AS(make_grid(DimMode::Line1D, 0.0, 1.0), PreconditionError);
    CHECK_THROWS_AS(make_grid(DimMode::Line1D, 0.1, 0.0), PreconditionError);
  }

  TEST_CASE("dim mode names round trip") {
    for (DimMode m : {DimMode::Line1D, DimMode::Plane2D, DimMode::Radial3D})
      CHECK(parse_dim_mode(to_string(m)) == m);
    CHECK_THROWS_AS(parse_dim_mode("cube-4d"), PreconditionError);
  }

  TEST_CASE("trapezoid integration is exact for linear line densities") {
    const Grid g = make_grid(DimMode::Line1D, 0.25, 2.0);
    const auto f = sample(g, [](Coord p) { return 3.0 + 2.0 * p.x; });
    CHECK(integrate(g, f) == Approx(3.0 * 2.0 * g.extent).epsilon(1e-14));
  }

  TEST_CASE("radial quadrature applies the 4 pi r^2 measure") {
    // the density passed in is r^2 u; u = 1 on [0, 1] integrates to 4 pi / 3
    const Grid g = make_grid(DimMode::Radial3D, 1e-3, 1.0);
    const auto f = sample(g, [](Coord p) { return p.x * p.x; });
    CHECK(integrate(g, f) == Approx(4.0 * std::numbers::pi / 3.0).epsilon(1e-6));
  }

  TEST_CASE("plane quadrature integrates a Gaussian") {
    const Grid g = make_grid(DimMode::Plane2D, 0.05, 8.0);
    const auto f = sample(g, [](Coord p) { return std::exp(-(p.x * p.x + p.y * p.y)); });
    CHECK(integrate(g, f) == Approx(std::numbers::pi).epsilon(1e-10));
  }

  TEST_CASE("quadrature weights reproduce integrate") {
    for (DimMode m : {DimMode::Line1D, DimMode::Plane2D, DimMode::Radial3D}) {
      const Grid g = make_grid(m, 0.1, 1.5);
      const auto f = sample(g, [](Coord p) { return std::cos(p.x) + p.y * p.y; });
      const auto w = quadrature_weights(g);
      double s = 0.0;
      for (std::size_t i = 0; i < f.size(); ++i) s += w[i] * f[i];
      CHECK(s == Approx(integrate(g, f)).epsilon(1e-13));
    }
  }

  TEST_CASE("ball integral uses a partial cell at R on rank-1 grids") {
    const Grid g = make_grid(DimMode::Line1D, 0.1, 3.0);
    const auto one = sample(g, [](Coord) { return 1.0; });
    CHECK(integrate_ball(g, one, 1.05) == Approx(2.1).epsilon(1e-12));
    CHECK(integrate_ball(g, one, 1.0) == Approx(2.0).epsilon(1e-12));
    // monotone in R
    CHECK(integrate_ball(g, one, 1.5) > integrate_ball(g, one, 1.45));
  }

  TEST_CASE("ball integral over the whole grid equals the full integral") {
    const Grid g = make_grid(DimMode::Radial3D, 0.05, 2.0);
    const auto f = sample(g, [](Coord p) { return p.x * p.x * std::exp(-p.x); });
    CHECK(integrate_ball(g, f, g.extent + 1.0) == Approx(integrate(g, f)).epsilon(1e-13));
  }

  TEST_CASE("Gauss-Legendre is exact through degree 15") {
    auto p15 = [](double x) { return std::pow(x, 15) - 2.0 * std::pow(x, 14) + x; };
    // int_0^2 of the above
    const double exact = std::pow(2.0, 16) / 16.0 - 2.0 * std::pow(2.0, 15) / 15.0 + 2.0;
    CHECK(gauss_legendre(p15, 0.0, 2.0) == Approx(exact).epsilon(1e-13));
    // degree 16 is no longer exact
    auto p16 = [](double x) { return std::pow(x, 16); };
    CHECK(std::abs(gauss_legendre(p16, -1.0, 1.0) - 2.0 / 17.0) > 1e-10);
  }
}
