#include <doctest.h>

#include <cmath>
#include <numbers>

#include "wavedecay/error.hpp"
#include "wavedecay/medium.hpp"

using namespace wavedecay;
using doctest::Approx;

namespace {

// Closed forms obtained by exact symbolic integration of the bump data.
constexpr double kPi = std::numbers::pi;
constexpr double kEnergyLine = 65536.0 / 45045.0;           // u0 = (1-x^2)^4, u1 = 0
constexpr double kEnergyRadial = 131072.0 * kPi / 255255.0; // u0 = (1-r^2)^4, u1 = 0
constexpr double kI0LinePower2 = 132.0 / 35.0;              // u0 = (1-x^2)^2, u1 = 0
constexpr double kI0Radial = 90570619.0 * kPi / 58198140.0; // u0 = b, u1 = b/2
constexpr double kMomentLine = 128.0 / 315.0;               // u1 = b/2
constexpr double kMomentPlane = kPi / 10.0;                 // u1 = b/2
constexpr double kJ0Line = -16384.0 / 109395.0;             // u0 = b, u1 = b/2

WavespeedProfile unit(DimMode m) { return make_profile(m, ProfileFamily::Constant, 1.0); }

InitialData bump_data(DimMode m, double u0, double u1, int power = 4) {
  DataSpec s;
  s.u0_amplitude = u0;
  s.u1_amplitude = u1;
  s.power = power;
  return make_data(m, s);
}

}  // namespace

TEST_SUITE("medium") {
  TEST_CASE("bump profile eta matches the closed-form slope constant") {
    CHECK(kBumpSlopeMax == Approx(96.0 / (25.0 * std::sqrt(5.0))).epsilon(1e-15));
    const auto p = make_profile(DimMode::Radial3D, ProfileFamily::RadialBump, 1.0, 0.1);
    CHECK(p.eta == Approx(0.343460041343968).epsilon(1e-13));
    CHECK(p.c_sup == Approx(1.1));
    CHECK(p.c_m == 1.0);
    const auto q = make_profile(DimMode::Line1D, ProfileFamily::RadialBump, 1.0, -0.2);
    CHECK(q.eta == Approx(0.858650103359919).epsilon(1e-13));
    CHECK(q.c_m == Approx(0.8));
    CHECK(q.inv_c_sup == Approx(1.25));
    CHECK(compute_eta(q).applicable);
    const auto big = make_profile(DimMode::Line1D, ProfileFamily::RadialBump, 1.0, -0.5);
    CHECK(big.eta == Approx(3.4346004134).epsilon(1e-10));
    CHECK_FALSE(compute_eta(big).applicable);
  }

  TEST_CASE("eta is invariant under rescaling L") {
    const double e1 = make_profile(DimMode::Line1D, ProfileFamily::RadialBump, 1.0, 0.3).eta;
    for (double L : {0.25, 2.0, 7.5})
      CHECK(make_profile(DimMode::Line1D, ProfileFamily::RadialBump, L, 0.3).eta ==
            Approx(e1).epsilon(1e-14));
  }

  TEST_CASE("constant medium has eta zero") {
    const auto p = unit(DimMode::Plane2D);
    CHECK(p.eta == 0.0);
    CHECK(p.speed(0.3) == 1.0);
    CHECK(p.x_dot_grad_c({0.2, 0.1}) == 0.0);
  }

  TEST_CASE("bump speed and derivative are consistent") {
    const auto p = make_profile(DimMode::Line1D, ProfileFamily::RadialBump, 2.0, 0.4);
    CHECK(p.speed(0.0) == Approx(1.4));
    CHECK(p.speed(2.0) == 1.0);
    CHECK(p.speed(3.0) == 1.0);
    for (double r : {0.1, 0.7, 1.3, 1.9}) {
      const double fd = (p.speed(r + 1e-6) - p.speed(r - 1e-6)) / 2e-6;
      CHECK(p.radial_derivative(r) == Approx(fd).epsilon(1e-7));
    }
  }

  TEST_CASE("profile hypotheses are enforced") {
    CHECK_THROWS_WITH_AS(make_profile(DimMode::Line1D, ProfileFamily::RadialBump, 1.0, -1.0),
                         doctest::Contains("(A-1)"), PreconditionError);
    CHECK_THROWS_WITH_AS(make_profile(DimMode::Line1D, ProfileFamily::RadialBump, 0.0, 0.1),
                         doctest::Contains("(A-2)"), PreconditionError);
    CHECK_THROWS_AS(make_profile(DimMode::Line1D, ProfileFamily::Custom, 1.0), PreconditionError);
  }

  TEST_CASE("validate_profile accepts the bump and rejects bad custom media") {
    const auto p = make_profile(DimMode::Radial3D, ProfileFamily::RadialBump, 1.0, 0.1);
    const auto rep = validate_profile(p, 100000);
    CHECK(rep.passed);
    CHECK(rep.grad_ratio <= 1.0 + 1e-6);
    CHECK(rep.grad_ratio > 0.999);
    CHECK_THROWS_AS(validate_profile(p, 10), PreconditionError);

    // c != 1 beyond L
    const auto leak = make_custom_profile(
        DimMode::Line1D, 1.0, [](double r) { return 1.0 + 0.1 * std::exp(-r); },
        [](double r) { return -0.1 * std::exp(-r); }, 1.1, 1.0, 0.1);
    const auto r1 = validate_profile(leak, 1000);
    CHECK_FALSE(r1.passed);
    CHECK(r1.assumption == "(A-2)");

    // declared gradient bound too small
    const auto steep = make_custom_profile(
        DimMode::Line1D, 1.0, [](double r) { return r < 1.0 ? 1.0 + 0.2 * (1 - r) * (1 - r) : 1.0; },
        [](double r) { return r < 1.0 ? -0.4 * (1 - r) : 0.0; }, 1.2, 1.0, 0.1);
    const auto r2 = validate_profile(steep, 1000);
    CHECK_FALSE(r2.passed);
    CHECK(r2.assumption == "(A-1)");

    // negative speed
    const auto neg = make_custom_profile(
        DimMode::Line1D, 1.0, [](double r) { return r < 1.0 ? -0.5 : 1.0; },
        [](double) { return 0.0; }, 1.0, 0.5, 0.0);
    CHECK_FALSE(validate_profile(neg, 1000).passed);
  }

  TEST_CASE("data validation") {
    InitialData d;
    d.mode = DimMode::Radial3D;
    d.u0.terms.push_back(BumpTerm{{0.5, 0.0}, 1.0, 1.0, 4, false});
    CHECK_THROWS_AS(validate_data(d), PreconditionError);
    d.u0.terms[0].center.x = 1.0;
    CHECK_NOTHROW(validate_data(d));
    d.u0.terms[0].power = 1;
    CHECK_THROWS_AS(validate_data(d), PreconditionError);
    d.u0.terms[0].power = 4;
    d.u0.terms[0].x_derivative = true;
    CHECK_THROWS_AS(validate_data(d), PreconditionError);
    d.u0.terms[0].x_derivative = false;
    d.u0.terms[0].radius = 0.0;
    CHECK_THROWS_AS(validate_data(d), PreconditionError);

    DataSpec s;
    s.family = "travelling";
    CHECK_THROWS_AS(make_data(DimMode::Plane2D, s), PreconditionError);
    s.family = "dipole";
    CHECK_THROWS_AS(make_data(DimMode::Radial3D, s), PreconditionError);
    s.family = "plane-wave";
    CHECK_THROWS_AS(make_data(DimMode::Line1D, s), PreconditionError);
  }

  TEST_CASE("bump gradient matches finite differences") {
    const BumpTerm b{{0.3, -0.2}, 1.2, 0.7, 4, false};
    const Coord p{0.1, 0.4};
    const Coord g = b.gradient(p, DimMode::Plane2D);
    const double e = 1e-6;
    CHECK(g.x == Approx((b.value({p.x + e, p.y}, DimMode::Plane2D) - b.value({p.x - e, p.y}, DimMode::Plane2D)) / (2 * e)).epsilon(1e-7));
    CHECK(g.y == Approx((b.value({p.x, p.y + e}, DimMode::Plane2D) - b.value({p.x, p.y - e}, DimMode::Plane2D)) / (2 * e)).epsilon(1e-7));
    CHECK(b.reach(DimMode::Plane2D) == Approx(1.2 + std::hypot(0.3, 0.2)));
  }

  TEST_CASE("energy of line and radial bumps") {
    CHECK(init_data_norms(bump_data(DimMode::Line1D, 1.0, 0.0), unit(DimMode::Line1D), 1.0).energy ==
          Approx(kEnergyLine).epsilon(1e-6));
    CHECK(init_data_norms(bump_data(DimMode::Radial3D, 1.0, 0.0), unit(DimMode::Radial3D), 1.0).energy ==
          Approx(kEnergyRadial).epsilon(1e-6));
  }

  TEST_CASE("I0 of a power-2 bump converges at second order") {
    const auto d = bump_data(DimMode::Line1D, 1.0, 0.0, 2);
    const auto p = unit(DimMode::Line1D);
    const double e1 = std::abs(init_data_norms(d, p, 1.0, 0.02).I0_sq - kI0LinePower2);
    const double e2 = std::abs(init_data_norms(d, p, 1.0, 0.01).I0_sq - kI0LinePower2);
    CHECK(init_data_norms(d, p, 1.0).I0_sq == Approx(kI0LinePower2).epsilon(1e-4));
    CHECK(e2 < e1);
    CHECK(e1 / e2 > 3.5);
  }

  TEST_CASE("weighted norms of mixed bump data") {
    const auto nl = init_data_norms(bump_data(DimMode::Line1D, 1.0, 0.5), unit(DimMode::Line1D), 1.0);
    CHECK(nl.moment == Approx(kMomentLine).epsilon(1e-8));
    CHECK(nl.J0_sq == Approx(kJ0Line).epsilon(1e-6));
    CHECK(nl.l1_u1 == Approx(kMomentLine).epsilon(1e-8));
    const auto nr = init_data_norms(bump_data(DimMode::Radial3D, 1.0, 0.5), unit(DimMode::Radial3D), 1.0);
    CHECK(nr.I0_sq == Approx(kI0Radial).epsilon(1e-5));
    const auto np = init_data_norms(bump_data(DimMode::Plane2D, 0.0, 0.5), unit(DimMode::Plane2D), 1.0);
    CHECK(np.moment == Approx(kMomentPlane).epsilon(1e-6));
    CHECK_THROWS_AS(init_data_norms(bump_data(DimMode::Line1D, 1.0, 0.5), unit(DimMode::Line1D), 1.5),
                    PreconditionError);
  }

  TEST_CASE("moment projection zeroes the moment and is idempotent") {
    const auto prof = make_profile(DimMode::Plane2D, ProfileFamily::RadialBump, 1.0, 0.2);
    DataSpec s;
    s.u1_amplitude = 0.5;
    s.center = {0.3, 0.0};
    const auto d = make_data(DimMode::Plane2D, s);
    const auto p1 = project_moment_zero(d, prof);
    CHECK(std::abs(init_data_norms(p1, prof, 1.0).moment) < 1e-12);
    const auto p2 = project_moment_zero(p1, prof);
    for (Coord x : {Coord{0.1, 0.2}, Coord{-0.5, 0.4}, Coord{1.0, -0.3}})
      CHECK(p2.u1(x, DimMode::Plane2D) == Approx(p1.u1(x, DimMode::Plane2D)).epsilon(1e-10));
    CHECK_THROWS_AS(project_moment_zero(bump_data(DimMode::Line1D, 1.0, 0.5), unit(DimMode::Line1D)),
                    PreconditionError);
  }

  TEST_CASE("dipole data has zero moment in a constant medium") {
    DataSpec s;
    s.family = "dipole";
    s.u0_amplitude = 0.0;
    s.u1_amplitude = 1.0;
    const auto d = make_data(DimMode::Plane2D, s);
    CHECK(std::abs(init_data_norms(d, unit(DimMode::Plane2D), 1.0).moment) < 1e-12);
  }
}
