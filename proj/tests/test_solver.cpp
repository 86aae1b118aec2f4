#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "wavedecay/error.hpp"
#include "wavedecay/solver.hpp"

using namespace wavedecay;
using doctest::Approx;

namespace {

InitialData bump_data(DimMode m, double u0, double u1) {
  DataSpec s;
  s.u0_amplitude = u0;
  s.u1_amplitude = u1;
  return make_data(m, s);
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

}  // namespace

TEST_SUITE("solver") {
  TEST_CASE("time step follows the CFL formula") {
    CHECK(stable_dt(0.5, 0.01, 1.0, DimMode::Line1D) == Approx(0.005));
    CHECK(stable_dt(0.5, 0.01, 1.0, DimMode::Radial3D) == Approx(0.005));
    CHECK(stable_dt(0.5, 0.01, 2.0, DimMode::Plane2D) == Approx(0.005 / (2.0 * std::sqrt(2.0))));
  }

  TEST_CASE("grid extent covers the domain of dependence") {
    const auto prof = make_profile(DimMode::Line1D, ProfileFamily::RadialBump, 1.0, 0.2);
    SolverConfig cfg;
    cfg.h = 0.01;
    cfg.T_final = 3.0;
    const auto d = build_grid(prof, bump_data(DimMode::Line1D, 1.0, 0.0), cfg);
    CHECK(d.grid.extent >= 1.0 + 1.2 * 3.0 * cfg.extent_rule + 2 * cfg.h);
    CHECK(double(d.steps) * d.dt >= cfg.T_final - 1e-12);
    CHECK(double(d.steps - 1) * d.dt < cfg.T_final);
  }

  TEST_CASE("solver config validation") {
    SolverConfig cfg;
    cfg.cfl = 0.95;
    CHECK_THROWS_AS(validate(cfg), PreconditionError);
    cfg = {};
    cfg.h = -1.0;
    CHECK_THROWS_AS(validate(cfg), PreconditionError);
    cfg = {};
    cfg.sample_stride = 0;
    CHECK_THROWS_AS(validate(cfg), PreconditionError);
    cfg = {};
    cfg.extent_rule = 0.5;
    CHECK_THROWS_AS(validate(cfg), PreconditionError);
  }

  TEST_CASE("closed-form solution at t = 0 reproduces u0") {
    for (DimMode m : {DimMode::Line1D, DimMode::Radial3D}) {
      const auto prof = make_profile(m, ProfileFamily::Constant, 1.0);
      const auto data = bump_data(m, 1.0, 0.5);
      const Grid g = make_grid(m, 0.01, 2.0);
      const auto u = oracle_solution(data, prof, 0.0, g);
      for (std::size_t i = 0; i < g.size(); i += 17)
        CHECK(u[i] == Approx(data.u0(g.point(i), m)).epsilon(1e-12).scale(1.0));
    }
    const auto bumpy = make_profile(DimMode::Line1D, ProfileFamily::RadialBump, 1.0, 0.1);
    CHECK_THROWS_AS(oracle_solution(bump_data(DimMode::Line1D, 1, 0), bumpy, 0.0,
                                    make_grid(DimMode::Line1D, 0.1, 1.0)),
                    PreconditionError);
  }

  TEST_CASE("T_final = 0 takes no steps and returns the initial field") {
    const auto prof = make_profile(DimMode::Line1D, ProfileFamily::Constant, 1.0);
    const auto data = bump_data(DimMode::Line1D, 1.0, 0.5);
    SolverConfig cfg;
    cfg.T_final = 0.0;
    const auto res = run(data, prof, cfg, {});
    CHECK(res.disc.steps == 0);
    CHECK(res.samples == 1);
    CHECK(res.final_state.t == 0.0);
    CHECK(max_abs_diff(res.final_state.curr, sample_stored(res.disc.grid, data.u0)) == 0.0);
  }

  TEST_CASE("line solution agrees with d'Alembert") {
    const auto prof = make_profile(DimMode::Line1D, ProfileFamily::Constant, 1.0);
    const auto data = bump_data(DimMode::Line1D, 1.0, 0.5);
    SolverConfig cfg;
    cfg.h = 0.005;
    cfg.T_final = 2.0;
    const auto res = run(data, prof, cfg, {});
    const auto exact = oracle_solution(data, prof, res.final_state.t, res.disc.grid);
    CHECK(max_abs_diff(res.final_state.curr, exact) < 1e-4);
  }

  TEST_CASE("radial physical field recovers u at the origin") {
    const auto prof = make_profile(DimMode::Radial3D, ProfileFamily::Constant, 1.0);
    const auto data = bump_data(DimMode::Radial3D, 1.0, 0.0);
    const Grid g = make_grid(DimMode::Radial3D, 0.001, 2.0);
    const auto u = physical_field(g, sample_stored(g, data.u0));
    CHECK(u[0] == Approx(1.0).epsilon(1e-4));
    CHECK(u[500] == Approx(data.u0(g.point(500), DimMode::Radial3D)).epsilon(1e-12));
  }

  TEST_CASE("disturbances travel at most one cell per step") {
    const auto prof = make_profile(DimMode::Line1D, ProfileFamily::RadialBump, 0.5, 0.3);
    const auto data = bump_data(DimMode::Line1D, 1.0, 0.5);
    const Grid g = make_grid(DimMode::Line1D, 0.02, 4.0);
    const double dt = stable_dt(0.5, g.h, prof.c_sup, DimMode::Line1D);
    auto state = init_state(data, prof, g, dt);
    const WaveOperator op(g, prof, dt);
    for (int k = 0; k < 60; ++k) {
      double reach = 0.0;
      for (std::size_t i = 0; i < g.size(); ++i)
        if (state.curr[i] != 0.0) reach = std::max(reach, g.radius_at(i));
      CHECK(reach <= 1.0 + double(state.step) * g.h + 1e-9);
      step(state, op);
    }
  }

  TEST_CASE("runs are bitwise deterministic") {
    const auto prof = make_profile(DimMode::Plane2D, ProfileFamily::RadialBump, 1.0, 0.2);
    const auto data = bump_data(DimMode::Plane2D, 1.0, 0.5);
    SolverConfig cfg;
    cfg.h = 0.05;
    cfg.T_final = 1.0;
    const auto a = run(data, prof, cfg, {});
    const auto b = run(data, prof, cfg, {});
    CHECK(a.final_state.curr == b.final_state.curr);
  }

  TEST_CASE("single-step wrapper matches the operator form") {
    const auto prof = make_profile(DimMode::Line1D, ProfileFamily::RadialBump, 1.0, 0.2);
    const auto data = bump_data(DimMode::Line1D, 1.0, 0.0);
    const Grid g = make_grid(DimMode::Line1D, 0.05, 3.0);
    const double dt = stable_dt(0.5, g.h, prof.c_sup, g.mode);
    auto s = init_state(data, prof, g, dt);
    const auto next = step(s, prof, g);
    step(s, WaveOperator(g, prof, dt));
    CHECK(next.curr == s.curr);
    CHECK(next.step == 2);
  }

  TEST_CASE("a super-critical time step is detected as an instability") {
    const auto prof = make_profile(DimMode::Line1D, ProfileFamily::Constant, 1.0);
    const auto data = bump_data(DimMode::Line1D, 1.0, 0.0);
    const Grid g = make_grid(DimMode::Line1D, 0.01, 3.0);
    const double dt = stable_dt(1.2, g.h, 1.0, g.mode);
    auto s = init_state(data, prof, g, dt);
    const WaveOperator op(g, prof, dt);
    std::size_t failed_at = 0;
    try {
      for (int k = 0; k < 1000; ++k) step(s, op);
    } catch (const InstabilityError& e) {
      failed_at = e.step();
    }
    CHECK(failed_at > 0);
    CHECK(failed_at <= 1001);
  }

  TEST_CASE("memory cap is enforced before allocation") {
    const auto prof = make_profile(DimMode::Plane2D, ProfileFamily::Constant, 1.0);
    SolverConfig cfg;
    cfg.h = 0.001;
    cfg.T_final = 10.0;
    cfg.memory_cap_mb = 1;
    CHECK_THROWS_AS(build_grid(prof, bump_data(DimMode::Plane2D, 1.0, 0.0), cfg), ResourceError);
  }
}
