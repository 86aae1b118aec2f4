#include <doctest.h>

#include <array>
#include <cmath>
#include <vector>

#include "wavedecay/diagnostics.hpp"
#include "wavedecay/error.hpp"

using namespace wavedecay;
using doctest::Approx;

namespace {

InitialData bump_data(DimMode m, double u0, double u1) {
  DataSpec s;
  s.u0_amplitude = u0;
  s.u1_amplitude = u1;
  return make_data(m, s);
}

DiagnosticsRecord simulate(DimMode m, double a, double T, std::vector<double> R_list,
                           double h = 0.01) {
  const auto prof = a == 0.0 ? make_profile(m, ProfileFamily::Constant, 1.0)
                             : make_profile(m, ProfileFamily::RadialBump, 1.0, a);
  const auto data = bump_data(m, 1.0, 0.5);
  SolverConfig cfg;
  cfg.h = h;
  cfg.T_final = T;
  cfg.sample_stride = 10;
  DiagnosticsRecorder rec(prof, std::move(R_list));
  Observer* obs[] = {&rec};
  run(data, prof, cfg, obs);
  return rec.take();
}

}  // namespace

TEST_SUITE("diagnostics") {
  TEST_CASE("zero field has zero functionals") {
    const auto prof = make_profile(DimMode::Line1D, ProfileFamily::Constant, 1.0);
    const Grid g = make_grid(DimMode::Line1D, 0.1, 3.0);
    std::vector<double> zero(g.size(), 0.0), speed(g.size(), 1.0);
    const Snapshot s{g, speed, zero, zero, 1.0};
    const double R[] = {2.0};
    const auto e = energy_report(s, prof, R);
    CHECK(e.E_u == 0.0);
    CHECK(e.E_R[0] == 0.0);
    CHECK(e.l2_u == 0.0);
    CHECK(e.weighted_ext[0] == 0.0);
  }

  TEST_CASE("energy of a resting bump") {
    const auto prof = make_profile(DimMode::Line1D, ProfileFamily::Constant, 1.0);
    const auto data = bump_data(DimMode::Line1D, 1.0, 0.0);
    const Grid g = make_grid(DimMode::Line1D, 0.001, 2.0);
    const auto u = sample_stored(g, data.u0);
    std::vector<double> v(g.size(), 0.0), speed(g.size(), 1.0);
    const double R[] = {1.5};
    const auto e = energy_report(Snapshot{g, speed, u, v, 0.0}, prof, R);
    CHECK(e.E_u == Approx(65536.0 / 45045.0).epsilon(1e-5));
    CHECK(e.E_R[0] == Approx(e.E_u).epsilon(1e-12));
  }

  TEST_CASE("local energy radius must exceed L") {
    const auto prof = make_profile(DimMode::Line1D, ProfileFamily::Constant, 1.0);
    const Grid g = make_grid(DimMode::Line1D, 0.1, 3.0);
    std::vector<double> zero(g.size(), 0.0), speed(g.size(), 1.0);
    const double R[] = {1.0};
    CHECK_THROWS_AS(energy_report(Snapshot{g, speed, zero, zero, 0.0}, prof, R), PreconditionError);
    CHECK_THROWS_AS(DiagnosticsRecorder(prof, {0.5}), PreconditionError);
  }

  TEST_CASE("weight functions: branches, continuity and eikonal relation") {
    const double L = 1.0;
    const std::array<double, 3> far{2.0, 0.0, 0.0}, near{0.2, 0.0, 0.0};
    CHECK(psi(0.5, 2.0) == Approx(2.5));
    CHECK(psi(0.5, 0.2) == Approx(1.0 / 1.3));
    CHECK(psi(0.7, 0.7) == Approx(1.0));
    CHECK(psi(0.7, 0.7 + 1e-9) == Approx(psi(0.7, 0.7 - 1e-9)).epsilon(1e-8));
    CHECK(weights(0.5, far, L).phi == Approx(1.5));
    CHECK(weights(2.0, far, L).phi == Approx(0.5));
    CHECK(weights(1.0 - 1e-12, far, L).phi == Approx(weights(1.0 + 1e-12, far, L).phi));

    for (double t : {0.5, 3.0}) {
      for (const auto& x : {far, near}) {
        const auto w = weights(t, x, L);
        const double g2 = w.grad_psi[0] * w.grad_psi[0] + w.grad_psi[1] * w.grad_psi[1] +
                          w.grad_psi[2] * w.grad_psi[2];
        CHECK(g2 == Approx(w.psi_t * w.psi_t).epsilon(1e-14));
        CHECK(w.psi > 0.0);
        CHECK(w.psi_t < 0.0);
        CHECK(w.phi_t < 0.0);
      }
      const std::array<double, 3> onL{0.0, L, 0.0};
      CHECK(weights(t, onL, L).psi == Approx(weights(t, onL, L).phi).epsilon(1e-15));
    }
    CHECK_THROWS_AS(weights(-0.1, far, L), PreconditionError);
  }

  TEST_CASE("energy conservation and local energy ordering") {
    const auto rec = simulate(DimMode::Line1D, 0.2, 6.0, {1.5, 3.0});
    CHECK(conservation_drift(rec) < 1e-3);
    for (const auto& e : rec.entries) {
      CHECK(e.E_R[0] <= e.E_R[1] + 1e-14);
      CHECK(e.E_R[1] <= e.E_u + 1e-12);
    }
    CHECK(r_index(rec, 3.0) == 1);
    CHECK_THROWS_AS(r_index(rec, 2.5), PreconditionError);
  }

  TEST_CASE("Morawetz identity: residual vanishes at t = 0 and stays small") {
    auto rec = simulate(DimMode::Radial3D, 0.1, 8.0, {2.0});
    const auto res = morawetz_residual(rec);
    CHECK(res.front() == Approx(0.0).scale(1.0));
    for (std::size_t i = 1; i < res.size(); ++i)
      CHECK(std::abs(res[i]) <= 1e-2 * rec.entries[i].t * rec.entries[i].E_u);
    CHECK(rec.entries.back().morawetz_residual == res.back());
  }

  TEST_CASE("source term vanishes in a constant medium") {
    const auto rec = simulate(DimMode::Line1D, 0.0, 3.0, {2.0});
    for (const auto& e : rec.entries) CHECK(e.S_accum == 0.0);
  }

  TEST_CASE("source term sign follows the sign of the bump") {
    // x.grad c <= 0 for a > 0 and >= 0 for a < 0
    CHECK(simulate(DimMode::Line1D, 0.2, 3.0, {2.0}).entries.back().S_accum < 0.0);
    CHECK(simulate(DimMode::Line1D, -0.2, 3.0, {2.0}).entries.back().S_accum > 0.0);
  }

  TEST_CASE("weighted exterior energy bound") {
    const auto rec = simulate(DimMode::Line1D, 0.1, 10.0, {2.0});
    const auto prof = make_profile(DimMode::Line1D, ProfileFamily::RadialBump, 1.0, 0.1);
    const double I0 = init_data_norms(bump_data(DimMode::Line1D, 1.0, 0.5), prof, 1.0).I0_sq;
    const auto r = weighted_energy_check(rec, I0, 1.0, 2.0);
    CHECK(r.passed);
    CHECK(r.ratios.size() == rec.entries.size());
    CHECK(r.max_ratio > 0.0);
    CHECK_FALSE(weighted_energy_check(rec, I0 * 1e-3, 1.0, 2.0).passed);
    CHECK_THROWS_AS(weighted_energy_check(rec, I0, 2.0, 2.0), PreconditionError);
  }

  TEST_CASE("implied pairing constant") {
    DiagnosticsEntry e;
    e.t = 1.0;
    e.E_R = {0.0};
    CHECK_THROWS_AS(pairing_constant(e, 0, 2.0, 1.0, 1.0), PreconditionError);
    e.t = 3.0;
    CHECK(pairing_constant(e, 0, 2.0, 1.0, 1.0) == 0.0);
    e.pair_ut_xgrad = -2.0;
    e.E_R = {0.5};
    e.E_u = 0.5;
    // excess = 2 - 2 * 0.5 - 0 = 1, constant = 1 / (I0^2 / 2)
    CHECK(pairing_constant(e, 0, 2.0, 4.0, 1.0) == Approx(0.5));
  }

  TEST_CASE("implied pairing constant is quadratic homogeneous") {
    const auto prof = make_profile(DimMode::Line1D, ProfileFamily::RadialBump, 1.0, 0.1);
    SolverConfig cfg;
    cfg.h = 0.01;
    cfg.T_final = 8.0;
    auto run_scaled = [&](double s) {
      const auto d = bump_data(DimMode::Line1D, s, 0.5 * s);
      DiagnosticsRecorder rec(prof, {2.0});
      Observer* obs[] = {&rec};
      run(d, prof, cfg, obs);
      const double I0 = init_data_norms(d, prof, 1.0).I0_sq;
      double worst = 0.0;
      for (const auto& e : rec.record().entries)
        if (e.t > 2.0) worst = std::max(worst, pairing_constant(e, 0, 2.0, I0, prof.c_m));
      return worst;
    };
    CHECK(run_scaled(3.0) == Approx(run_scaled(1.0)).epsilon(1e-9));
  }
}
