#include "wavedecay/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "wavedecay/error.hpp"

namespace wavedecay {

EnergyDensities energy_densities(const Snapshot& s) {
  const Grid& g = s.grid;
  const std::size_t N = g.size();
  const std::size_t n = g.n;
  const double i2h = 1.0 / (2.0 * g.h);
  EnergyDensities d;
  d.energy.assign(N, 0.0);
  d.pair_u.assign(N, 0.0);
  d.pair_xg.assign(N, 0.0);
  d.mass.assign(N, 0.0);
  const auto& u = s.field;
  const auto& ut = s.velocity;

  switch (g.mode) {
    case DimMode::Line1D:
      for (std::size_t i = 0; i < n; ++i) {
        const double ux = (i == 0 || i + 1 == n) ? 0.0 : (u[i + 1] - u[i - 1]) * i2h;
        const double ic2 = 1.0 / (s.speed[i] * s.speed[i]);
        const double x = g.axis(i);
        d.energy[i] = 0.5 * (ic2 * ut[i] * ut[i] + ux * ux);
        d.pair_u[i] = ic2 * ut[i] * u[i];
        d.pair_xg[i] = ic2 * ut[i] * x * ux;
        d.mass[i] = u[i] * u[i];
      }
      break;
    case DimMode::Plane2D:
      for (std::size_t i = 0; i < n; ++i) {
        const double x = g.axis(i);
        for (std::size_t j = 0; j < n; ++j) {
          const std::size_t k = i * n + j;
          const bool edge = i == 0 || j == 0 || i + 1 == n || j + 1 == n;
          const double ux = edge ? 0.0 : (u[k + n] - u[k - n]) * i2h;
          const double uy = edge ? 0.0 : (u[k + 1] - u[k - 1]) * i2h;
          const double y = g.axis(j);
          const double ic2 = 1.0 / (s.speed[k] * s.speed[k]);
          d.energy[k] = 0.5 * (ic2 * ut[k] * ut[k] + ux * ux + uy * uy);
          d.pair_u[k] = ic2 * ut[k] * u[k];
          d.pair_xg[k] = ic2 * ut[k] * (x * ux + y * uy);
          d.mass[k] = u[k] * u[k];
        }
      }
      break;
    case DimMode::Radial3D:
      // stored w = r u; r^2 E = 1/2 (c^-2 w_t^2 + (w_r - w/r)^2) and r u_r = w_r - w/r
      for (std::size_t i = 1; i + 1 < n; ++i) {
        const double r = g.axis(i);
        const double q = (u[i + 1] - u[i - 1]) * i2h - u[i] / r;
        const double ic2 = 1.0 / (s.speed[i] * s.speed[i]);
        d.energy[i] = 0.5 * (ic2 * ut[i] * ut[i] + q * q);
        d.pair_u[i] = ic2 * ut[i] * u[i];
        d.pair_xg[i] = ic2 * r * ut[i] * q;
        d.mass[i] = u[i] * u[i];
      }
      break;
  }
  return d;
}

double psi(double t, double r) { return r >= t ? 1.0 + r - t : 1.0 / (1.0 + t - r); }

Weights weights(double t, std::span<const double> x, double L) {
  if (t < 0.0) throw PreconditionError("weights require t >= 0");
  Weights w;
  double r2 = 0.0;
  for (double c : x) r2 += c * c;
  const double r = std::sqrt(r2);
  double dpsi_dr = 0.0;
  if (r >= t) {
    w.psi = 1.0 + r - t;
    w.psi_t = -1.0;
    dpsi_dr = 1.0;
  } else {
    const double q = 1.0 / (1.0 + t - r);
    w.psi = q;
    w.psi_t = -q * q;
    dpsi_dr = q * q;
  }
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t k = 0; k < 3; ++k) {
    const double xk = k < x.size() ? x[k] : 0.0;
    w.grad_psi[k] = r > 0.0 ? dpsi_dr * xk / r : (t > 0.0 ? nan : 0.0);
  }
  if (r == 0.0 && t == 0.0) w.grad_psi = {nan, nan, nan};
  if (t < L) {
    w.phi = 1.0 + L - t;
    w.phi_t = -1.0;
  } else {
    const double q = 1.0 / (1.0 + t - L);
    w.phi = q;
    w.phi_t = -q * q;
  }
  return w;
}

DiagnosticsEntry energy_report(const Snapshot& s, const WavespeedProfile& profile,
                               std::span<const double> R_list, double S_accum) {
  for (double R : R_list)
    if (!(R > profile.L)) throw PreconditionError("local energy radius must satisfy R > L");
  const Grid& g = s.grid;
  const EnergyDensities d = energy_densities(s);
  DiagnosticsEntry e;
  e.t = s.t;
  e.E_u = integrate(g, d.energy);
  e.l2_u = std::sqrt(integrate(g, d.mass));
  e.pair_ut_u = integrate(g, d.pair_u);
  e.pair_ut_xgrad = integrate(g, d.pair_xg);
  e.S_accum = S_accum;

  std::vector<double> weighted(g.size());
  for (std::size_t i = 0; i < weighted.size(); ++i)
    weighted[i] = 2.0 * psi(s.t, g.radius_at(i)) * d.energy[i];
  const double weighted_total = integrate(g, weighted);
  for (double R : R_list) {
    e.E_R.push_back(integrate_ball(g, d.energy, R));
    e.weighted_ext.push_back(std::max(0.0, weighted_total - integrate_ball(g, weighted, R)));
  }
  return e;
}

DiagnosticsRecorder::DiagnosticsRecorder(const WavespeedProfile& profile, std::vector<double> R_list)
    : profile_(profile) {
  for (double R : R_list)
    if (!(R > profile.L)) throw PreconditionError("local energy radius must satisfy R > L");
  record_.mode = profile.mode;
  record_.R_list = std::move(R_list);
}

double DiagnosticsRecorder::source_integrand(const StepView& v) {
  const Grid& g = v.grid;
  if (!source_ready_) {
    const auto qw = quadrature_weights(g);
    const auto c = v.op.speed();
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double r = g.radius_at(i);
      if (r >= profile_.L) continue;
      const double xgc = r * profile_.radial_derivative(r);
      if (xgc == 0.0) continue;
      source_nodes_.push_back(i);
      source_weights_.push_back(qw[i] * xgc / (c[i] * c[i] * c[i]));
    }
    source_ready_ = true;
  }
  double s = 0.0;
  for (std::size_t k = 0; k < source_nodes_.size(); ++k) {
    const double ut = v.velocity(source_nodes_[k]);
    s += source_weights_[k] * ut * ut;
  }
  return s;
}

void DiagnosticsRecorder::on_step(const StepView& v) {
  const double f = source_integrand(v);
  if (v.step == 0) {
    S_ = 0.0;
  } else {
    S_ += 0.5 * v.dt * (last_integrand_ + f);
  }
  last_integrand_ = f;
}

void DiagnosticsRecorder::on_sample(const StepView& v) {
  velocity_.resize(v.grid.size());
  for (std::size_t i = 0; i < velocity_.size(); ++i) velocity_[i] = v.velocity(i);
  const Snapshot s{v.grid, v.op.speed(), v.curr, velocity_, v.t};
  record_.entries.push_back(energy_report(s, profile_, record_.R_list, S_));
}

double initial_pairing(const DiagnosticsRecord& rec) {
  if (rec.entries.empty()) return 0.0;
  const auto& e0 = rec.entries.front();
  return 0.5 * (space_dim(rec.mode) - 1) * e0.pair_ut_u + e0.pair_ut_xgrad;
}

std::vector<double> morawetz_residual(const DiagnosticsRecord& rec, double initial_terms) {
  const double half_n1 = 0.5 * (space_dim(rec.mode) - 1);
  std::vector<double> out;
  out.reserve(rec.entries.size());
  for (const auto& e : rec.entries) {
    const double rhs = initial_terms - half_n1 * e.pair_ut_u - e.pair_ut_xgrad + e.S_accum;
    out.push_back(e.t * e.E_u - rhs);
  }
  return out;
}

std::vector<double> morawetz_residual(DiagnosticsRecord& rec) {
  auto res = morawetz_residual(std::as_const(rec), initial_pairing(rec));
  for (std::size_t i = 0; i < res.size(); ++i) rec.entries[i].morawetz_residual = res[i];
  return res;
}

std::size_t r_index(const DiagnosticsRecord& rec, double R) {
  for (std::size_t i = 0; i < rec.R_list.size(); ++i)
    if (std::abs(rec.R_list[i] - R) <= 1e-12 * std::max(1.0, std::abs(R))) return i;
  throw PreconditionError("radius R = " + std::to_string(R) + " was not recorded");
}

WeightedEnergyResult weighted_energy_check(const DiagnosticsRecord& rec, double I0_sq, double L, double R,
                            double tol) {
  if (!(R > L)) throw PreconditionError("weighted energy bound requires R > L");
  const std::size_t k = r_index(rec, R);
  const double bound = (2.0 + L) * I0_sq;
  WeightedEnergyResult res;
  for (const auto& e : rec.entries) {
    const double w = e.weighted_ext[k];
    const double ratio = bound > 0.0 ? w / bound : (w > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
    res.ratios.push_back(ratio);
    res.max_ratio = std::max(res.max_ratio, ratio);
  }
  res.passed = res.max_ratio <= 1.0 + tol;
  return res;
}

double pairing_constant(const DiagnosticsEntry& e, std::size_t r_idx, double R, double I0_sq,
                     double c_m) {
  if (!(e.t > R)) throw PreconditionError("implied constant requires t > R");
  const double E_R = e.E_R.at(r_idx);
  const double excess = std::abs(e.pair_ut_xgrad) - (R / c_m) * E_R - e.t * (e.E_u - E_R);
  if (!(excess > 0.0)) return 0.0;
  if (!(I0_sq > 0.0)) return std::numeric_limits<double>::infinity();
  return excess / (0.5 * I0_sq);
}

double conservation_drift(const DiagnosticsRecord& rec) {
  if (rec.entries.empty()) return 0.0;
  const double e0 = rec.entries.front().E_u;
  if (!(e0 > 0.0)) return 0.0;
  double d = 0.0;
  for (const auto& e : rec.entries) d = std::max(d, std::abs(e.E_u - e0) / e0);
  return d;
}

}  // namespace wavedecay
