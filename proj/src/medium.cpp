#include "wavedecay/medium.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wavedecay/error.hpp"

namespace wavedecay {

WavespeedProfile make_profile(DimMode mode, ProfileFamily family, double L, double a) {
  if (!(L > 0.0)) throw PreconditionError("(A-2): support radius L must be positive");
  WavespeedProfile p;
  p.mode = mode;
  p.family = family;
  p.L = L;
  switch (family) {
    case ProfileFamily::Constant:
      p.a = 0.0;
      p.speed_fn = [](double) { return 1.0; };
      p.derivative_fn = [](double) { return 0.0; };
      break;
    case ProfileFamily::RadialBump: {
      if (!(a > -1.0)) throw PreconditionError("(A-1): bump amplitude a must exceed -1 so c > 0");
      p.a = a;
      p.c_sup = std::max(1.0, 1.0 + a);
      p.c_m = std::min(1.0, 1.0 + a);
      p.grad_c_sup = std::abs(a) / L * kBumpSlopeMax;
      p.speed_fn = [L, a](double r) {
        if (r >= L) return 1.0;
        const double q = 1.0 - (r / L) * (r / L);
        return 1.0 + a * q * q * q;
      };
      p.derivative_fn = [L, a](double r) {
        if (r >= L) return 0.0;
        const double s = r / L;
        const double q = 1.0 - s * s;
        return -6.0 * a * s * q * q / L;
      };
      break;
    }
    case ProfileFamily::Custom:
      throw PreconditionError("use make_custom_profile for hand-built media");
  }
  p.inv_c_sup = 1.0 / p.c_m;
  p.eta = 2.0 * p.L * p.inv_c_sup * p.grad_c_sup;
  return p;
}

WavespeedProfile make_custom_profile(DimMode mode, double L, std::function<double(double)> c,
                                     std::function<double(double)> dc, double c_sup, double c_m,
                                     double grad_c_sup) {
  if (!(L > 0.0)) throw PreconditionError("(A-2): support radius L must be positive");
  WavespeedProfile p;
  p.mode = mode;
  p.family = ProfileFamily::Custom;
  p.L = L;
  p.c_sup = c_sup;
  p.c_m = c_m;
  p.inv_c_sup = c_m > 0.0 ? 1.0 / c_m : std::numeric_limits<double>::infinity();
  p.grad_c_sup = grad_c_sup;
  p.eta = 2.0 * L * p.inv_c_sup * grad_c_sup;
  p.speed_fn = std::move(c);
  p.derivative_fn = std::move(dc);
  return p;
}

EtaReport compute_eta(const WavespeedProfile& profile) {
  EtaReport r;
  r.eta = 2.0 * profile.L * profile.inv_c_sup * profile.grad_c_sup;
  r.applicable = r.eta >= 0.0 && r.eta < 1.0;
  return r;
}

ProfileReport validate_profile(const WavespeedProfile& profile, std::size_t samples) {
  if (samples < 1000) throw PreconditionError("validate_profile needs at least 1000 samples");
  ProfileReport rep;
  auto fail = [&](std::string assumption, std::string msg) {
    rep.passed = false;
    rep.assumption = std::move(assumption);
    rep.message = std::move(msg);
    return rep;
  };
  const double span = 3.0 * profile.L;
  const double tol = 1e-12;
  for (std::size_t k = 0; k < samples; ++k) {
    const double r = span * double(k) / double(samples - 1);
    const double c = profile.speed(r);
    const double dc = profile.radial_derivative(r);
    if (!std::isfinite(c) || !(c > 0.0))
      return fail("(A-1)", "c(x) > 0 violated at |x| = " + std::to_string(r));
    if (c > profile.c_sup * (1.0 + tol) || c < profile.c_m * (1.0 - tol))
      return fail("(A-1)", "c, 1/c not bounded by declared c_sup, c_m at |x| = " + std::to_string(r));
    if (r > profile.L && c != 1.0)
      return fail("(A-2)", "c(x) != 1 at |x| = " + std::to_string(r) + " > L");
    if (!std::isfinite(dc))
      return fail("(A-1)", "grad c not finite at |x| = " + std::to_string(r));
    rep.max_sampled_grad = std::max(rep.max_sampled_grad, std::abs(dc));
  }
  if (rep.max_sampled_grad > profile.grad_c_sup * (1.0 + 1e-6))
    return fail("(A-1)", "sampled |grad c| exceeds declared bound");
  rep.grad_ratio = profile.grad_c_sup > 0.0 ? rep.max_sampled_grad / profile.grad_c_sup : 0.0;
  return rep;
}

namespace {

double sq_distance(const BumpTerm& b, Coord p, DimMode m, Coord* delta) {
  Coord d{p.x - b.center.x, 0.0};
  if (m == DimMode::Plane2D) d.y = p.y - b.center.y;
  if (delta) *delta = d;
  return d.x * d.x + d.y * d.y;
}

}  // namespace

double BumpTerm::value(Coord p, DimMode m) const {
  Coord d;
  const double rho2 = radius * radius;
  const double s2 = sq_distance(*this, p, m, &d) / rho2;
  if (s2 >= 1.0) return 0.0;
  const double q = 1.0 - s2;
  if (!x_derivative) return amplitude * std::pow(q, power);
  return amplitude * power * std::pow(q, power - 1) * (-2.0 * d.x / rho2);
}

Coord BumpTerm::gradient(Coord p, DimMode m) const {
  Coord d;
  const double rho2 = radius * radius;
  const double s2 = sq_distance(*this, p, m, &d) / rho2;
  if (s2 >= 1.0) return {};
  const double q = 1.0 - s2;
  if (!x_derivative) {
    const double f = amplitude * power * std::pow(q, power - 1) * (-2.0 / rho2);
    return {f * d.x, f * d.y};
  }
  const double t = -2.0 * d.x / rho2;
  const double dxx = power * ((power - 1) * std::pow(q, power - 2) * t * t +
                              std::pow(q, power - 1) * (-2.0 / rho2));
  return {amplitude * dxx, 0.0};
}

double BumpTerm::reach(DimMode m) const {
  if (m == DimMode::Plane2D) return std::hypot(center.x, center.y) + radius;
  return std::abs(center.x) + radius;
}

double Field::operator()(Coord p, DimMode m) const {
  double s = 0.0;
  for (const auto& t : terms) s += t.value(p, m);
  return s;
}

Coord Field::gradient(Coord p, DimMode m) const {
  Coord g;
  for (const auto& t : terms) {
    const Coord gt = t.gradient(p, m);
    g.x += gt.x;
    g.y += gt.y;
  }
  return g;
}

double Field::reach(DimMode m) const {
  double r = 0.0;
  for (const auto& t : terms) r = std::max(r, t.reach(m));
  return r;
}

double InitialData::support_radius() const { return std::max(u0.reach(mode), u1.reach(mode)); }

void validate_data(const InitialData& data) {
  for (const Field* f : {&data.u0, &data.u1}) {
    for (const auto& t : f->terms) {
      if (!(t.radius > 0.0)) throw PreconditionError("bump radius must be positive");
      if (t.power < 2) throw PreconditionError("bump power must be >= 2");
      if (!std::isfinite(t.amplitude)) throw PreconditionError("non-finite bump amplitude");
      if (t.x_derivative && data.mode != DimMode::Line1D)
        throw PreconditionError("x-derivative bumps are only defined on line-1d");
      if (data.mode == DimMode::Radial3D && t.center.x != 0.0 && t.center.x < t.radius)
        throw PreconditionError("radial-3d bump offset must be 0 or >= its radius");
    }
  }
}

namespace {

double grad_sq(Coord g, DimMode m) { return m == DimMode::Plane2D ? g.x * g.x + g.y * g.y : g.x * g.x; }

double x_dot(Coord p, Coord g, DimMode m) {
  return m == DimMode::Plane2D ? p.x * g.x + p.y * g.y : p.x * g.x;
}

}  // namespace

DataNorms init_data_norms(const InitialData& data, const WavespeedProfile& profile, double gamma,
                          double h) {
  if (gamma < 0.0 || gamma > 1.0) throw PreconditionError("gamma must lie in [0, 1]");
  const DimMode m = data.mode;
  const Grid g = make_grid(m, h, data.support_radius() + 2.0 * h);
  const std::size_t N = g.size();
  const double half_n1 = 0.5 * (space_dim(m) - 1);

  std::vector<double> i0(N), j0(N), mom(N), u1sq(N), u1abs(N), u1gam(N), cu0(N), u0sq(N), en(N);
  for (std::size_t i = 0; i < N; ++i) {
    const Coord p = g.point(i);
    const double r = radius(p, m);
    const double c = profile.speed(r);
    const double ic2 = 1.0 / (c * c);
    const double v0 = data.u0(p, m);
    const double v1 = data.u1(p, m);
    const Coord g0 = data.u0.gradient(p, m);
    if (!std::isfinite(v0) || !std::isfinite(v1) || !std::isfinite(g0.x) || !std::isfinite(g0.y))
      throw PreconditionError("non-finite initial data sample");
    const double measure = m == DimMode::Radial3D ? r * r : 1.0;
    const double e2 = ic2 * v1 * v1 + grad_sq(g0, m);
    i0[i] = measure * (1.0 + r) * e2;
    j0[i] = measure * ic2 * v1 * (half_n1 * v0 + x_dot(p, g0, m));
    mom[i] = measure * ic2 * v1;
    u1sq[i] = measure * v1 * v1;
    u1abs[i] = measure * std::abs(v1);
    u1gam[i] = measure * (1.0 + std::pow(r, gamma)) * std::abs(v1);
    cu0[i] = measure * ic2 * v0 * v0;
    u0sq[i] = measure * v0 * v0;
    en[i] = measure * 0.5 * e2;
  }
  DataNorms n;
  n.I0_sq = integrate(g, i0);
  n.J0_sq = integrate(g, j0);
  n.moment = integrate(g, mom);
  n.l2_u1 = std::sqrt(integrate(g, u1sq));
  n.l1_u1 = integrate(g, u1abs);
  n.l1_gamma_u1 = integrate(g, u1gam);
  n.l2_cinv_u0 = std::sqrt(integrate(g, cu0));
  n.l2_u0 = std::sqrt(integrate(g, u0sq));
  n.energy = integrate(g, en);
  return n;
}

double field_moment(const Field& f, DimMode mode, const WavespeedProfile& profile, double reach,
                    double h) {
  const Grid g = make_grid(mode, h, reach + 2.0 * h);
  std::vector<double> d(g.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    const Coord p = g.point(i);
    const double r = radius(p, mode);
    const double c = profile.speed(r);
    d[i] = (mode == DimMode::Radial3D ? r * r : 1.0) * f(p, mode) / (c * c);
  }
  return integrate(g, d);
}

InitialData project_moment_zero(const InitialData& data, const WavespeedProfile& profile,
                                double h) {
  if (data.mode != DimMode::Plane2D)
    throw PreconditionError("moment projection is defined for plane-2d data only");
  const double reach = data.support_radius();
  Field ref{{BumpTerm{{0.0, 0.0}, reach, 1.0, 4, false}}};
  const double mb = field_moment(ref, data.mode, profile, reach, h);
  if (!(std::abs(mb) > 1e-300))
    throw PreconditionError("reference bump has zero c^-2 moment; cannot normalise");
  const double m = field_moment(data.u1, data.mode, profile, reach, h);
  InitialData out = data;
  const double lambda = m / mb;
  if (lambda != 0.0) out.u1.terms.push_back(BumpTerm{{0.0, 0.0}, reach, -lambda, 4, false});
  return out;
}

InitialData make_data(DimMode mode, const DataSpec& spec) {
  InitialData d;
  d.mode = mode;
  auto bump = [&](Coord c, double amp, bool deriv = false) {
    return BumpTerm{c, spec.radius, amp, spec.power, deriv};
  };
  if (spec.family == "bump") {
    if (spec.u0_amplitude != 0.0) d.u0.terms.push_back(bump(spec.center, spec.u0_amplitude));
    if (spec.u1_amplitude != 0.0) d.u1.terms.push_back(bump(spec.center, spec.u1_amplitude));
  } else if (spec.family == "travelling") {
    if (mode != DimMode::Line1D) throw PreconditionError("travelling data is line-1d only");
    d.u0.terms.push_back(bump(spec.center, spec.u0_amplitude));
    d.u1.terms.push_back(bump(spec.center, -spec.u0_amplitude, true));
  } else if (spec.family == "dipole") {
    if (mode == DimMode::Radial3D) throw PreconditionError("dipole data is not radial");
    const Coord plus{spec.center.x + spec.offset, spec.center.y};
    const Coord minus{spec.center.x - spec.offset, spec.center.y};
    if (spec.u0_amplitude != 0.0) d.u0.terms.push_back(bump(spec.center, spec.u0_amplitude));
    d.u1.terms.push_back(bump(plus, spec.u1_amplitude));
    d.u1.terms.push_back(bump(minus, -spec.u1_amplitude));
  } else {
    throw PreconditionError("unknown data family '" + spec.family + "'");
  }
  validate_data(d);
  return d;
}

}  // namespace wavedecay
