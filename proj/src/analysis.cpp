#include "wavedecay/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace wavedecay {

std::string to_string(DecayModel m) {
  return m == DecayModel::Algebraic ? "algebraic" : "logarithmic";
}

std::string to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    case CheckStatus::Skipped: return "skipped";
  }
  return "unknown";
}

DecayFit fit_decay(std::span<const double> t, std::span<const double> E, double t_start,
                   double t_end, DecayModel model, double floor) {
  if (t.size() != E.size()) throw PreconditionError("time and energy series differ in length");
  if (!(t_end > t_start)) throw PreconditionError("fit window must have t_end > t_start");
  DecayFit fit;
  fit.model = model;
  fit.t_start = t_start;
  fit.t_end = t_end;
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] < t_start || t[i] > t_end || !(t[i] > 0.0)) continue;
    if (!(E[i] > floor)) {
      ++fit.excluded;
      continue;
    }
    xs.push_back(model == DecayModel::Algebraic ? std::log(t[i])
                                                : -2.0 * std::log(std::log(2.0 + t[i])));
    ys.push_back(std::log(E[i]));
  }
  fit.used = xs.size();
  if (xs.size() < 5) {
    fit.reason = "fewer than 5 samples above the exclusion floor (local energy vanished)";
    return fit;
  }
  const double m = double(xs.size());
  double rss = 0.0;
  if (model == DecayModel::Algebraic) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sx += xs[i];
      sy += ys[i];
      sxx += xs[i] * xs[i];
      sxy += xs[i] * ys[i];
    }
    const double den = m * sxx - sx * sx;
    if (!(std::abs(den) > 0.0)) {
      fit.reason = "degenerate fit window";
      return fit;
    }
    const double slope = (m * sxy - sx * sy) / den;
    const double icpt = (sy - slope * sx) / m;
    fit.p = -slope;
    fit.A = std::exp(icpt);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double r = ys[i] - (icpt + slope * xs[i]);
      rss += r * r;
    }
  } else {
    // log E = log A - 2 log log(2 + t): only A is free
    double s = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) s += ys[i] - xs[i];
    const double icpt = s / m;
    fit.p = 2.0;
    fit.A = std::exp(icpt);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double r = ys[i] - (icpt + xs[i]);
      rss += r * r;
    }
  }
  fit.rss = rss;
  fit.ok = true;
  return fit;
}

BoundednessReport bounded_scaled_energy_check(std::span<const double> t,
                                              std::span<const double> E_R, double eta, double R,
                                              double c_m, double t_start, double t_end,
                                              double growth_tol) {
  if (t.size() != E_R.size()) throw PreconditionError("time and energy series differ in length");
  BoundednessReport rep;
  rep.a = R / c_m;
  if (!(eta < 1.0)) {
    rep.status = CheckStatus::Skipped;
    rep.reason = "outside theorem hypothesis (eta >= 1)";
    return rep;
  }
  if (!(t_start > rep.a)) throw PreconditionError("window must start after a = R / c_m");
  if (!(t_end > t_start)) throw PreconditionError("window must have t_end > t_start");
  const double mid = 0.5 * (t_start + t_end);
  std::size_t n1 = 0, n2 = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] < t_start || t[i] > t_end) continue;
    const double q = std::pow(t[i] - rep.a, 1.0 - eta) * E_R[i];
    if (t[i] <= mid) {
      rep.max_first = std::max(rep.max_first, q);
      ++n1;
    } else {
      rep.max_second = std::max(rep.max_second, q);
      ++n2;
    }
  }
  if (n1 == 0 || n2 == 0) throw PreconditionError("window holds too few samples");
  if (rep.max_first > 0.0)
    rep.ratio = rep.max_second / rep.max_first;
  else
    rep.ratio = rep.max_second > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  rep.status = rep.ratio <= growth_tol ? CheckStatus::Pass : CheckStatus::Fail;
  if (rep.status == CheckStatus::Fail) rep.reason = "scaled local energy keeps growing";
  return rep;
}

std::vector<double> cumulative_integral(std::span<const double> t, std::span<const double> e) {
  if (t.size() != e.size()) throw PreconditionError("time and value series differ in length");
  if (t.empty() || t[0] != 0.0) throw PreconditionError("series must start at t = 0");
  std::vector<double> I(t.size(), 0.0);
  for (std::size_t i = 1; i < t.size(); ++i) {
    if (!(t[i] > t[i - 1])) throw PreconditionError("times must increase strictly");
    I[i] = I[i - 1] + 0.5 * (t[i] - t[i - 1]) * (e[i] + e[i - 1]);
  }
  return I;
}

double GronwallCertificate::bound_at(double t) const {
  if (!(t > a)) return std::numeric_limits<double>::infinity();
  const double s = t - a;
  return (K0 + eta * M0 * std::pow(s, eta)) / s;
}

GronwallCertificate gronwall_bound(std::span<const double> t, std::span<const double> e, double K0,
                                   double eta, double a, double t0, double tol) {
  if (!(eta >= 0.0 && eta < 1.0)) throw PreconditionError("eta must lie in [0, 1)");
  if (!(t0 > a)) throw PreconditionError("t0 must exceed a");
  if (!(K0 >= 0.0)) throw PreconditionError("K0 must be non-negative");
  const auto I = cumulative_integral(t, e);
  if (t0 > t.back()) throw PreconditionError("t0 lies beyond the series");

  for (std::size_t i = 0; i < t.size(); ++i) {
    const double lhs = (t[i] - a) * e[i];
    const double rhs = K0 + eta * I[i];
    const double scale = std::abs(lhs) + std::abs(rhs);
    if (lhs > rhs + tol * scale)
      throw HypothesisViolation(t[i], "integral inequality violated at t = " + std::to_string(t[i]));
  }

  GronwallCertificate c;
  c.K0 = K0;
  c.eta = eta;
  c.a = a;
  c.t0 = t0;
  // int_0^t0 e with e linear between samples
  const auto it = std::lower_bound(t.begin(), t.end(), t0);
  const std::size_t j = std::size_t(it - t.begin());
  double I0 = I[j];
  if (t[j] != t0) {
    const double w = (t0 - t[j - 1]) / (t[j] - t[j - 1]);
    const double e0 = e[j - 1] + w * (e[j] - e[j - 1]);
    I0 = I[j - 1] + 0.5 * (t0 - t[j - 1]) * (e[j - 1] + e0);
  }
  const double s0 = t0 - a;
  c.xi_t0 = std::pow(s0, -eta) * I0;
  c.M0 = eta > 0.0 ? c.xi_t0 + K0 / eta * std::pow(s0, -eta) : c.xi_t0;

  c.dominated = true;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] < t0) continue;
    const double b = c.bound_at(t[i]);
    c.bound_t.push_back(t[i]);
    c.bound.push_back(b);
    const double r = b > 0.0 ? e[i] / b : (e[i] > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
    c.max_ratio = std::max(c.max_ratio, r);
    if (e[i] > b * (1.0 + tol)) c.dominated = false;
  }
  return c;
}

double empirical_k0(std::span<const double> t, std::span<const double> e, double eta, double a) {
  const auto I = cumulative_integral(t, e);
  double k = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) k = std::max(k, (t[i] - a) * e[i] - eta * I[i]);
  return k;
}

}  // namespace wavedecay
