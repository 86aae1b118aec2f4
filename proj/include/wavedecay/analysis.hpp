#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "wavedecay/error.hpp"

namespace wavedecay {

enum class DecayModel { Algebraic, Logarithmic };

std::string to_string(DecayModel m);

/// Least-squares fit of E(t) ~ A t^-p (Algebraic) or A / log^2(2 + t)
/// (Logarithmic). Both fits are done on log E so the residual sums compare.
struct DecayFit {
  DecayModel model = DecayModel::Algebraic;
  bool ok = false;
  std::string reason;
  double t_start = 0.0;
  double t_end = 0.0;
  double A = 0.0;
  double p = 0.0;  // exponent; 2 for the logarithmic model
  double rss = 0.0;
  std::size_t used = 0;
  std::size_t excluded = 0;  // samples at or below the floor
};

/// Samples with t outside [t_start, t_end] are ignored; samples with E <=
/// floor are excluded. Fewer than five usable samples gives ok = false.
DecayFit fit_decay(std::span<const double> t, std::span<const double> E, double t_start,
                   double t_end, DecayModel model, double floor);

enum class CheckStatus { Pass, Fail, Skipped };

std::string to_string(CheckStatus s);

struct BoundednessReport {
  CheckStatus status = CheckStatus::Skipped;
  std::string reason;
  double a = 0.0;           // R / c_m
  double max_first = 0.0;   // sup Q on the first half of the window
  double max_second = 0.0;  // sup Q on the second half
  double ratio = 0.0;       // max_second / max_first
};

/// Q(t) = (t - a)^(1 - eta) E_R(t) with a = R / c_m must stay bounded: the
/// check passes when sup Q over the second half of [t_start, t_end] is at
/// most growth_tol times the sup over the first half. Skipped when eta >= 1.
BoundednessReport bounded_scaled_energy_check(std::span<const double> t,
                                              std::span<const double> E_R, double eta, double R,
                                              double c_m, double t_start, double t_end,
                                              double growth_tol = 1.1);

class HypothesisViolation : public PreconditionError {
 public:
  HypothesisViolation(double t, const std::string& msg) : PreconditionError(msg), t_(t) {}
  double t() const { return t_; }

 private:
  double t_;
};

/// Certificate for the integral inequality
///   (t - a) e(t) <= K0 + eta int_0^t e(s) ds,  t >= 0,
/// which gives e(t) <= (K0 + eta M0 (t - a)^eta) / (t - a) for t >= t0 with
/// M0 = xi(t0) + K0 / eta (t0 - a)^-eta, xi(t) = (t - a)^-eta int_0^t e.
struct GronwallCertificate {
  double K0 = 0.0;
  double eta = 0.0;
  double a = 0.0;
  double t0 = 0.0;
  double xi_t0 = 0.0;
  double M0 = 0.0;
  bool dominated = false;  // e <= bound at every sample t >= t0
  double max_ratio = 0.0;  // max e / bound over t >= t0
  std::vector<double> bound_t;
  std::vector<double> bound;

  double bound_at(double t) const;
};

/// Cumulative trapezoid integral of e from t[0] (which must be 0).
std::vector<double> cumulative_integral(std::span<const double> t, std::span<const double> e);

/// Verifies the hypothesis at every sample (relative tolerance `tol`) and
/// throws HypothesisViolation at the first violation; eta in [0, 1), t0 > a.
GronwallCertificate gronwall_bound(std::span<const double> t, std::span<const double> e, double K0,
                                   double eta, double a, double t0, double tol = 1e-9);

/// Smallest K0 for which the hypothesis holds on the samples:
/// sup_t [(t - a) e(t) - eta int_0^t e], clamped at 0.
double empirical_k0(std::span<const double> t, std::span<const double> e, double eta, double a);

}  // namespace wavedecay
