#pragma once

#include <cstdint>
#include <vector>

#include "wavedecay/experiment.hpp"
#include "wavedecay/spectral.hpp"

namespace wavedecay {

/// Sup-norm error against the closed-form solution at T for a sequence of
/// mesh widths; ratios[i] = err[i] / err[i + 1].
struct RefinementStudy {
  std::vector<double> h;
  std::vector<double> value;
  std::vector<double> ratios;
};

RefinementStudy oracle_refinement(DimMode mode, const std::vector<double>& hs, double T);

/// A baseline experiment: bump data (u0 amplitude 1, u1 amplitude 0.5,
/// radius 1), L = 1, R = 2, all identity checks enabled.
ExperimentConfig baseline_config(DimMode mode, double a, double h, double T);

struct EikonalReport {
  double max_eikonal = 0.0;     // max | |grad psi|^2 - psi_t^2 |
  double max_phi_match = 0.0;   // max |psi - phi| on |x| = L
  bool signs_ok = true;         // psi > 0, psi_t < 0, phi_t < 0
  std::size_t points = 0;
};

EikonalReport eikonal_check(std::size_t points, std::uint64_t seed, double L = 1.0);

/// Riesz-weighted integral of a sampled function on [-X, X)^dim.
double riesz_value(int dim, const SpatialFunction& f, double X, double h, double theta,
                   ZeroModePolicy policy);

/// Gronwall equality case: e flat on [0, t1], then A (t - a)^(eta - 1), which
/// satisfies the hypothesis with equality for t >= t1. Returns the max
/// relative deviation of the certificate bound from the analytic bound on
/// [t0, t_end], or +inf if the certificate fails.
double gronwall_equality_error(double eta, double a, double K0, double t1, double t0, double t_end,
                               std::size_t samples);

/// Equality case doubled from t_v on: returns the reported first violating t
/// minus the first sample at or after t_v (0 when correct; NaN when the
/// violation was not detected).
double gronwall_violation_offset(double eta, double a, double K0, double t_v);

}  // namespace wavedecay
