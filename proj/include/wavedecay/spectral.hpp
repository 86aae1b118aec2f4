#pragma once

#include <array>
#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "wavedecay/diagnostics.hpp"
#include "wavedecay/medium.hpp"
#include "wavedecay/solver.hpp"

namespace wavedecay {

/// Samples of f on the cube [-n h/2, n h/2)^dim and a discretisation of
/// fhat(xi) = (2 pi)^(-dim/2) int e^{-i x.xi} f(x) dx on the dual lattice
/// xi_k = 2 pi k / (n h). Coefficients are in FFT order.
struct SpectralSample {
  int dim = 1;
  std::size_t n = 0;  // points per axis (even)
  double h = 0.0;
  std::vector<double> f;
  std::vector<std::complex<double>> fhat;
  std::complex<double> zero_mode{};
  double integral = 0.0;          // int f
  bool aliasing_warning = false;  // support touches the boundary layer

  double dxi() const;
  /// Signed lattice index of FFT position i along one axis.
  long wavenumber(std::size_t i) const;
  /// |xi|^2 at flat index k.
  double xi_sq(std::size_t k) const;
};

using SpatialFunction = std::function<double(const std::array<double, 3>&)>;

/// Samples `fn` on the cube (coordinates beyond dim are zero).
std::vector<double> sample_cube(int dim, std::size_t n, double h, const SpatialFunction& fn);

SpectralSample fourier_transform(int dim, std::size_t n, double h, std::vector<double> f);

/// sum of |fhat|^2 over the dual lattice times the cell volume.
double dual_norm_sq(const SpectralSample& s);

enum class ZeroModePolicy { ExcludeZeroMode, RequireZeroMean };

/// int |fhat|^2 / |xi|^(2 theta) dxi by the dual-lattice rule. For theta > 0
/// the xi = 0 cell is dropped (ExcludeZeroMode) or, when |int f| is below
/// mean_tol * ||f||_1, given the mean of its 2 dim lattice neighbours.
double riesz_weighted_integral(const SpectralSample& s, double theta, ZeroModePolicy policy,
                               double mean_tol = 1e-8);

struct InequalityReport {
  double lhs = 0.0;
  double rhs_core = 0.0;
  double ratio = 0.0;
  double theta = 0.0;
  double gamma = 0.0;
  bool with_moment = false;
  ZeroModePolicy policy = ZeroModePolicy::ExcludeZeroMode;
};

/// lhs / (||f||_{1,gamma}^2 + ||f||^2 [+ |int f|^2]). Without the moment term
/// f must have zero mean and theta < gamma + dim/2; with it, theta < dim/2.
InequalityReport weighted_inequality_ratio(const SpectralSample& s, double gamma, double theta,
                                           bool with_moment);

std::string to_string(ZeroModePolicy p);

/// Accumulates v(t) = int_0^t u ds by the trapezoid rule at every step and
/// records the energy identity of the time-integrated problem
///   c^-2 v_tt - Lap v = c^-2 u1,  v(0) = 0,  v_t(0) = u0
/// at every sample.
class AntiderivativeTracker : public Observer {
 public:
  struct Entry {
    double t = 0.0;
    double E_v = 0.0;      // 1/2 int (c^-2 u^2 + |grad v|^2)
    double pairing = 0.0;  // int w v, w = u1 / c^2
    double residual = 0.0; // E_v - 1/2 ||c^-1 u0||^2 - int w v
    double l2_u = 0.0;
  };

  explicit AntiderivativeTracker(const InitialData& data) : data_(data) {}

  void on_step(const StepView& v) override;
  void on_sample(const StepView& v) override;

  double initial_term() const { return half_cinv_u0_sq_; }
  const std::vector<Entry>& entries() const { return entries_; }

 private:
  const InitialData& data_;
  std::vector<double> v_;
  std::vector<double> weight_u1_;  // stored c^-2 u1 (times r on radial-3d)
  double half_cinv_u0_sq_ = 0.0;
  std::vector<Entry> entries_;
};

struct AntiderivativeReport {
  std::vector<double> residuals;
  double max_relative_residual = 0.0;  // max |res| / (E_v + eps)
  double sup_l2_first_half = 0.0;      // sup ||u(t)|| on [0, T/2]
  double sup_l2_second_half = 0.0;     // sup ||u(t)|| on (T/2, T]
  bool plateau = false;                // second <= (1 + plateau_tol) first
};

AntiderivativeReport antiderivative_identity_check(const AntiderivativeTracker& tracker,
                                                   double plateau_tol = 0.05, double eps = 1e-12);

}  // namespace wavedecay
