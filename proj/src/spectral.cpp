#include "wavedecay/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>

#include "wavedecay/error.hpp"

namespace wavedecay {

namespace {

// FFTW planning is not thread safe.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

std::size_t total_points(int dim, std::size_t n) {
  std::size_t N = 1;
  for (int d = 0; d < dim; ++d) N *= n;
  return N;
}

}  // namespace

double SpectralSample::dxi() const { return 2.0 * std::numbers::pi / (double(n) * h); }

long SpectralSample::wavenumber(std::size_t i) const {
  return i < n / 2 ? long(i) : long(i) - long(n);
}

double SpectralSample::xi_sq(std::size_t k) const {
  double s = 0.0;
  for (int d = 0; d < dim; ++d) {
    const double xi = double(wavenumber(k % n)) * dxi();
    s += xi * xi;
    k /= n;
  }
  return s;
}

std::vector<double> sample_cube(int dim, std::size_t n, double h, const SpatialFunction& fn) {
  if (dim < 1 || dim > 3) throw PreconditionError("spectral grids support dim 1..3");
  const std::size_t N = total_points(dim, n);
  const double x0 = -0.5 * double(n) * h;
  std::vector<double> f(N);
  for (std::size_t k = 0; k < N; ++k) {
    std::array<double, 3> x{};
    std::size_t r = k;
    // last axis varies fastest
    for (int d = dim - 1; d >= 0; --d) {
      x[d] = x0 + double(r % n) * h;
      r /= n;
    }
    f[k] = fn(x);
  }
  return f;
}

SpectralSample fourier_transform(int dim, std::size_t n, double h, std::vector<double> f) {
  if (dim < 1 || dim > 3) throw PreconditionError("spectral grids support dim 1..3");
  if (n < 4 || n % 2 != 0) throw PreconditionError("spectral grid size must be even and >= 4");
  const std::size_t N = total_points(dim, n);
  if (f.size() != N) throw PreconditionError("sample count does not match grid");

  SpectralSample s;
  s.dim = dim;
  s.n = n;
  s.h = h;
  s.f = std::move(f);
  s.fhat.resize(N);

  const double cell = std::pow(h, dim);
  double sum = 0.0;
  double edge_max = 0.0;
  double fmax = 0.0;
  for (std::size_t k = 0; k < N; ++k) {
    sum += s.f[k];
    fmax = std::max(fmax, std::abs(s.f[k]));
    std::size_t r = k;
    bool edge = false;
    for (int d = 0; d < dim; ++d) {
      const std::size_t i = r % n;
      edge = edge || i < 2 || i + 2 >= n;
      r /= n;
    }
    if (edge) edge_max = std::max(edge_max, std::abs(s.f[k]));
  }
  s.integral = sum * cell;
  s.aliasing_warning = edge_max > 0.0 && edge_max > 1e-12 * fmax;

  auto* buf = reinterpret_cast<fftw_complex*>(s.fhat.data());
  for (std::size_t k = 0; k < N; ++k) s.fhat[k] = {s.f[k], 0.0};
  int dims[3] = {int(n), int(n), int(n)};
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_dft(dim, dims, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
  }

  // The grid starts at x0 = -n h / 2, so each axis contributes the phase
  // exp(-i xi_k x0) = (-1)^k.
  const double norm = cell * std::pow(2.0 * std::numbers::pi, -0.5 * dim);
  for (std::size_t k = 0; k < N; ++k) {
    std::size_t r = k;
    long parity = 0;
    for (int d = 0; d < dim; ++d) {
      parity += s.wavenumber(r % n);
      r /= n;
    }
    const double sign = (parity % 2 == 0) ? 1.0 : -1.0;
    s.fhat[k] *= norm * sign;
  }
  s.zero_mode = s.fhat[0];
  return s;
}

double dual_norm_sq(const SpectralSample& s) {
  double acc = 0.0;
  for (const auto& z : s.fhat) acc += std::norm(z);
  return acc * std::pow(s.dxi(), s.dim);
}

std::string to_string(ZeroModePolicy p) {
  return p == ZeroModePolicy::ExcludeZeroMode ? "exclude-zero-mode" : "require-zero-mean";
}

double riesz_weighted_integral(const SpectralSample& s, double theta, ZeroModePolicy policy,
                               double mean_tol) {
  if (theta < 0.0) throw PreconditionError("theta must be non-negative");
  if (theta == 0.0) return dual_norm_sq(s);
  if (policy == ZeroModePolicy::RequireZeroMean) {
    double l1 = 0.0;
    for (double v : s.f) l1 += std::abs(v);
    l1 *= std::pow(s.h, s.dim);
    if (std::abs(s.integral) >= mean_tol * std::max(l1, 1e-300))
      throw PreconditionError(
          "require-zero-mean: int f != 0 (zero-mean hypothesis of the Riesz-potential inequality)");
  }
  auto integrand = [&](std::size_t k) { return std::norm(s.fhat[k]) / std::pow(s.xi_sq(k), theta); };
  double acc = 0.0;
  for (std::size_t k = 1; k < s.fhat.size(); ++k) acc += integrand(k);
  if (policy == ZeroModePolicy::RequireZeroMean) {
    double nb = 0.0;
    std::size_t stride = 1;
    for (int d = 0; d < s.dim; ++d) {
      nb += integrand(stride) + integrand(stride * (s.n - 1));
      stride *= s.n;
    }
    acc += nb / (2.0 * s.dim);
  }
  return acc * std::pow(s.dxi(), s.dim);
}

InequalityReport weighted_inequality_ratio(const SpectralSample& s, double gamma, double theta,
                                           bool with_moment) {
  if (gamma < 0.0 || gamma > 1.0) throw PreconditionError("gamma must lie in [0, 1]");
  const double half_n = 0.5 * s.dim;
  if (with_moment) {
    if (!(theta >= 0.0 && theta < half_n))
      throw PreconditionError("theta outside [0, n/2) (inequality with moment term)");
  } else if (!(theta >= 0.0 && theta < gamma + half_n)) {
    throw PreconditionError("theta outside [0, gamma + n/2) (zero-mean inequality)");
  }
  InequalityReport rep;
  rep.theta = theta;
  rep.gamma = gamma;
  rep.with_moment = with_moment;
  rep.policy = with_moment ? ZeroModePolicy::ExcludeZeroMode : ZeroModePolicy::RequireZeroMean;

  const double cell = std::pow(s.h, s.dim);
  const double x0 = -0.5 * double(s.n) * s.h;
  double l1g = 0.0, l2 = 0.0;
  for (std::size_t k = 0; k < s.f.size(); ++k) {
    std::size_t r = k;
    double r2 = 0.0;
    for (int d = 0; d < s.dim; ++d) {
      const double x = x0 + double(r % s.n) * s.h;
      r2 += x * x;
      r /= s.n;
    }
    l1g += (1.0 + std::pow(std::sqrt(r2), gamma)) * std::abs(s.f[k]);
    l2 += s.f[k] * s.f[k];
  }
  l1g *= cell;
  l2 *= cell;
  rep.rhs_core = l1g * l1g + l2 + (with_moment ? s.integral * s.integral : 0.0);
  if (rep.rhs_core == 0.0) return rep;  // f = 0: 0/0 reported as 0
  rep.lhs = riesz_weighted_integral(s, theta, rep.policy);
  rep.ratio = rep.lhs / rep.rhs_core;
  return rep;
}

void AntiderivativeTracker::on_step(const StepView& v) {
  if (v.step == 0) {
    v_.assign(v.grid.size(), 0.0);
    const Field& u1 = data_.u1;
    const auto c = v.op.speed();
    const auto stored_u1 = sample_stored(v.grid, u1);
    weight_u1_.resize(v.grid.size());
    std::vector<double> dens(v.grid.size());
    for (std::size_t i = 0; i < dens.size(); ++i) {
      const double ic2 = 1.0 / (c[i] * c[i]);
      weight_u1_[i] = ic2 * stored_u1[i];
      dens[i] = ic2 * v.curr[i] * v.curr[i];
    }
    half_cinv_u0_sq_ = 0.5 * integrate(v.grid, dens);
    return;
  }
  const double h = 0.5 * v.dt;
  for (std::size_t i = 0; i < v_.size(); ++i) v_[i] += h * (v.prev[i] + v.curr[i]);
}

void AntiderivativeTracker::on_sample(const StepView& v) {
  const Snapshot s{v.grid, v.op.speed(), v_, v.curr, v.t};
  const EnergyDensities d = energy_densities(s);
  std::vector<double> pair(v_.size());
  for (std::size_t i = 0; i < pair.size(); ++i) pair[i] = weight_u1_[i] * v_[i];
  Entry e;
  e.t = v.t;
  e.E_v = integrate(v.grid, d.energy);
  e.pairing = integrate(v.grid, pair);
  e.residual = e.E_v - half_cinv_u0_sq_ - e.pairing;
  // ||u||^2 is the "velocity" part of the densities; recompute directly
  std::vector<double> mass(v_.size());
  for (std::size_t i = 0; i < mass.size(); ++i) mass[i] = v.curr[i] * v.curr[i];
  e.l2_u = std::sqrt(integrate(v.grid, mass));
  entries_.push_back(e);
}

AntiderivativeReport antiderivative_identity_check(const AntiderivativeTracker& tracker,
                                                   double plateau_tol, double eps) {
  AntiderivativeReport rep;
  const auto& es = tracker.entries();
  if (es.empty()) return rep;
  const double T = es.back().t;
  for (const auto& e : es) {
    rep.residuals.push_back(e.residual);
    rep.max_relative_residual =
        std::max(rep.max_relative_residual, std::abs(e.residual) / (e.E_v + eps));
    if (e.t <= 0.5 * T)
      rep.sup_l2_first_half = std::max(rep.sup_l2_first_half, e.l2_u);
    else
      rep.sup_l2_second_half = std::max(rep.sup_l2_second_half, e.l2_u);
  }
  rep.plateau = rep.sup_l2_second_half <= (1.0 + plateau_tol) * rep.sup_l2_first_half;
  return rep;
}

}  // namespace wavedecay
