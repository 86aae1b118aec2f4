#include "wavedecay/solver.hpp"

#include <algorithm>
#include <cmath>

#include "wavedecay/error.hpp"

namespace wavedecay {

void validate(const SolverConfig& cfg) {
  if (!(cfg.cfl > 0.0 && cfg.cfl <= 0.9)) throw PreconditionError("cfl must lie in (0, 0.9]");
  if (!(cfg.h > 0.0)) throw PreconditionError("h must be positive");
  if (!(cfg.T_final >= 0.0)) throw PreconditionError("T_final must be non-negative");
  if (cfg.sample_stride == 0) throw PreconditionError("sample_stride must be positive");
  if (!(cfg.extent_rule >= 1.0)) throw PreconditionError("extent_rule must be >= 1");
}

double stable_dt(double cfl, double h, double c_sup, DimMode mode) {
  return cfl * h / (c_sup * std::sqrt(double(grid_rank(mode))));
}

Discretization build_grid(const WavespeedProfile& profile, const InitialData& data,
                          const SolverConfig& cfg) {
  validate(cfg);
  const double speed = std::max(profile.c_sup, 1.0);
  const double extent =
      data.support_radius() + speed * cfg.T_final * cfg.extent_rule + 2.0 * cfg.h;
  Discretization d;
  d.grid = make_grid(profile.mode, cfg.h, extent);
  // three time levels, speed, Courant numbers and one observer-sized buffer
  const std::size_t bytes = d.grid.size() * sizeof(double) * 6;
  const std::size_t cap = cfg.memory_cap_mb * 1024 * 1024;
  if (bytes > cap) throw ResourceError(bytes, cap);
  d.dt = stable_dt(cfg.cfl, cfg.h, profile.c_sup, profile.mode);
  d.steps = cfg.T_final > 0.0 ? static_cast<std::size_t>(std::ceil(cfg.T_final / d.dt - 1e-9)) : 0;
  return d;
}

WaveOperator::WaveOperator(const Grid& grid, const WavespeedProfile& profile, double dt)
    : grid_(grid), dt_(dt), speed_(grid.size()), courant_sq_(grid.size()) {
  const double k = dt / grid.h;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    speed_[i] = profile.speed(grid.radius_at(i));
    courant_sq_[i] = speed_[i] * speed_[i] * k * k;
  }
}

void WaveOperator::apply(std::span<const double> in, std::span<double> out) const {
  const std::size_t n = grid_.n;
  const double ih2 = 1.0 / (grid_.h * grid_.h);
  std::fill(out.begin(), out.end(), 0.0);
  if (grid_rank(grid_.mode) == 2) {
    for (std::size_t i = 1; i + 1 < n; ++i) {
      for (std::size_t j = 1; j + 1 < n; ++j) {
        const std::size_t k = i * n + j;
        const double lap = in[k - n] + in[k + n] + in[k - 1] + in[k + 1] - 4.0 * in[k];
        out[k] = speed_[k] * speed_[k] * lap * ih2;
      }
    }
    return;
  }
  for (std::size_t i = 1; i + 1 < n; ++i)
    out[i] = speed_[i] * speed_[i] * (in[i - 1] - 2.0 * in[i] + in[i + 1]) * ih2;
}

bool WaveOperator::advance(std::span<const double> prev, std::span<const double> curr,
                           std::span<double> next) const {
  const std::size_t n = grid_.n;
  const double* cs = courant_sq_.data();
  double probe = 0.0;
  if (grid_rank(grid_.mode) == 2) {
    std::fill_n(next.begin(), n, 0.0);
    std::fill_n(next.end() - std::ptrdiff_t(n), n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const std::size_t row = i * n;
      next[row] = 0.0;
      next[row + n - 1] = 0.0;
      const double* up = curr.data() + row - n;
      const double* mid = curr.data() + row;
      const double* down = curr.data() + row + n;
      const double* old = prev.data() + row;
      double* out = next.data() + row;
      for (std::size_t j = 1; j + 1 < n; ++j) {
        const double lap = up[j] + down[j] + mid[j - 1] + mid[j + 1] - 4.0 * mid[j];
        out[j] = 2.0 * mid[j] - old[j] + cs[row + j] * lap;
        probe += out[j];
      }
    }
  } else {
    next[0] = 0.0;
    next[n - 1] = 0.0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
      next[i] = 2.0 * curr[i] - prev[i] + cs[i] * (curr[i - 1] - 2.0 * curr[i] + curr[i + 1]);
      probe += next[i];
    }
  }
  return std::isfinite(probe);
}

std::vector<double> sample_stored(const Grid& grid, const Field& f) {
  std::vector<double> out(grid.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const Coord p = grid.point(i);
    out[i] = f(p, grid.mode);
    if (grid.mode == DimMode::Radial3D) out[i] *= p.x;
  }
  // Dirichlet nodes
  if (grid_rank(grid.mode) == 1) {
    out.front() = 0.0;
    out.back() = 0.0;
  }
  return out;
}

FieldState init_state(const InitialData& data, const WavespeedProfile& profile, const Grid& grid,
                      double dt) {
  FieldState s;
  s.dt = dt;
  s.prev = sample_stored(grid, data.u0);
  const std::vector<double> v = sample_stored(grid, data.u1);
  WaveOperator op(grid, profile, dt);
  std::vector<double> lap(grid.size());
  op.apply(s.prev, lap);
  s.curr.resize(grid.size());
  for (std::size_t i = 0; i < s.curr.size(); ++i)
    s.curr[i] = s.prev[i] + dt * v[i] + 0.5 * dt * dt * lap[i];
  if (grid_rank(grid.mode) == 1) {
    s.curr.front() = 0.0;
    s.curr.back() = 0.0;
  }
  s.t = dt;
  s.step = 1;
  return s;
}

void step(FieldState& state, const WaveOperator& op) {
  std::vector<double> next(state.curr.size());
  if (!op.advance(state.prev, state.curr, next))
    throw InstabilityError(state.step + 1, state.t + state.dt);
  state.prev = std::move(state.curr);
  state.curr = std::move(next);
  state.t += state.dt;
  ++state.step;
}

FieldState step(const FieldState& state, const WavespeedProfile& profile, const Grid& grid) {
  WaveOperator op(grid, profile, state.dt);
  FieldState out = state;
  step(out, op);
  return out;
}

RunResult run(const InitialData& data, const WavespeedProfile& profile, const SolverConfig& cfg,
              std::span<Observer* const> observers) {
  validate_data(data);
  RunResult res;
  res.disc = build_grid(profile, data, cfg);
  const Grid& grid = res.disc.grid;
  const double dt = res.disc.dt;
  const WaveOperator op(grid, profile, dt);

  FieldState st = init_state(data, profile, grid, dt);
  const std::vector<double> v0 = sample_stored(grid, data.u1);
  const std::size_t steps = res.disc.steps;

  auto notify = [&](const StepView& view) {
    for (Observer* o : observers) o->on_step(view);
    if (view.step % cfg.sample_stride == 0 || view.step == steps) {
      for (Observer* o : observers) o->on_sample(view);
      ++res.samples;
    }
  };

  // step 0: curr = u0, next = u^1
  notify(StepView{grid, op, 0.0, dt, 0, {}, st.prev, st.curr, v0});

  std::vector<double> next(grid.size());
  for (std::size_t k = 1; k <= steps; ++k) {
    if (!op.advance(st.prev, st.curr, next)) throw InstabilityError(k + 1, double(k + 1) * dt);
    notify(StepView{grid, op, double(k) * dt, dt, k, st.prev, st.curr, next, v0});
    if (k == steps) break;
    std::swap(st.prev, st.curr);
    std::swap(st.curr, next);
    st.t = double(k + 1) * dt;
    st.step = k + 1;
  }
  if (steps == 0) {
    st.curr = st.prev;
    st.t = 0.0;
    st.step = 0;
  }
  res.final_state = std::move(st);
  return res;
}

namespace {

// Integral of a bump term over [a, b] along the line (Line1D) or of s * term(s)
// (Radial3D, the reduced field), exact for power <= 7.
double term_integral(const BumpTerm& t, double a, double b, bool radial_weight) {
  if (b <= a) return 0.0;
  if (t.x_derivative) {
    const BumpTerm plain{t.center, t.radius, t.amplitude, t.power, false};
    return plain.value({b, 0.0}, DimMode::Line1D) - plain.value({a, 0.0}, DimMode::Line1D);
  }
  const double lo = std::max(a, t.center.x - t.radius);
  const double hi = std::min(b, t.center.x + t.radius);
  if (hi <= lo) return 0.0;
  auto f = [&](double s) {
    const double v = t.value({s, 0.0}, DimMode::Line1D);
    return radial_weight ? s * v : v;
  };
  // split at the centre so each piece is a polynomial
  const double c = std::clamp(t.center.x, lo, hi);
  return gauss_legendre(f, lo, c) + gauss_legendre(f, c, hi);
}

double field_integral(const Field& f, double a, double b, bool radial_weight) {
  double s = 0.0;
  for (const auto& t : f.terms) s += term_integral(t, a, b, radial_weight);
  return s;
}

// Odd extension of s u(|s|).
double odd_reduced(const Field& f, double s) {
  return s * f({std::abs(s), 0.0}, DimMode::Line1D);
}

}  // namespace

std::vector<double> oracle_solution(const InitialData& data, const WavespeedProfile& profile,
                                    double t, const Grid& grid) {
  if (profile.family != ProfileFamily::Constant)
    throw PreconditionError("closed-form oracle requires c == 1");
  if (data.mode == DimMode::Plane2D || grid.mode != data.mode)
    throw PreconditionError("closed-form oracle is available for line-1d and radial-3d only");
  std::vector<double> u(grid.size());
  const DimMode m = DimMode::Line1D;
  if (t == 0.0) {
    for (std::size_t i = 0; i < u.size(); ++i) u[i] = data.u0(grid.point(i), m);
    return u;
  }
  if (data.mode == DimMode::Line1D) {
    for (std::size_t i = 0; i < u.size(); ++i) {
      const double x = grid.axis(i);
      u[i] = 0.5 * (data.u0({x + t, 0.0}, m) + data.u0({x - t, 0.0}, m)) +
             0.5 * field_integral(data.u1, x - t, x + t, false);
    }
    return u;
  }
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double r = grid.axis(i);
    if (r == 0.0) {
      // u(0, t) = d/dr w(0, t) = (s u0(s))'|_{s=t} + t u1(t)
      const double du0 = data.u0({t, 0.0}, m) + t * data.u0.gradient({t, 0.0}, m).x;
      u[i] = du0 + t * data.u1({t, 0.0}, m);
      continue;
    }
    const double w0 = 0.5 * (odd_reduced(data.u0, r + t) + odd_reduced(data.u0, r - t));
    const double lo = std::abs(r - t);
    const double w1 = 0.5 * field_integral(data.u1, lo, r + t, true);
    u[i] = (w0 + w1) / r;
  }
  return u;
}

std::vector<double> physical_field(const Grid& grid, std::span<const double> stored) {
  std::vector<double> u(stored.begin(), stored.end());
  if (grid.mode != DimMode::Radial3D) return u;
  for (std::size_t i = 1; i < u.size(); ++i) u[i] = stored[i] / grid.axis(i);
  u[0] = grid.n > 2 ? (8.0 * stored[1] - stored[2]) / (6.0 * grid.h) : 0.0;
  return u;
}

}  // namespace wavedecay
