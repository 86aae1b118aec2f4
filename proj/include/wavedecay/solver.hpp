#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "wavedecay/grid.hpp"
#include "wavedecay/medium.hpp"

namespace wavedecay {

struct SolverConfig {
  double cfl = 0.5;                  // in (0, 0.9]
  double h = 0.01;
  double T_final = 10.0;
  std::size_t sample_stride = 10;    // observers sample every stride-th step
  double extent_rule = 1.05;         // causal margin multiplier
  std::size_t memory_cap_mb = 4096;
};

void validate(const SolverConfig& cfg);

/// Grid plus time step. The domain is large enough that nothing launched by
/// the data reaches the Dirichlet boundary before T_final.
struct Discretization {
  Grid grid;
  double dt = 0.0;
  std::size_t steps = 0;
};

/// dt = cfl h / (c_sup sqrt(d)), d the number of array axes.
double stable_dt(double cfl, double h, double c_sup, DimMode mode);

Discretization build_grid(const WavespeedProfile& profile, const InitialData& data,
                          const SolverConfig& cfg);

/// Two consecutive time levels. For Radial3D the stored field is w = r u.
struct FieldState {
  std::vector<double> prev;
  std::vector<double> curr;
  double t = 0.0;  // time of `curr`
  double dt = 0.0;
  std::size_t step = 0;  // index of `curr`
};

/// Explicit leapfrog for u_tt = c^2 Lap_h u with homogeneous Dirichlet data on
/// the outer boundary (and at r = 0 for the reduced radial field).
class WaveOperator {
 public:
  WaveOperator(const Grid& grid, const WavespeedProfile& profile, double dt);

  const Grid& grid() const { return grid_; }
  double dt() const { return dt_; }
  /// c(x) at every node.
  std::span<const double> speed() const { return speed_; }

  /// out = c^2 Lap_h in (boundary nodes set to zero).
  void apply(std::span<const double> in, std::span<double> out) const;

  /// next = 2 curr - prev + dt^2 c^2 Lap_h curr. Returns false if any value
  /// of `next` is not finite.
  bool advance(std::span<const double> prev, std::span<const double> curr,
               std::span<double> next) const;

 private:
  Grid grid_;
  double dt_;
  std::vector<double> speed_;
  std::vector<double> courant_sq_;  // (c dt / h)^2
};

/// Stored representation of a field sampled on the grid (r f for Radial3D).
std::vector<double> sample_stored(const Grid& grid, const Field& f);

/// Second-order Taylor start: prev = u0, curr = u0 + dt u1 + dt^2/2 c^2 Lap_h u0.
FieldState init_state(const InitialData& data, const WavespeedProfile& profile, const Grid& grid,
                      double dt);

/// One leapfrog step; throws InstabilityError on a non-finite value.
void step(FieldState& state, const WaveOperator& op);
FieldState step(const FieldState& state, const WavespeedProfile& profile, const Grid& grid);

/// Read-only view of the solver at step k, handed to observers. `next` is the
/// level k+1 so the velocity can be taken by centred difference; at k = 0 the
/// exact initial velocity is used.
struct StepView {
  const Grid& grid;
  const WaveOperator& op;
  double t;
  double dt;
  std::size_t step;
  std::span<const double> prev;  // empty at step 0
  std::span<const double> curr;
  std::span<const double> next;
  std::span<const double> initial_velocity;

  double velocity(std::size_t i) const {
    return step == 0 ? initial_velocity[i] : (next[i] - prev[i]) / (2.0 * dt);
  }
};

class Observer {
 public:
  virtual ~Observer() = default;
  /// Called at every step (including 0).
  virtual void on_step(const StepView&) {}
  /// Called at steps 0, stride, 2 stride, ... and at the final step.
  virtual void on_sample(const StepView&) {}
};

struct RunResult {
  Discretization disc;
  FieldState final_state;
  std::size_t samples = 0;
};

/// Advances from t = 0 to the first step at or beyond T_final; final_state.curr
/// is that last level. Observers are owned by the caller, so their records
/// survive an InstabilityError.
RunResult run(const InitialData& data, const WavespeedProfile& profile, const SolverConfig& cfg,
              std::span<Observer* const> observers);

/// Closed-form solution for c == 1: d'Alembert on line-1d, the odd extension
/// of w = r u on radial-3d. Returns u at the nodes of `grid`.
std::vector<double> oracle_solution(const InitialData& data, const WavespeedProfile& profile,
                                    double t, const Grid& grid);

/// Physical field u from the stored field (divides by r on Radial3D, using
/// the one-sided derivative of w at r = 0).
std::vector<double> physical_field(const Grid& grid, std::span<const double> stored);

}  // namespace wavedecay
