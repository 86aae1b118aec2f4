#pragma once

#include <array>
#include <span>
#include <vector>

#include "wavedecay/grid.hpp"
#include "wavedecay/medium.hpp"
#include "wavedecay/solver.hpp"

namespace wavedecay {

/// One row of the diagnostics time series.
struct DiagnosticsEntry {
  double t = 0.0;
  double E_u = 0.0;                  // total energy
  std::vector<double> E_R;           // local energy per R in R_list
  double l2_u = 0.0;                 // ||u(t)||
  double pair_ut_u = 0.0;            // (c^-2 u_t, u)
  double pair_ut_xgrad = 0.0;        // (c^-2 u_t, x . grad u)
  double S_accum = 0.0;              // int_0^t int c^-3 (x . grad c) |u_s|^2
  std::vector<double> weighted_ext;  // int_{|x|>=R} psi (c^-2 u_t^2 + |grad u|^2)
  double morawetz_residual = 0.0;
};

struct DiagnosticsRecord {
  DimMode mode = DimMode::Line1D;
  std::vector<double> R_list;
  std::vector<DiagnosticsEntry> entries;
};

/// A field and its time derivative at one instant, in stored form.
struct Snapshot {
  const Grid& grid;
  std::span<const double> speed;     // c at nodes
  std::span<const double> field;     // u, or w = r u on Radial3D
  std::span<const double> velocity;  // u_t, or w_t
  double t = 0.0;
};

/// Line densities (see integrate()) of the quantities entering the energy
/// functionals. Gradients are centred differences.
struct EnergyDensities {
  std::vector<double> energy;   // E(t, x) = 1/2 (c^-2 u_t^2 + |grad u|^2)
  std::vector<double> pair_u;   // c^-2 u_t u
  std::vector<double> pair_xg;  // c^-2 u_t x . grad u
  std::vector<double> mass;     // u^2
};

EnergyDensities energy_densities(const Snapshot& s);

/// All functionals of one snapshot. Every R must exceed L.
DiagnosticsEntry energy_report(const Snapshot& s, const WavespeedProfile& profile,
                               std::span<const double> R_list, double S_accum = 0.0);

/// Collects a DiagnosticsEntry at each sample and integrates the Morawetz
/// source term in time by the trapezoid rule at every step.
class DiagnosticsRecorder : public Observer {
 public:
  DiagnosticsRecorder(const WavespeedProfile& profile, std::vector<double> R_list);

  void on_step(const StepView& v) override;
  void on_sample(const StepView& v) override;

  const DiagnosticsRecord& record() const { return record_; }
  DiagnosticsRecord take() { return std::move(record_); }

 private:
  double source_integrand(const StepView& v);

  const WavespeedProfile& profile_;
  DiagnosticsRecord record_;
  std::vector<std::size_t> source_nodes_;
  std::vector<double> source_weights_;
  bool source_ready_ = false;
  double last_integrand_ = 0.0;
  double S_ = 0.0;
  std::vector<double> velocity_;
};

/// Initial pairing terms (n-1)/2 (c^-2 u1, u0) + (c^-2 u1, x . grad u0),
/// taken from the t = 0 entry.
double initial_pairing(const DiagnosticsRecord& rec);

/// t E_u(t) minus the right-hand side of the Morawetz identity, per entry.
/// Also stores the values into `rec`.
std::vector<double> morawetz_residual(DiagnosticsRecord& rec);
std::vector<double> morawetz_residual(const DiagnosticsRecord& rec, double initial_terms);

/// Weight functions of the weighted energy estimate.
struct Weights {
  double psi = 0.0;
  double psi_t = 0.0;
  std::array<double, 3> grad_psi{};  // undefined (NaN) at x = 0 for t > 0
  double phi = 0.0;
  double phi_t = 0.0;
};

/// psi(t, x) = 1 + |x| - t for |x| >= t, (1 + t - |x|)^-1 otherwise;
/// phi(t) = 1 + L - t for t < L, (1 + t - L)^-1 otherwise.
Weights weights(double t, std::span<const double> x, double L);
double psi(double t, double r);

struct WeightedEnergyResult {
  bool passed = true;
  double max_ratio = 0.0;
  std::vector<double> ratios;  // weighted_ext / ((2 + L) I0^2) per entry
};

/// Checks int_{|x|>=R} psi (c^-2 u_t^2 + |grad u|^2) <= (2 + L) I0^2 (1 + tol)
/// at every entry; R must be one of rec.R_list.
WeightedEnergyResult weighted_energy_check(const DiagnosticsRecord& rec, double I0_sq, double L, double R,
                            double tol = 0.02);

/// Smallest C making |(c^-2 u_t, x.grad u)| <= (R/c_m) E_R + C I0^2/2 + t int_{|x|>=R} E
/// hold at this entry. Requires t > R.
double pairing_constant(const DiagnosticsEntry& e, std::size_t r_index, double R, double I0_sq,
                     double c_m);

/// max_t |E_u(t) - E_u(0)| / E_u(0) (0 for a zero field).
double conservation_drift(const DiagnosticsRecord& rec);

std::size_t r_index(const DiagnosticsRecord& rec, double R);

}  // namespace wavedecay
