#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "wavedecay/grid.hpp"

namespace wavedecay {

enum class ProfileFamily { Constant, RadialBump, Custom };

/// Radially symmetric wavespeed c(|x|) with c = 1 outside |x| <= L.
///
/// The bump family is c(r) = 1 + a (1 - (r/L)^2)^3 on r <= L, which is C^2,
/// so its Lipschitz constant has the closed form |a|/L * 96/(25 sqrt 5).
struct WavespeedProfile {
  DimMode mode = DimMode::Line1D;
  ProfileFamily family = ProfileFamily::Constant;
  double L = 1.0;
  double a = 0.0;

  double c_sup = 1.0;       // sup c
  double c_m = 1.0;         // inf c
  double inv_c_sup = 1.0;   // sup 1/c
  double grad_c_sup = 0.0;  // sup |grad c|
  double eta = 0.0;         // 2 L sup(1/c) sup|grad c|

  std::function<double(double)> speed_fn;       // c(r)
  std::function<double(double)> derivative_fn;  // c'(r)

  double speed(double r) const { return speed_fn(r); }
  double radial_derivative(double r) const { return derivative_fn(r); }
  double speed_at(Coord p) const { return speed_fn(radius(p, mode)); }
  /// x . grad c at p, i.e. r c'(r).
  double x_dot_grad_c(Coord p) const {
    const double r = radius(p, mode);
    return r * derivative_fn(r);
  }
};

/// max over s in [0,1] of 6 s (1 - s^2)^2.
inline constexpr double kBumpSlopeMax = 1.7173002067198384;  // 96 / (25 sqrt 5)

WavespeedProfile make_profile(DimMode mode, ProfileFamily family, double L, double a = 0.0);

/// A profile from user-supplied c(r), c'(r) and declared constants; eta is
/// recomputed from them. Used for experiments with hand-built media.
WavespeedProfile make_custom_profile(DimMode mode, double L, std::function<double(double)> c,
                                     std::function<double(double)> dc, double c_sup, double c_m,
                                     double grad_c_sup);

struct EtaReport {
  double eta = 0.0;
  bool applicable = true;  // eta in [0, 1)
};

EtaReport compute_eta(const WavespeedProfile& profile);

struct ProfileReport {
  bool passed = true;
  std::string assumption;  // "(A-1)" or "(A-2)" when failed
  std::string message;
  double max_sampled_grad = 0.0;
  double grad_ratio = 0.0;  // max sampled |grad c| / grad_c_sup (0 if grad_c_sup == 0)
};

/// Dense sampling of c on [0, 3L] against the declared constants.
ProfileReport validate_profile(const WavespeedProfile& profile, std::size_t samples);

/// A (1 - |x - center|^2 / radius^2)^power bump, optionally differentiated
/// once along x (Line1D only). In Radial3D the center is a radial offset r0
/// and the bump is a function of |r - r0|; r0 must be 0 or >= radius so the
/// radial field is smooth at the origin.
struct BumpTerm {
  Coord center{};
  double radius = 1.0;
  double amplitude = 1.0;
  int power = 4;
  bool x_derivative = false;

  double value(Coord p, DimMode m) const;
  /// Gradient; in Radial3D, x holds d/dr.
  Coord gradient(Coord p, DimMode m) const;
  /// Radius of the smallest origin-centred ball containing the support.
  double reach(DimMode m) const;
};

/// Linear combination of bump terms.
struct Field {
  std::vector<BumpTerm> terms;

  double operator()(Coord p, DimMode m) const;
  Coord gradient(Coord p, DimMode m) const;
  double reach(DimMode m) const;
  bool empty() const { return terms.empty(); }
};

struct InitialData {
  DimMode mode = DimMode::Line1D;
  Field u0;
  Field u1;

  double support_radius() const;
};

void validate_data(const InitialData& data);

/// Weighted norms of the initial data, by trapezoidal quadrature on a grid
/// of spacing h (radial-3D integrates with the 4 pi r^2 measure).
struct DataNorms {
  double I0_sq = 0.0;          // int (1+|x|)(c^-2 u1^2 + |grad u0|^2)
  double J0_sq = 0.0;          // (n-1)/2 (c^-2 u1, u0) + (c^-2 u1, x.grad u0)
  double moment = 0.0;         // int u1 / c^2
  double l2_u1 = 0.0;          // ||u1||
  double l1_u1 = 0.0;          // ||u1||_1
  double l1_gamma_u1 = 0.0;    // int (1 + |x|^gamma) |u1|
  double l2_cinv_u0 = 0.0;     // ||c^-1 u0||
  double l2_u0 = 0.0;
  double energy = 0.0;         // E_u(0)
};

DataNorms init_data_norms(const InitialData& data, const WavespeedProfile& profile, double gamma,
                          double h = 0.005);

/// c^-2 moment of a field by the same quadrature as init_data_norms.
double field_moment(const Field& f, DimMode mode, const WavespeedProfile& profile, double reach,
                    double h);

/// Subtracts lambda * b from u1, b a reference bump centred at the origin
/// filling the data support, so that int u1 / c^2 = 0. Plane-2D only.
InitialData project_moment_zero(const InitialData& data, const WavespeedProfile& profile,
                                double h = 0.005);

/// Named data families accepted by the experiment config.
struct DataSpec {
  std::string family = "bump";  // bump | travelling | dipole
  double radius = 1.0;
  double u0_amplitude = 1.0;
  double u1_amplitude = 0.0;
  Coord center{};
  double offset = 1.5;  // dipole half-separation along x
  int power = 4;
  bool project_moment_zero = false;
};

InitialData make_data(DimMode mode, const DataSpec& spec);

}  // namespace wavedecay
