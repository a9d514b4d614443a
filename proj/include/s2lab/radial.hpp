#pragma once

// Radial constant-sigma_2 metrics on R^4 \ {0} in cylinder coordinates.
//
// Writing e^{2u} g_E = e^{2h(t)} (dt^2 + g_{S^3}) with t = ln|x|, i.e.
// u(x) = h(ln|x|) - ln|x|, the equation sigma_2(g^{-1}A_g) = 3/2 becomes
//
//     h''(h'^2 - 1) = e^{4h},
//
// whose first integral is K = h'^4 - 2h'^2 - e^{4h}. The round sphere is
// h = ln sech t (K = -1); a football of cone order beta has an even peak
// with h'(0) = 0, e^{4h(0)} = 2a^2 - a^4 and slopes h' -> +-a at -+infinity,
// a = 1 + beta. See docs/radial_reduction.md for the derivation.

#include <memory>
#include <span>
#include <vector>

#include "s2lab/conformal.hpp"

namespace s2lab {

struct RadialState {
  double h = 0.0;
  double dh = 0.0;
  double ddh = 0.0;  // from the ODE at (h, dh)
};

/// Tabulated cylinder-coordinate solution. Invariants checked on
/// construction: strictly increasing grid, finite values, |h'| < 1 (hence
/// h'' < 0 and u = h - t strictly decreasing).
class RadialProfile {
 public:
  RadialProfile(std::vector<double> grid, std::vector<double> h, std::vector<double> dh, double beta);

  std::size_t size() const noexcept { return grid_.size(); }
  std::span<const double> grid() const noexcept { return grid_; }
  std::span<const double> h() const noexcept { return h_; }
  std::span<const double> dh() const noexcept { return dh_; }
  /// Nominal cone order (both ends).
  double beta() const noexcept { return beta_; }
  double t_min() const noexcept { return grid_.front(); }
  double t_max() const noexcept { return grid_.back(); }

  /// Quintic Hermite interpolation of (h, h', h'') between nodes; h'' at the
  /// returned point is re-evaluated from the ODE. DomainError outside the grid.
  RadialState state_at(double t) const;
  double u_at(double t) const { return state_at(t).h - t; }

  /// K at every grid node.
  std::vector<double> first_integrals() const;

 private:
  std::vector<double> grid_;
  std::vector<double> h_;
  std::vector<double> dh_;
  std::vector<double> ddh_;
  double beta_;
};

/// h'' = e^{4h} / (h'^2 - 1). DomainError if |h'| >= 1.
double cylinder_rhs(double h, double dh);

/// K = h'^4 - 2h'^2 - e^{4h}.
double first_integral(double h, double dh);

/// Cone order recovered from a first-integral value: a^2 = 1 - sqrt(1 + K).
double cone_order_from_first_integral(double k);

/// Peak height h(0) = (1/4) ln(2a^2 - a^4), a = 1 + beta.
double football_peak_height(double beta);

/// Closed-form round sphere h = ln sech t on the grid {i * step}, |i| <= t_max / step.
RadialProfile sphere_profile(double t_max = 15.0, double step = 0.01);

struct FootballOptions {
  double t_max = 15.0;
  double tol = 1e-10;   // absolute and relative per-step error tolerance
  double step = 0.01;   // output grid spacing
  double guard = 1e-8;  // integration stops if |h'| >= 1 - guard
};

/// Integrates the ODE forward and backward from the even peak. Accepts
/// beta in (-1, 0]; beta = 0 reproduces the round sphere numerically.
/// Throws IntegrationError (with the last good state) on step underflow or
/// if |h'| approaches 1.
RadialProfile football_profile(double beta, const FootballOptions& options = {});

/// u(x) = h(ln|x|) - ln|x| with gradient and Hessian from the interpolated
/// (h, h') and the ODE h''. Singular point {0}; DomainError for |x| outside
/// [e^{t_min}, e^{t_max}].
ConformalFactor reconstruct_factor(const RadialProfile& p);

struct AsymptoticData {
  double slope_minus = 0.0;    // h' at t_min
  double slope_plus = 0.0;     // h' at t_max
  double beta_zero = 0.0;      // slope_minus - 1
  double beta_infinity = 0.0;  // -slope_plus - 1
  double mean_curvature_ratio = 0.0;  // r * H near the origin end, H = -div(grad u / |grad u|)
  bool sufficient_decay = true;       // e^{4h} < decay_tol at both ends
};

AsymptoticData measured_asymptotics(const RadialProfile& p, double decay_tol = 1e-10);

}  // namespace s2lab
