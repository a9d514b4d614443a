#pragma once

// Level-set quantities of radial solutions.
//
// For a radial profile, u = h(t) - t is strictly decreasing in the cylinder
// time t = ln r, so L(t_u) = {u = t_u} is one round sphere of radius
// r = e^t and S(t_u) = {u >= t_u} is the punctured ball inside it. With
// w := 1 - h'(t) (so |grad u| = w / r and H = 3 / r), all averages are
// normalized by |S_3|:
//
//   Sigma0 = w^3,  Sigma1 = 6w^2 - 3w^3,  D = (3/2)w^2 - w^3/2,  z = -w,
//   B = r^4 / 4,   C = e^{4 t_u} B = e^{4h} / 4,   A = int_{-inf}^{t} e^{4h} dt,
//
// and M = (2/3)D + (4/9)Dz + z^4/36 - C. A is evaluated by quadrature, the
// rest in closed form at the located cylinder time.

#include <cstdint>
#include <span>
#include <vector>

#include "s2lab/conformal.hpp"
#include "s2lab/radial.hpp"

namespace s2lab {

struct LevelSetSummary {
  double t_u = 0.0;
  double A = 0.0;
  double B = 0.0;
  double C = 0.0;
  double D = 0.0;
  double z = 0.0;
  double sigma0 = 0.0;
  double sigma1 = 0.0;
  double M = 0.0;
  double cylinder_time = 0.0;  // t with u(t) = t_u
};

struct LimitErrors {
  double z_plus = 0.0;   // |z(last) - beta|
  double z_minus = 0.0;  // |z(first) + 2 + beta|
  double d_plus = 0.0;   // |D(last) - D(+inf)|
  double d_minus = 0.0;  // |D(first) - D(-inf)|
  double c_plus = 0.0;   // C(last)
  double c_minus = 0.0;  // C(first)
};

struct RelationReport {
  double max_abs_CA = 0.0;         // sup |C' - A' - 4C|
  double max_abs_AD = 0.0;         // sup |A - (2/3)(D - D(+inf))|
  double max_abs_AD_slope = 0.0;   // sup |A' - (2/3)D'|
  double min_M_slope = 0.0;        // inf M'
  double M_spread = 0.0;           // sup M - inf M over the whole grid
  double M_mean = 0.0;
  LimitErrors limits;
  std::size_t points = 0;
  std::size_t interior_points = 0;
};

struct LevelSetOptions {
  /// Step in t_u for central differences (one Richardson level).
  double diff_step = 1e-3;
  /// Fraction of the grid, centred, on which derivative checks run.
  double interior_fraction = 0.9;
};

/// D(+inf) = (3/2) beta^2 - |beta|^3 / 2 for one cone point of order beta.
double d_limit_plus(double beta);
/// D(-inf) = (3/2)(2 + beta)^2 - (2 + beta)^3 / 2.
double d_limit_minus(double beta);

/// Precomputes cell quadratures of e^{4h} so that level-set evaluations on
/// one profile share them.
class LevelSetEvaluator {
 public:
  explicit LevelSetEvaluator(const RadialProfile& p);

  const RadialProfile& profile() const noexcept { return profile_; }
  /// Range of u over the profile: [u(t_max), u(t_min)].
  double u_min() const noexcept { return u_min_; }
  double u_max() const noexcept { return u_max_; }

  /// Cylinder time with u(t) = t_u, by bisection. DomainError out of range.
  double cylinder_time(double t_u) const;

  LevelSetSummary summary_at(double t_u) const;

  /// int_{t0}^{t1} e^{4h} dt over the tabulated range (t0 <= t1).
  double weight_integral(double t0, double t1) const;
  /// A(hi) - A(lo), evaluated without cancellation.
  double a_increment(double t_u_lo, double t_u_hi) const;
  /// Asymptotic e^{4h} tails beyond the grid on the left and right.
  double left_tail() const noexcept { return left_tail_; }
  double right_tail() const noexcept { return right_tail_; }

 private:
  double partial_cell(std::size_t cell, double t0, double t1) const;

  RadialProfile profile_;
  std::vector<double> cell_integral_;
  std::vector<double> cumulative_;  // int_{t_min}^{grid[i]}
  double left_tail_ = 0.0;
  double right_tail_ = 0.0;
  double u_min_ = 0.0;
  double u_max_ = 0.0;
};

LevelSetSummary summary_at(const RadialProfile& p, double t_u);

/// Uniform t_u grid of n points spanning the part of the profile where
/// e^{4h} > 1e-14, pulled in by a few differencing steps at both ends.
std::vector<double> default_level_grid(const RadialProfile& p, std::size_t n = 400,
                                       const LevelSetOptions& options = {});

/// count t_u values strictly inside the band where e^{4h} >= min_weight *
/// max e^{4h}; used where derivatives of O(1) quantities are divided by
/// e^{4h}-sized ones.
std::vector<double> interior_levels(const RadialProfile& p, std::size_t count, double min_weight = 1e-6);

RelationReport relation_report(const RadialProfile& p, std::span<const double> grid,
                               const LevelSetOptions& options = {});
RelationReport relation_report(const LevelSetEvaluator& ev, std::span<const double> grid,
                               const LevelSetOptions& options = {});

/// Same rows as relation_report walks, for CSV export.
std::vector<LevelSetSummary> summaries(const LevelSetEvaluator& ev, std::span<const double> grid);

/// [z' * avg_L(sigma_1(A~) |grad u|) * (z A')^2] / [(3/2)(4C)^3]; equals 1 on
/// radial solutions. sigma_1(A~) is the trace of the tangential block of the
/// Schouten tensor of the reconstructed factor on the level sphere.
double key_inequality_ratio(const RadialProfile& p, double t_u, const LevelSetOptions& options = {});
double key_inequality_ratio(const LevelSetEvaluator& ev, const ConformalFactor& u, double t_u,
                            const LevelSetOptions& options = {});

/// (1 / |S_3|) int sigma_2 dv_g = int sigma_2(g) e^{4h} dt, with sigma_2(g)
/// evaluated from the reconstructed factor at the quadrature nodes and the
/// asymptotic tails added at both ends.
double gbc_from_profile(const RadialProfile& p);

struct MonteCarloEstimate {
  double a_est = 0.0;
  double a_stderr = 0.0;
  double b_est = 0.0;
  double b_stderr = 0.0;
  std::size_t samples = 0;
  std::size_t inside = 0;
};

/// Estimates A(t_u) = avg_{S(t_u)} e^{4u} and B(t_u) = avg_{S(t_u)} 1 by
/// uniform sampling of the box [-half_width, half_width]^4. Deterministic for
/// a given (seed, n_samples) regardless of thread count: samples are drawn in
/// fixed-size chunks, each from its own seeded substream. DomainError if
/// n_samples < 1e4 or u >= t_u somewhere on the box boundary.
MonteCarloEstimate montecarlo_volume_check(const ConformalFactor& u, double t_u, std::uint64_t seed,
                                           std::size_t n_samples, double half_width);

}  // namespace s2lab
