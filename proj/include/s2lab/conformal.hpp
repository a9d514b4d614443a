#pragma once

// Schouten tensor and sigma_k curvature of conformally flat metrics
// g = e^{2u} g_E on R^4, with analytic or finite-difference derivative
// oracles for u.

#include <array>
#include <functional>
#include <random>
#include <span>
#include <vector>

#include "s2lab/symfunc.hpp"

namespace s2lab {

using Point4 = std::array<double, 4>;

double dot(const Point4& a, const Point4& b) noexcept;
double norm(const Point4& a) noexcept;
Point4 operator+(const Point4& a, const Point4& b) noexcept;
Point4 operator-(const Point4& a, const Point4& b) noexcept;
Point4 operator*(double s, const Point4& a) noexcept;

/// The conformal factor u together with value, gradient and Hessian oracles.
///
/// Oracles must be pure (safe for concurrent calls). Evaluation at one of
/// the singular points raises DomainError.
class ConformalFactor {
 public:
  using ValueFn = std::function<double(const Point4&)>;
  using GradientFn = std::function<Point4(const Point4&)>;
  using HessianFn = std::function<SymmetricMatrix(const Point4&)>;

  ConformalFactor(ValueFn value, GradientFn gradient, HessianFn hessian,
                  std::vector<Point4> singular_points = {});

  double value_at(const Point4& x) const;
  Point4 gradient_at(const Point4& x) const;
  SymmetricMatrix hessian_at(const Point4& x) const;

  std::span<const Point4> singular_points() const noexcept { return singular_; }
  bool is_singular(const Point4& x) const noexcept;

  const ValueFn& value_oracle() const noexcept { return value_; }

 private:
  void check(const Point4& x) const;

  ValueFn value_;
  GradientFn gradient_;
  HessianFn hessian_;
  std::vector<Point4> singular_;
};

enum class DifferenceScheme { Central, Richardson };

/// Step is relative: the absolute step at x is step * (1 + |x|).
struct FiniteDifferenceConfig {
  double step = 1e-4;
  DifferenceScheme scheme = DifferenceScheme::Richardson;

  double absolute_step(const Point4& x) const noexcept { return step * (1.0 + norm(x)); }
};

/// Default for derivative oracles built purely from function values: second
/// differences lose about eps/step^2, so a coarser step than the divergence
/// residual's default is used.
inline constexpr FiniteDifferenceConfig kValueOracleDifferences{1e-3, DifferenceScheme::Richardson};

// Factories -----------------------------------------------------------------

ConformalFactor constant_factor(double c);
/// u(x) = a . x
ConformalFactor linear_factor(const Point4& a);
/// u(x) = ln(2 / (1 + |x|^2)), the round unit sphere.
ConformalFactor round_sphere_factor();

/// u(x) = c + b.x + (1/2) x^T Q x + (1/6) T(x, x, x) with T fully symmetric.
struct CubicPolynomial {
  double c = 0.0;
  Point4 b{};
  std::array<std::array<double, 4>, 4> q{};
  std::array<std::array<std::array<double, 4>, 4>, 4> t{};

  double value(const Point4& x) const noexcept;
  Point4 gradient(const Point4& x) const noexcept;
  SymmetricMatrix hessian(const Point4& x) const;

  /// Coefficients uniform in [-scale, scale], then symmetrized.
  static CubicPolynomial random(std::mt19937_64& rng, double scale = 0.5);
};

ConformalFactor polynomial_factor(const CubicPolynomial& p);

/// Wraps a scalar function with central-difference gradient and Hessian
/// oracles. Mixed partials use the four-point stencil, which is the average
/// of the (i, j) and (j, i) one-sided stencils, so the Hessian is symmetric.
ConformalFactor finite_difference_factor(std::function<double(const Point4&)> f,
                                         FiniteDifferenceConfig cfg = kValueOracleDifferences,
                                         std::vector<Point4> singular_points = {});

// Curvature -------------------------------------------------------------------

/// A_g = -Hess u + du (x) du - (|du|^2 / 2) g_E in Euclidean coordinates, not
/// multiplied by e^{-2u}.
SymmetricMatrix schouten_flat(const ConformalFactor& u, const Point4& x);

/// sigma_k of A_g measured with respect to g: e^{-2ku(x)} sigma_k(schouten_flat).
double sigma_k_curvature(const ConformalFactor& u, const Point4& x, int k);

struct DivergenceDiagnostics {
  double lhs = 0.0;              // sigma_2(schouten_flat(u, x))
  double rhs = 0.0;              // -(1/2) d_i ((-Lap u delta_ij + u_ij - u_i u_j) u_j)
  double residual = 0.0;         // |lhs - rhs| at the configured step
  double coarse_residual = 0.0;  // same with twice the step
  bool resolved = true;          // refinement did not increase the residual
};

/// |sigma_2(A) - divergence form| with the flux differentiated numerically.
double divergence_residual(const ConformalFactor& u, const Point4& x,
                           FiniteDifferenceConfig cfg = {});

DivergenceDiagnostics divergence_diagnostics(const ConformalFactor& u, const Point4& x,
                                             FiniteDifferenceConfig cfg = {});

/// Observed order log2(r(step) / r(step / 2)) of the divergence residual,
/// aggregated over the given points. +infinity if the refined residual is 0.
double divergence_convergence_order(const ConformalFactor& u, std::span<const Point4> points,
                                    FiniteDifferenceConfig cfg);

}  // namespace s2lab
