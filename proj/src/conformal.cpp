#include "s2lab/conformal.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "s2lab/errors.hpp"

namespace s2lab {

double dot(const Point4& a, const Point4& b) noexcept {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3];
}

double norm(const Point4& a) noexcept { return std::sqrt(dot(a, a)); }

Point4 operator+(const Point4& a, const Point4& b) noexcept {
  return {a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]};
}

Point4 operator-(const Point4& a, const Point4& b) noexcept {
  return {a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]};
}

Point4 operator*(double s, const Point4& a) noexcept {
  return {s * a[0], s * a[1], s * a[2], s * a[3]};
}

namespace {

Point4 unit(int i, double h) {
  Point4 e{};
  e[static_cast<std::size_t>(i)] = h;
  return e;
}

}  // namespace

ConformalFactor::ConformalFactor(ValueFn value, GradientFn gradient, HessianFn hessian,
                                 std::vector<Point4> singular_points)
    : value_(std::move(value)),
      gradient_(std::move(gradient)),
      hessian_(std::move(hessian)),
      singular_(std::move(singular_points)) {}

bool ConformalFactor::is_singular(const Point4& x) const noexcept {
  for (const auto& p : singular_)
    if (norm(x - p) <= 1e-12 * (1.0 + norm(p))) return true;
  return false;
}

void ConformalFactor::check(const Point4& x) const {
  if (is_singular(x)) throw DomainError("conformal factor evaluated at a singular point");
}

double ConformalFactor::value_at(const Point4& x) const {
  check(x);
  return value_(x);
}

Point4 ConformalFactor::gradient_at(const Point4& x) const {
  check(x);
  return gradient_(x);
}

SymmetricMatrix ConformalFactor::hessian_at(const Point4& x) const {
  check(x);
  return hessian_(x);
}

ConformalFactor constant_factor(double c) {
  return ConformalFactor([c](const Point4&) { return c; }, [](const Point4&) { return Point4{}; },
                         [](const Point4&) { return SymmetricMatrix::zero(4); });
}

ConformalFactor linear_factor(const Point4& a) {
  return ConformalFactor([a](const Point4& x) { return dot(a, x); },
                         [a](const Point4&) { return a; },
                         [](const Point4&) { return SymmetricMatrix::zero(4); });
}

ConformalFactor round_sphere_factor() {
  auto value = [](const Point4& x) { return std::log(2.0 / (1.0 + dot(x, x))); };
  auto gradient = [](const Point4& x) { return (-2.0 / (1.0 + dot(x, x))) * x; };
  auto hessian = [](const Point4& x) {
    const double q = 1.0 + dot(x, x);
    SymmetricMatrix h(4);
    for (int i = 0; i < 4; ++i)
      for (int j = i; j < 4; ++j) {
        const double xi = x[static_cast<std::size_t>(i)];
        const double xj = x[static_cast<std::size_t>(j)];
        h.set(i, j, (i == j ? -2.0 / q : 0.0) + 4.0 * xi * xj / (q * q));
      }
    return h;
  };
  return ConformalFactor(value, gradient, hessian);
}

double CubicPolynomial::value(const Point4& x) const noexcept {
  double v = c;
  for (std::size_t i = 0; i < 4; ++i) {
    v += b[i] * x[i];
    for (std::size_t j = 0; j < 4; ++j) {
      v += 0.5 * q[i][j] * x[i] * x[j];
      for (std::size_t k = 0; k < 4; ++k) v += t[i][j][k] * x[i] * x[j] * x[k] / 6.0;
    }
  }
  return v;
}

Point4 CubicPolynomial::gradient(const Point4& x) const noexcept {
  Point4 g = b;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      g[i] += q[i][j] * x[j];
      for (std::size_t k = 0; k < 4; ++k) g[i] += 0.5 * t[i][j][k] * x[j] * x[k];
    }
  return g;
}

SymmetricMatrix CubicPolynomial::hessian(const Point4& x) const {
  SymmetricMatrix h(4);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = i; j < 4; ++j) {
      double v = q[i][j];
      for (std::size_t k = 0; k < 4; ++k) v += t[i][j][k] * x[k];
      h.set(static_cast<int>(i), static_cast<int>(j), v);
    }
  return h;
}

CubicPolynomial CubicPolynomial::random(std::mt19937_64& rng, double scale) {
  std::uniform_real_distribution<double> dist(-scale, scale);
  CubicPolynomial p;
  p.c = dist(rng);
  for (auto& v : p.b) v = dist(rng);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = i; j < 4; ++j) p.q[i][j] = p.q[j][i] = dist(rng);
  // Draw one coefficient per multiset {i <= j <= k} and copy it to every
  // permutation so T is fully symmetric.
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = i; j < 4; ++j)
      for (std::size_t k = j; k < 4; ++k) {
        const double v = dist(rng);
        p.t[i][j][k] = p.t[i][k][j] = p.t[j][i][k] = v;
        p.t[j][k][i] = p.t[k][i][j] = p.t[k][j][i] = v;
      }
  return p;
}

ConformalFactor polynomial_factor(const CubicPolynomial& p) {
  return ConformalFactor([p](const Point4& x) { return p.value(x); },
                         [p](const Point4& x) { return p.gradient(x); },
                         [p](const Point4& x) { return p.hessian(x); });
}

ConformalFactor finite_difference_factor(std::function<double(const Point4&)> f,
                                         FiniteDifferenceConfig cfg,
                                         std::vector<Point4> singular_points) {
  if (!(cfg.step > 0.0)) throw DomainError("finite_difference_factor: step must be positive");

  auto gradient = [f, cfg](const Point4& x) {
    const double h = cfg.absolute_step(x);
    auto central = [&](int i, double s) {
      return (f(x + unit(i, s)) - f(x - unit(i, s))) / (2.0 * s);
    };
    Point4 g{};
    for (int i = 0; i < 4; ++i) {
      g[static_cast<std::size_t>(i)] = cfg.scheme == DifferenceScheme::Central
                                           ? central(i, h)
                                           : (4.0 * central(i, 0.5 * h) - central(i, h)) / 3.0;
    }
    return g;
  };

  auto hessian = [f, cfg](const Point4& x) {
    const double h = cfg.absolute_step(x);
    const double f0 = f(x);
    auto second = [&](int i, int j, double s) {
      if (i == j) return (f(x + unit(i, s)) - 2.0 * f0 + f(x - unit(i, s))) / (s * s);
      const Point4 ei = unit(i, s);
      const Point4 ej = unit(j, s);
      return (f(x + ei + ej) - f(x + ei - ej) - f(x - ei + ej) + f(x - ei - ej)) / (4.0 * s * s);
    };
    SymmetricMatrix hm(4);
    for (int i = 0; i < 4; ++i)
      for (int j = i; j < 4; ++j) {
        const double v = cfg.scheme == DifferenceScheme::Central
                             ? second(i, j, h)
                             : (4.0 * second(i, j, 0.5 * h) - second(i, j, h)) / 3.0;
        hm.set(i, j, v);
      }
    return hm;
  };

  return ConformalFactor(std::move(f), gradient, hessian, std::move(singular_points));
}

SymmetricMatrix schouten_flat(const ConformalFactor& u, const Point4& x) {
  const Point4 g = u.gradient_at(x);
  const SymmetricMatrix hess = u.hessian_at(x);
  const double g2 = dot(g, g);
  SymmetricMatrix a(4);
  for (int i = 0; i < 4; ++i)
    for (int j = i; j < 4; ++j) {
      double v = -hess(i, j) + g[static_cast<std::size_t>(i)] * g[static_cast<std::size_t>(j)];
      if (i == j) v -= 0.5 * g2;
      a.set(i, j, v);
    }
  return a;
}

double sigma_k_curvature(const ConformalFactor& u, const Point4& x, int k) {
  if (k < 1 || k > 4) throw DomainError("sigma_k_curvature: k must be in [1, 4]");
  const double s = sigma_k_matrix(schouten_flat(u, x), k);
  return std::exp(-2.0 * k * u.value_at(x)) * s;
}

namespace {

// Flux F_i = (-Lap u delta_ij + u_ij - u_i u_j) u_j; only component i is needed
// for d_i F_i.
double flux_component(const ConformalFactor& u, const Point4& y, int i) {
  const Point4 g = u.gradient_at(y);
  const SymmetricMatrix h = u.hessian_at(y);
  const double g2 = dot(g, g);
  const auto ii = static_cast<std::size_t>(i);
  double hg = 0.0;
  for (int j = 0; j < 4; ++j) hg += h(i, j) * g[static_cast<std::size_t>(j)];
  return -h.trace() * g[ii] + hg - g[ii] * g2;
}

double flux_divergence(const ConformalFactor& u, const Point4& x, double h, DifferenceScheme scheme) {
  auto central = [&](int i, double s) {
    return (flux_component(u, x + unit(i, s), i) - flux_component(u, x - unit(i, s), i)) / (2.0 * s);
  };
  double div = 0.0;
  for (int i = 0; i < 4; ++i) {
    div += scheme == DifferenceScheme::Central ? central(i, h)
                                               : (4.0 * central(i, 0.5 * h) - central(i, h)) / 3.0;
  }
  return div;
}

}  // namespace

DivergenceDiagnostics divergence_diagnostics(const ConformalFactor& u, const Point4& x,
                                             FiniteDifferenceConfig cfg) {
  if (!(cfg.step > 0.0)) throw DomainError("divergence_residual: step must be positive");
  const double h = cfg.absolute_step(x);
  DivergenceDiagnostics d;
  d.lhs = sigma_k_matrix(schouten_flat(u, x), 2);
  d.rhs = -0.5 * flux_divergence(u, x, h, cfg.scheme);
  d.residual = std::abs(d.lhs - d.rhs);
  d.coarse_residual = std::abs(d.lhs + 0.5 * flux_divergence(u, x, 2.0 * h, cfg.scheme));
  // Below ~1e-12 both residuals are rounding noise and the comparison says nothing.
  d.resolved = d.residual <= d.coarse_residual || d.coarse_residual < 1e-12;
  return d;
}

double divergence_residual(const ConformalFactor& u, const Point4& x, FiniteDifferenceConfig cfg) {
  return divergence_diagnostics(u, x, cfg).residual;
}

double divergence_convergence_order(const ConformalFactor& u, std::span<const Point4> points,
                                    FiniteDifferenceConfig cfg) {
  double coarse = 0.0;
  double fine = 0.0;
  FiniteDifferenceConfig half = cfg;
  half.step = 0.5 * cfg.step;
  for (const auto& x : points) {
    coarse += divergence_residual(u, x, cfg);
    fine += divergence_residual(u, x, half);
  }
  if (fine == 0.0) return std::numeric_limits<double>::infinity();
  return std::log2(coarse / fine);
}

}  // namespace s2lab
