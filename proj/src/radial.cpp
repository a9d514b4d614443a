#include "s2lab/radial.hpp"

#include <algorithm>
#include <array>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <numbers>
#include <string>

#include "s2lab/errors.hpp"

namespace s2lab {

namespace odeint = boost::numeric::odeint;

double cylinder_rhs(double h, double dh) {
  if (!(std::abs(dh) < 1.0)) throw DomainError("cylinder_rhs: |h'| >= 1 (degenerate ellipticity)");
  return std::exp(4.0 * h) / (dh * dh - 1.0);
}

double first_integral(double h, double dh) {
  const double d2 = dh * dh;
  return d2 * d2 - 2.0 * d2 - std::exp(4.0 * h);
}

double cone_order_from_first_integral(double k) {
  const double root = std::sqrt(std::max(0.0, 1.0 + k));
  const double a2 = std::max(0.0, 1.0 - root);
  return std::sqrt(a2) - 1.0;
}

double football_peak_height(double beta) {
  if (!(beta > -1.0 && beta <= 0.0)) throw DomainError("football_peak_height: beta must lie in (-1, 0]");
  const double a = 1.0 + beta;
  return 0.25 * std::log(2.0 * a * a - a * a * a * a);
}

RadialProfile::RadialProfile(std::vector<double> grid, std::vector<double> h, std::vector<double> dh,
                             double beta)
    : grid_(std::move(grid)), h_(std::move(h)), dh_(std::move(dh)), beta_(beta) {
  if (grid_.size() < 2) throw DomainError("RadialProfile: at least two grid points required");
  if (h_.size() != grid_.size() || dh_.size() != grid_.size())
    throw DomainError("RadialProfile: column lengths differ");
  for (std::size_t i = 0; i < grid_.size(); ++i) {
    if (!std::isfinite(grid_[i]) || !std::isfinite(h_[i]) || !std::isfinite(dh_[i]))
      throw DomainError("RadialProfile: non-finite value at row " + std::to_string(i));
    if (i > 0 && !(grid_[i] > grid_[i - 1]))
      throw DomainError("RadialProfile: grid must be strictly increasing");
    if (!(std::abs(dh_[i]) < 1.0))
      throw DomainError("RadialProfile: |h'| >= 1 at row " + std::to_string(i));
  }
  ddh_.resize(grid_.size());
  for (std::size_t i = 0; i < grid_.size(); ++i) ddh_[i] = cylinder_rhs(h_[i], dh_[i]);
}

RadialState RadialProfile::state_at(double t) const {
  if (!(t >= grid_.front() && t <= grid_.back()))
    throw DomainError("RadialProfile::state_at: t outside the tabulated range");
  auto it = std::upper_bound(grid_.begin(), grid_.end(), t);
  std::size_t i = it == grid_.begin() ? 0 : static_cast<std::size_t>(it - grid_.begin()) - 1;
  if (i >= grid_.size() - 1) i = grid_.size() - 2;

  const double d = grid_[i + 1] - grid_[i];
  const double s = (t - grid_[i]) / d;
  const double s2 = s * s;
  const double s3 = s2 * s;
  const double s4 = s3 * s;
  const double s5 = s4 * s;

  // Quintic Hermite basis and its s-derivative.
  const double b1 = s - 6.0 * s3 + 8.0 * s4 - 3.0 * s5;
  const double b2 = 0.5 * s2 - 1.5 * s3 + 1.5 * s4 - 0.5 * s5;
  const double b3 = 10.0 * s3 - 15.0 * s4 + 6.0 * s5;
  const double b4 = -4.0 * s3 + 7.0 * s4 - 3.0 * s5;
  const double b5 = 0.5 * s3 - s4 + 0.5 * s5;

  const double db1 = 1.0 - 18.0 * s2 + 32.0 * s3 - 15.0 * s4;
  const double db2 = s - 4.5 * s2 + 6.0 * s3 - 2.5 * s4;
  const double db3 = 30.0 * s2 - 60.0 * s3 + 30.0 * s4;
  const double db4 = -12.0 * s2 + 28.0 * s3 - 15.0 * s4;
  const double db5 = 1.5 * s2 - 4.0 * s3 + 2.5 * s4;

  const double y0 = h_[i], y1 = h_[i + 1];
  const double p0 = d * dh_[i], p1 = d * dh_[i + 1];
  const double q0 = d * d * ddh_[i], q1 = d * d * ddh_[i + 1];

  // b0 + b3 = 1 and db0 = -db3: use the node difference so that |h| >> d
  // does not cost digits in h' (which must stay below 1 near the ends).
  const double dy = y1 - y0;
  RadialState st;
  st.h = y0 + b3 * dy + b1 * p0 + b2 * q0 + b4 * p1 + b5 * q1;
  st.dh = (db3 * dy + db1 * p0 + db2 * q0 + db4 * p1 + db5 * q1) / d;
  st.ddh = cylinder_rhs(st.h, st.dh);
  return st;
}

std::vector<double> RadialProfile::first_integrals() const {
  std::vector<double> k(grid_.size());
  for (std::size_t i = 0; i < grid_.size(); ++i) k[i] = first_integral(h_[i], dh_[i]);
  return k;
}

namespace {

std::size_t half_count(double t_max, double step) {
  if (!(t_max > 0.0) || !(step > 0.0)) throw DomainError("profile: t_max and step must be positive");
  const auto n = static_cast<std::size_t>(std::llround(t_max / step));
  if (n < 1) throw DomainError("profile: step larger than t_max");
  return n;
}

// ln cosh t without overflow.
double log_cosh(double t) {
  const double a = std::abs(t);
  return a + std::log1p(std::exp(-2.0 * a)) - std::numbers::ln2;
}

using State = std::array<double, 2>;

struct CylinderSystem {
  void operator()(const State& x, State& dxdt, double /*t*/) const {
    dxdt[0] = x[1];
    dxdt[1] = std::exp(4.0 * x[0]) / (x[1] * x[1] - 1.0);
  }
};

// Integrates from the peak (t = 0) in the given direction, recording the
// state at t = direction * i * step for i = 1..n.
void integrate_branch(double h0, double direction, std::size_t n, const FootballOptions& opt,
                      std::vector<double>& h_out, std::vector<double>& dh_out) {
  auto stepper = odeint::make_controlled<odeint::runge_kutta_dopri5<State>>(opt.tol, opt.tol);
  const CylinderSystem system;
  State x{h0, 0.0};
  double t = 0.0;
  double dt = direction * std::min(opt.step, 1e-3);

  h_out.resize(n);
  dh_out.resize(n);
  for (std::size_t i = 1; i <= n; ++i) {
    const double target = direction * static_cast<double>(i) * opt.step;
    while (direction * (target - t) > 0.0) {
      double trial = dt;
      const bool clamped = direction * (t + trial - target) > 0.0;
      if (clamped) trial = target - t;
      const State before = x;
      const double t_before = t;
      const auto result = stepper.try_step(system, x, t, trial);
      if (result == odeint::fail) {
        if (std::abs(trial) < 1e-14 * std::max(1.0, std::abs(t)))
          throw IntegrationError("football_profile: step size underflow", t, x[0], x[1]);
        dt = trial;
        continue;
      }
      if (!std::isfinite(x[0]) || !std::isfinite(x[1]) || std::abs(x[1]) >= 1.0 - opt.guard)
        throw IntegrationError("football_profile: |h'| reached the degeneracy guard", t_before,
                               before[0], before[1]);
      if (clamped) {
        t = target;
        // Keep the larger of the free step and the stepper's suggestion.
        dt = direction * std::max(std::abs(dt), std::abs(trial));
      } else {
        dt = trial;
      }
    }
    h_out[i - 1] = x[0];
    dh_out[i - 1] = x[1];
  }
}

}  // namespace

RadialProfile sphere_profile(double t_max, double step) {
  const std::size_t n = half_count(t_max, step);
  const std::size_t rows = 2 * n + 1;
  std::vector<double> grid(rows), h(rows), dh(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    const double t = (static_cast<double>(r) - static_cast<double>(n)) * step;
    grid[r] = t;
    h[r] = -log_cosh(t);
    dh[r] = -std::tanh(t);
  }
  return RadialProfile(std::move(grid), std::move(h), std::move(dh), 0.0);
}

RadialProfile football_profile(double beta, const FootballOptions& options) {
  if (!(beta > -1.0 && beta <= 0.0)) throw DomainError("football_profile: beta must lie in (-1, 0]");
  if (!(options.tol > 0.0)) throw DomainError("football_profile: tol must be positive");
  const std::size_t n = half_count(options.t_max, options.step);
  const double h0 = football_peak_height(beta);

  std::vector<double> h_fwd, dh_fwd, h_bwd, dh_bwd;
  integrate_branch(h0, +1.0, n, options, h_fwd, dh_fwd);
  integrate_branch(h0, -1.0, n, options, h_bwd, dh_bwd);

  const std::size_t rows = 2 * n + 1;
  std::vector<double> grid(rows), h(rows), dh(rows);
  for (std::size_t r = 0; r < rows; ++r)
    grid[r] = (static_cast<double>(r) - static_cast<double>(n)) * options.step;
  for (std::size_t i = 0; i < n; ++i) {
    h[n - 1 - i] = h_bwd[i];
    dh[n - 1 - i] = dh_bwd[i];
    h[n + 1 + i] = h_fwd[i];
    dh[n + 1 + i] = dh_fwd[i];
  }
  h[n] = h0;
  dh[n] = 0.0;
  return RadialProfile(std::move(grid), std::move(h), std::move(dh), beta);
}

ConformalFactor reconstruct_factor(const RadialProfile& p) {
  auto prof = std::make_shared<const RadialProfile>(p);
  const double r_min = std::exp(p.t_min());
  const double r_max = std::exp(p.t_max());

  auto radius = [r_min, r_max](const Point4& x) {
    const double r = norm(x);
    if (!(r >= r_min && r <= r_max))
      throw DomainError("reconstructed factor: |x| outside the tabulated radial range");
    return r;
  };

  auto value = [prof, radius](const Point4& x) {
    const double t = std::log(radius(x));
    return prof->state_at(t).h - t;
  };
  auto gradient = [prof, radius](const Point4& x) {
    const double r = radius(x);
    const auto st = prof->state_at(std::log(r));
    const double ur = (st.dh - 1.0) / r;
    return (ur / r) * x;
  };
  auto hessian = [prof, radius](const Point4& x) {
    const double r = radius(x);
    const auto st = prof->state_at(std::log(r));
    const double ur_over_r = (st.dh - 1.0) / (r * r);
    const double urr = (st.ddh - st.dh + 1.0) / (r * r);
    SymmetricMatrix hm(4);
    for (int i = 0; i < 4; ++i)
      for (int j = i; j < 4; ++j) {
        const double ni = x[static_cast<std::size_t>(i)] / r;
        const double nj = x[static_cast<std::size_t>(j)] / r;
        hm.set(i, j, (i == j ? ur_over_r : 0.0) + (urr - ur_over_r) * ni * nj);
      }
    return hm;
  };
  return ConformalFactor(value, gradient, hessian, {Point4{}});
}

AsymptoticData measured_asymptotics(const RadialProfile& p, double decay_tol) {
  AsymptoticData a;
  a.slope_minus = p.dh().front();
  a.slope_plus = p.dh().back();
  a.beta_zero = a.slope_minus - 1.0;
  a.beta_infinity = -a.slope_plus - 1.0;
  a.sufficient_decay = std::exp(4.0 * p.h().front()) < decay_tol && std::exp(4.0 * p.h().back()) < decay_tol;

  // H = -div(grad u / |grad u|) = -(Lap u / |du| - du^T Hess u du / |du|^3).
  const auto u = reconstruct_factor(p);
  const double t = std::min(p.t_min() + 1.0, 0.5 * (p.t_min() + p.t_max()));
  const double r = std::exp(t);
  const Point4 x{r, 0.0, 0.0, 0.0};
  const Point4 g = u.gradient_at(x);
  const SymmetricMatrix hess = u.hessian_at(x);
  const double gn = norm(g);
  double ghg = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) ghg += g[static_cast<std::size_t>(i)] * hess(i, j) * g[static_cast<std::size_t>(j)];
  const double mean_curvature = -(hess.trace() / gn - ghg / (gn * gn * gn));
  a.mean_curvature_ratio = r * mean_curvature;
  return a;
}

}  // namespace s2lab
