#include "s2lab/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <memory>
#include <numeric>
#include <random>

#include "s2lab/conformal.hpp"
#include "s2lab/divisor.hpp"
#include "s2lab/errors.hpp"
#include "s2lab/kernels.hpp"
#include "s2lab/levelset.hpp"
#include "s2lab/radial.hpp"
#include "s2lab/symfunc.hpp"

namespace s2lab {

namespace {

using kernels::Isa;
using kernels::SymmetricBatch;
using kernels::active_isa;
using kernels::sigma_batch;

constexpr double kRadialBetas[] = {-0.2, -0.5, -0.8};

std::string sci(double v) {
  if (v > 0.0) {
    const double e = std::round(std::log10(v));
    if (std::pow(10.0, e) == v) return "1e" + std::to_string(static_cast<int>(e));
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::string fixed6(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string tag(double beta) {
  if (beta == 0.0) return "sphere";
  char buf[32];
  std::snprintf(buf, sizeof buf, "b=%g", beta);
  return buf;
}

// measured < threshold
Check bound(std::string name, std::string module, int criterion, double measured, double threshold) {
  Check c;
  c.label = name + "=" + sci(measured) + "<" + sci(threshold);
  c.name = std::move(name);
  c.module = std::move(module);
  c.criterion = criterion;
  c.measured = measured;
  c.threshold = threshold;
  c.passed = std::isfinite(measured) && measured < threshold;
  return c;
}

// |value - expected| < tol; measured is the value itself.
Check target(std::string name, std::string module, int criterion, double value, double expected, double tol) {
  Check c;
  c.label = name + "=" + fixed6(value) + "±" + sci(tol);
  c.name = std::move(name);
  c.module = std::move(module);
  c.criterion = criterion;
  c.measured = value;
  c.threshold = tol;
  c.passed = std::isfinite(value) && std::abs(value - expected) < tol;
  return c;
}

// Profiles and derived data shared between criteria of one run.
class Lab {
 public:
  explicit Lab(const VerifyOptions& options) : options_(options) {}

  const VerifyOptions& options() const { return options_; }

  const RadialProfile& profile(double beta, double t_max = 15.0) {
    const auto key = std::make_pair(beta, t_max);
    auto it = profiles_.find(key);
    if (it == profiles_.end()) {
      FootballOptions fo;
      fo.t_max = t_max;
      auto p = beta == 0.0 ? sphere_profile(t_max) : football_profile(beta, fo);
      it = profiles_.emplace(key, std::make_unique<RadialProfile>(std::move(p))).first;
    }
    return *it->second;
  }

  const LevelSetEvaluator& evaluator(double beta) {
    auto it = evaluators_.find(beta);
    if (it == evaluators_.end())
      it = evaluators_.emplace(beta, std::make_unique<LevelSetEvaluator>(profile(beta))).first;
    return *it->second;
  }

  const RelationReport& report(double beta) {
    auto it = reports_.find(beta);
    if (it == reports_.end()) {
      const auto grid = default_level_grid(profile(beta));
      it = reports_.emplace(beta, relation_report(evaluator(beta), grid)).first;
    }
    return it->second;
  }

  std::mt19937_64 rng(std::uint64_t stream) const { return std::mt19937_64(options_.seed * 1000003ULL + stream); }

  std::vector<double> radial_betas() const { return {0.0, kRadialBetas[0], kRadialBetas[1], kRadialBetas[2]}; }

 private:
  VerifyOptions options_;
  std::map<std::pair<double, double>, std::unique_ptr<RadialProfile>> profiles_;
  std::map<double, std::unique_ptr<LevelSetEvaluator>> evaluators_;
  std::map<double, RelationReport> reports_;
};

Point4 random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Point4 x;
  for (auto& c : x) c = n(rng);
  return (1.0 / norm(x)) * x;
}

// Cylinder-time band where e^{4h} >= rel * peak: sigma_2 of A is a
// cancellation of O(1) terms down to e^{4h} size, so points far in the
// tails carry no digits.
std::pair<double, double> sampling_band(const RadialProfile& p, double rel) {
  const auto h = p.h();
  const auto grid = p.grid();
  const double peak = *std::max_element(h.begin(), h.end());
  const double floor = peak + 0.25 * std::log(rel);
  double lo = grid.back(), hi = grid.front();
  for (std::size_t i = 0; i < h.size(); ++i)
    if (h[i] >= floor) {
      lo = std::min(lo, grid[i]);
      hi = std::max(hi, grid[i]);
    }
  return {lo, hi};
}

// ---------------------------------------------------------------------------

std::vector<Check> criterion1(Lab& lab) {
  return {target("gbc_sphere", "levelset", 1, gbc_from_profile(lab.profile(0.0)), 2.0, 1e-6)};
}

std::vector<Check> criterion2(Lab& lab) {
  std::vector<Check> out;
  for (double b : kRadialBetas) {
    const double expected = 2.0 - (b * b * b + 3.0 * b * b);
    out.push_back(target("gbc_football_" + tag(b), "levelset", 2, gbc_from_profile(lab.profile(b)), expected, 1e-6));
    out.push_back(
        bound("gbc_total_vs_closed_form_" + tag(b), "divisor", 2, std::abs(gbc_total(ConicDivisor({b, b})) - expected), 1e-12));
  }
  return out;
}

std::vector<Check> criterion3(Lab& lab) {
  std::vector<Check> out;
  auto rng = lab.rng(3);
  for (double b : kRadialBetas) {
    const auto& p = lab.profile(b);
    const auto u = reconstruct_factor(p);
    const auto [lo, hi] = sampling_band(p, 1e-6);
    std::uniform_real_distribution<double> t_dist(lo, hi);
    double worst = 0.0;
    int outside = 0;
    for (int k = 0; k < 20; ++k) {
      const Point4 x = std::exp(t_dist(rng)) * random_unit(rng);
      worst = std::max(worst, std::abs(sigma_k_curvature(u, x, 2) - 1.5));
      if (!in_cone(schouten_flat(u, x), 2)) ++outside;
    }
    out.push_back(bound("sigma2_constancy_" + tag(b), "radial", 3, worst, 1e-6));
    out.push_back(bound("cone_C2_misses_" + tag(b), "radial", 3, outside, 0.5));
  }
  return out;
}

std::vector<Check> criterion4(Lab& lab) {
  std::vector<Check> out;
  for (double b : {-0.1, -0.3, -0.5, -0.7, -0.9}) {
    const auto& p = lab.profile(b);
    const auto k = p.first_integrals();
    const double k0 = k[k.size() / 2];
    double drift = 0.0;
    for (double v : k) drift = std::max(drift, std::abs(v - k0));
    out.push_back(bound("first_integral_drift_" + tag(b), "radial", 4, drift, 1e-8));
  }
  return out;
}

std::vector<Check> criterion5(Lab& lab) {
  std::vector<Check> out;
  for (double b : lab.radial_betas()) {
    const auto& r = lab.report(b);
    out.push_back(bound("C_A_relation_" + tag(b), "levelset", 5, r.max_abs_CA, 1e-6));
    out.push_back(bound("A_D_relation_" + tag(b), "levelset", 5, r.max_abs_AD, 1e-6));
  }
  return out;
}

std::vector<Check> criterion6(Lab& lab) {
  std::vector<Check> out;
  for (double b : lab.radial_betas()) {
    const auto& r = lab.report(b);
    const double expected = football_invariant(b);
    out.push_back(bound("M_spread_" + tag(b), "levelset", 6, r.M_spread, 1e-6));
    out.push_back(target("M_value_" + tag(b), "levelset", 6, r.M_mean, expected, 1e-6));
    out.push_back(bound("M_slope_deficit_" + tag(b), "levelset", 6, std::max(0.0, -r.min_M_slope), 1e-8));

    // Closed-form M against (K + 1) / 4 at every node.
    const auto& p = lab.profile(b);
    double gap = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      const double w = 1.0 - p.dh()[i];
      const double e4h = std::exp(4.0 * p.h()[i]);
      const double m = w * w - w * w * w + 0.25 * w * w * w * w - 0.25 * e4h;
      gap = std::max(gap, std::abs(m - 0.25 * (first_integral(p.h()[i], p.dh()[i]) + 1.0)));
    }
    out.push_back(bound("M_equals_K_plus_1_over_4_" + tag(b), "levelset", 6, gap, 1e-10));

    const double dp = d_limit_plus(b);
    const double m_inf = (2.0 / 3.0) * dp + (4.0 / 9.0) * dp * b + b * b * b * b / 36.0;
    out.push_back(bound("M_limit_vs_invariant_" + tag(b), "levelset", 6, std::abs(m_inf - expected), 1e-12));
  }
  return out;
}

std::vector<Check> criterion7(Lab& lab) {
  std::vector<Check> out;
  for (double b : lab.radial_betas()) {
    const auto& l = lab.report(b).limits;
    out.push_back(bound("z_limit_plus_" + tag(b), "levelset", 7, l.z_plus, 1e-5));
    out.push_back(bound("z_limit_minus_" + tag(b), "levelset", 7, l.z_minus, 1e-5));
    out.push_back(bound("D_limit_plus_" + tag(b), "levelset", 7, l.d_plus, 1e-5));
    out.push_back(bound("D_limit_minus_" + tag(b), "levelset", 7, l.d_minus, 1e-5));
    if (b == -0.8) {
      // e^{4h} ~ e^{-0.8|t|} is still ~1e-6 at |t| = 15; C needs a longer cylinder.
      const auto& p = lab.profile(b, 40.0);
      const auto rep = relation_report(p, default_level_grid(p));
      out.push_back(bound("C_limit_plus_" + tag(b) + "_tmax=40", "levelset", 7, rep.limits.c_plus, 1e-10));
      out.push_back(bound("C_limit_minus_" + tag(b) + "_tmax=40", "levelset", 7, rep.limits.c_minus, 1e-10));
    } else {
      out.push_back(bound("C_limit_plus_" + tag(b), "levelset", 7, l.c_plus, 1e-10));
      out.push_back(bound("C_limit_minus_" + tag(b), "levelset", 7, l.c_minus, 1e-10));
    }
    if (b < 0.0)
      out.push_back(bound("D_limit_equals_defect_" + tag(b), "levelset", 7, std::abs(d_limit_plus(b) - defect(b)), 1e-14));
  }
  return out;
}

std::vector<Check> criterion8(Lab& lab) {
  std::vector<Check> out;
  for (double b : lab.radial_betas()) {
    const auto& p = lab.profile(b);
    const auto& ev = lab.evaluator(b);
    const auto u = reconstruct_factor(p);
    double worst = 0.0;
    for (double t_u : interior_levels(p, 20)) worst = std::max(worst, std::abs(key_inequality_ratio(ev, u, t_u) - 1.0));
    out.push_back(bound("key_ratio_" + tag(b), "levelset", 8, worst, 1e-4));
  }
  return out;
}

std::vector<Check> criterion9(Lab& lab) {
  auto rng = lab.rng(9);
  std::uniform_real_distribution<double> coord(-1.0, 1.0);
  std::vector<Point4> points(50);
  for (auto& x : points)
    for (auto& c : x) c = coord(rng);

  std::vector<ConformalFactor> factors;
  for (int i = 0; i < 10; ++i) factors.push_back(polynomial_factor(CubicPolynomial::random(rng)));
  factors.push_back(round_sphere_factor());

  double worst = 0.0;
  double min_order = std::numeric_limits<double>::infinity();
  const FiniteDifferenceConfig coarse{0.05, DifferenceScheme::Richardson};
  for (const auto& u : factors) {
    for (const auto& x : points) worst = std::max(worst, divergence_residual(u, x));
    min_order = std::min(min_order, divergence_convergence_order(u, points, coarse));
  }
  Check order = bound("divergence_convergence_order", "conformal", 9, -min_order, -2.0);
  order.measured = min_order;
  order.threshold = 2.0;
  order.label = "divergence_convergence_order=" + fixed6(min_order) + ">=2";
  order.passed = min_order >= 2.0;
  return {bound("divergence_residual", "conformal", 9, worst, 1e-5), order};
}

std::vector<Check> criterion10(Lab& lab) {
  std::vector<Check> out;
  auto rng = lab.rng(10);
  std::uniform_real_distribution<double> beta(-0.99, -0.01);

  int not_critical = 0;
  for (int i = 0; i < 50; ++i) {
    const double b = beta(rng);
    if (classify(ConicDivisor({b, b})).kind != CriticalityKind::Critical) ++not_critical;
  }
  out.push_back(bound("symmetric_pairs_not_critical", "divisor", 10, not_critical, 0.5));

  const auto c = classify(ConicDivisor({-0.3, -0.6}));
  const bool ok = c.kind == CriticalityKind::Supercritical && c.witness_index == 2u;
  Check kind = bound("pair_-0.3_-0.6_supercritical_witness_2", "divisor", 10, ok ? 0.0 : 1.0, 0.5);
  out.push_back(kind);
  out.push_back(bound("pair_-0.3_-0.6_lhs_error", "divisor", 10, std::abs(c.lhs - 0.2646), 1e-12));
  out.push_back(bound("pair_-0.3_-0.6_rhs_error", "divisor", 10, std::abs(c.rhs - 0.0975375), 1e-12));

  const auto single = classify(ConicDivisor({-0.5}));
  out.push_back(bound("single_-0.5_supercritical", "divisor", 10,
                      single.kind == CriticalityKind::Supercritical ? 0.0 : 1.0, 0.5));

  std::uniform_int_distribution<int> size(1, 6);
  int mismatches = 0;
  for (int i = 0; i < 100; ++i) {
    std::vector<double> betas(static_cast<std::size_t>(size(rng)));
    for (auto& b : betas) b = beta(rng);
    auto shuffled = betas;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    const auto a = classify(ConicDivisor(betas));
    const auto s = classify(ConicDivisor(shuffled));
    const bool same = a.kind == s.kind && a.lhs == s.lhs && a.rhs == s.rhs &&
                      (!a.witness_index || betas[*a.witness_index - 1] == shuffled[*s.witness_index - 1]);
    if (!same) ++mismatches;
  }
  out.push_back(bound("permutation_invariance_mismatches", "divisor", 10, mismatches, 0.5));
  return out;
}

SymmetricMatrix random_symmetric(int dim, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> e(-1.0, 1.0);
  SymmetricMatrix m(dim);
  for (int i = 0; i < dim; ++i)
    for (int j = i; j < dim; ++j) m.set(i, j, e(rng));
  return m;
}

std::vector<Check> criterion11(Lab& lab) {
  std::vector<Check> out;
  auto rng = lab.rng(11);

  constexpr std::size_t kMaclaurin = 100'000;
  SymmetricBatch batch(3, kMaclaurin);
  for (std::size_t i = 0; i < kMaclaurin; ++i) batch.set(i, random_symmetric(3, rng));
  const auto sig = sigma_batch(batch);
  int violations = 0;
  for (std::size_t i = 0; i < kMaclaurin; ++i) {
    const double s1 = sig[i], s2 = sig[kMaclaurin + i];
    if (s1 * s1 - 3.0 * s2 < -1e-12 * (1.0 + s1 * s1)) ++violations;
  }
  out.push_back(bound("maclaurin_violations", "symfunc", 11, violations, 0.5));

  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const auto m = random_symmetric(4, rng);
    for (int l = 0; l <= 3; ++l) {
      const double expected = (4 - l) * sigma_k_matrix(m, l);
      const double got = newton_tensor(m, l).trace();
      worst = std::max(worst, std::abs(got - expected) / std::max(1.0, std::abs(expected)));
    }
  }
  out.push_back(bound("newton_trace_relative_error", "symfunc", 11, worst, 1e-10));

  double gap = 0.0;
  for (int i = 0; i < 1000; ++i) gap = std::max(gap, reflection_identity_gap(-static_cast<double>(i) / 1000.0));
  out.push_back(bound("reflection_identity_max_gap", "divisor", 11, gap, 1e-12));
  return out;
}

// |estimate - exact| in units of the reported standard error.
Check within_stderr(std::string name, int criterion, double est, double se, double exact) {
  const double zscore = se > 0.0 ? std::abs(est - exact) / se : (est == exact ? 0.0 : INFINITY);
  return bound(std::move(name), "levelset", criterion, zscore, 3.0);
}

std::vector<Check> criterion12(Lab& lab) {
  std::vector<Check> out;
  const auto& opt = lab.options();

  const auto sphere = lab.evaluator(0.0).summary_at(0.0);
  const auto ms = montecarlo_volume_check(round_sphere_factor(), 0.0, opt.seed, opt.samples, 1.25);
  out.push_back(within_stderr("montecarlo_A_sphere", 12, ms.a_est, ms.a_stderr, sphere.A));
  out.push_back(within_stderr("montecarlo_B_sphere", 12, ms.b_est, ms.b_stderr, sphere.B));

  // beta = -0.2 keeps e^{8u} ~ |x|^{-1.6} integrable, so the variance is finite.
  const double b = -0.2;
  const double t_u = football_peak_height(b);
  const auto fs = lab.evaluator(b).summary_at(t_u);
  const auto mf = montecarlo_volume_check(reconstruct_factor(lab.profile(b)), t_u, opt.seed ^ 0x9E3779B97F4A7C15ULL, opt.samples, 1.25);
  out.push_back(within_stderr("montecarlo_A_football_" + tag(b), 12, mf.a_est, mf.a_stderr,
                              (2.0 / 3.0) * (fs.D - d_limit_plus(b))));
  out.push_back(within_stderr("montecarlo_B_football_" + tag(b), 12, mf.b_est, mf.b_stderr, fs.B));
  return out;
}

// Checks outside the numbered criteria.
std::vector<Check> supplementary(Lab& lab) {
  std::vector<Check> out;

  {
    auto rng = lab.rng(100);
    SymmetricBatch batch(4, 4099);
    for (std::size_t i = 0; i < batch.size(); ++i) batch.set(i, random_symmetric(4, rng));
    const auto scalar = [&] {
      std::vector<double> v(4 * batch.size());
      sigma_batch(batch, v, Isa::Scalar);
      return v;
    }();
    const auto active = sigma_batch(batch);
    double diff = 0.0;
    for (std::size_t i = 0; i < scalar.size(); ++i)
      diff = std::max(diff, std::abs(scalar[i] - active[i]) / std::max(1.0, std::abs(scalar[i])));
    out.push_back(bound(std::string("sigma_batch_") + std::string(to_string(active_isa())) + "_vs_scalar", "symfunc", 0,
                        diff, 1e-13));
  }

  {
    auto rng = lab.rng(101);
    const auto u = round_sphere_factor();
    std::uniform_real_distribution<double> coord(-2.0, 2.0);
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
      Point4 x;
      for (auto& c : x) c = coord(rng);
      for (int k = 1; k <= 4; ++k)
        worst = std::max(worst, std::abs(sigma_k_curvature(u, x, k) - binomial(4, k) * std::pow(0.5, k)));
    }
    out.push_back(bound("round_sphere_sigma_k", "conformal", 0, worst, 1e-12));
  }

  {
    const auto& p = lab.profile(0.0);
    const auto u = reconstruct_factor(p);
    auto rng = lab.rng(102);
    std::uniform_real_distribution<double> t(-14.0, 14.0);
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
      const double r = std::exp(t(rng));
      const Point4 x = r * random_unit(rng);
      worst = std::max(worst, std::abs(u.value_at(x) - std::log(2.0 / (1.0 + r * r))));
    }
    out.push_back(bound("sphere_reconstruction", "radial", 0, worst, 1e-8));
  }

  {
    const auto a = measured_asymptotics(lab.profile(-0.5));
    out.push_back(bound("beta_zero_b=-0.5", "radial", 0, std::abs(a.beta_zero + 0.5), 1e-6));
    out.push_back(bound("beta_infinity_b=-0.5", "radial", 0, std::abs(a.beta_infinity + 0.5), 1e-6));
    out.push_back(bound("mean_curvature_ratio_b=-0.5", "radial", 0, std::abs(a.mean_curvature_ratio - 3.0), 1e-9));
  }

  for (double b : kRadialBetas) {
    const auto& p = lab.profile(b);
    const std::size_t n = p.size();
    double asym = 0.0;
    for (std::size_t i = 0; i < n; ++i) asym = std::max(asym, std::abs(p.h()[i] - p.h()[n - 1 - i]));
    out.push_back(bound("football_symmetry_" + tag(b), "radial", 0, asym, 1e-8));
  }
  return out;
}

std::vector<Check> run_in(Lab& lab, int id) {
  switch (id) {
    case 1: return criterion1(lab);
    case 2: return criterion2(lab);
    case 3: return criterion3(lab);
    case 4: return criterion4(lab);
    case 5: return criterion5(lab);
    case 6: return criterion6(lab);
    case 7: return criterion7(lab);
    case 8: return criterion8(lab);
    case 9: return criterion9(lab);
    case 10: return criterion10(lab);
    case 11: return criterion11(lab);
    case 12: return criterion12(lab);
    default: throw DomainError("unknown acceptance criterion " + std::to_string(id));
  }
}

}  // namespace

std::string_view criterion_title(int id) {
  switch (id) {
    case 1: return "smooth GBC";
    case 2: return "conic GBC";
    case 3: return "curvature constancy";
    case 4: return "first-integral conservation";
    case 5: return "level-set identities";
    case 6: return "monotone-quantity equality case";
    case 7: return "limits";
    case 8: return "key-estimate equality";
    case 9: return "divergence identity";
    case 10: return "classifier";
    case 11: return "property suites";
    case 12: return "Monte-Carlo cross-check";
    default: return "supplementary";
  }
}

bool is_known_suite(std::string_view suite) {
  return suite == "all" || suite == "symfunc" || suite == "conformal" || suite == "divisor" || suite == "radial" ||
         suite == "levelset";
}

std::vector<Check> run_criterion(int id, const VerifyOptions& options) {
  Lab lab(options);
  return run_in(lab, id);
}

std::vector<Check> run_suite(std::string_view suite, const VerifyOptions& options) {
  if (!is_known_suite(suite)) throw DomainError("unknown suite '" + std::string(suite) + "'");
  static const std::map<std::string_view, std::vector<int>> kCriteria{
      {"all", {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12}},
      {"symfunc", {11}},
      {"conformal", {9}},
      {"divisor", {2, 10, 11}},
      {"radial", {3, 4}},
      {"levelset", {1, 2, 5, 6, 7, 8, 12}},
  };
  Lab lab(options);
  std::vector<Check> checks;
  for (int id : kCriteria.at(suite))
    for (auto& c : run_in(lab, id))
      if (suite == "all" || c.module == suite) checks.push_back(std::move(c));
  for (auto& c : supplementary(lab))
    if (suite == "all" || c.module == suite) checks.push_back(std::move(c));
  return checks;
}

bool all_passed(const std::vector<Check>& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

}  // namespace s2lab
