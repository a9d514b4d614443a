#include "s2lab/divisor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "s2lab/errors.hpp"
#include "s2lab/symfunc.hpp"

namespace s2lab {

namespace {

void check_beta(double beta, const char* who) {
  if (!(beta > -1.0 && beta <= 0.0))
    throw DomainError(std::string(who) + ": cone order must lie in (-1, 0]");
}

void check_even(int n) {
  if (n < 2 || n % 2 != 0) throw DomainError("dimension must be even and >= 2");
}

double real_cbrt(double x) { return x < 0.0 ? -std::cbrt(-x) : std::cbrt(x); }

// Values beta_i, i != j, in ascending order so that sums do not depend on
// the order the divisor was given in.
std::vector<double> others_sorted(const ConicDivisor& d, std::size_t j) {
  std::vector<double> rest;
  rest.reserve(d.size());
  for (std::size_t i = 0; i < d.size(); ++i)
    if (i + 1 != j) rest.push_back(d[i]);
  std::sort(rest.begin(), rest.end());
  return rest;
}

double tilde_of(const std::vector<double>& rest) {
  if (rest.empty()) return 0.0;
  // A single term is its own cube root; skip the cube/cbrt round trip.
  if (rest.size() == 1) return rest.front();
  double cubes = 0.0;
  for (double b : rest) cubes += b * b * b;
  return real_cbrt(cubes);
}

}  // namespace

ConicDivisor::ConicDivisor(std::vector<double> betas, bool includes_infinity)
    : betas_(std::move(betas)), includes_infinity_(includes_infinity) {
  for (double b : betas_)
    if (!(b > -1.0 && b < 0.0)) throw DomainError("ConicDivisor: every cone order must lie in (-1, 0)");
  if (includes_infinity_ && betas_.empty())
    throw DomainError("ConicDivisor: includes_infinity requires at least one entry");
}

double defect_sum(double beta, int n) {
  check_even(n);
  const int m = n / 2;
  double s = 0.0;
  for (int k = 0; k <= m - 1; ++k)
    s += binomial(n - 1, k) * std::pow(2.0 + beta, k) * std::pow(std::abs(beta), n - k - 1);
  return s / std::pow(2.0, n - 2);
}

double defect(double beta, int n) {
  check_beta(beta, "defect");
  return defect_sum(beta, n);
}

double gbc_total(const ConicDivisor& d, int n) {
  check_even(n);
  double total = 2.0;
  for (double b : d.betas()) total -= defect(b, n);
  return total;
}

double reflection_identity_gap(double beta, int n) {
  check_beta(beta, "reflection_identity_gap");
  return std::abs(defect_sum(beta, n) + defect_sum(-2.0 - beta, n) - 2.0);
}

double beta_tilde(const ConicDivisor& d, std::size_t j) {
  if (j < 1 || j > d.size()) throw DomainError("beta_tilde: index out of range");
  return tilde_of(others_sorted(d, j));
}

ThresholdSides threshold_sides(const ConicDivisor& d, std::size_t j) {
  if (j < 1 || j > d.size()) throw DomainError("threshold_sides: index out of range");
  const auto rest = others_sorted(d, j);
  const double bj = d[j - 1];
  const double bt = tilde_of(rest);
  double squares = 0.0;
  for (double b : rest) squares += b * b;
  ThresholdSides s;
  s.lhs = 0.375 * bj * bj * (bj + 2.0) * (bj + 2.0);
  s.rhs = 0.375 * bt * bt * (bt + 2.0) * (bt + 2.0) + (bt + 1.5) * (squares - bt * bt);
  return s;
}

std::string_view to_string(CriticalityKind kind) noexcept {
  switch (kind) {
    case CriticalityKind::Subcritical:
      return "subcritical";
    case CriticalityKind::Critical:
      return "critical";
    case CriticalityKind::Supercritical:
      return "supercritical";
  }
  return "unknown";
}

Classification classify(const ConicDivisor& d, double eps) {
  if (d.empty()) throw DomainError("classify: empty divisor");
  if (!(eps >= 0.0)) throw DomainError("classify: eps must be nonnegative");

  std::size_t best = 0;
  ThresholdSides best_sides;
  double best_gap = -std::numeric_limits<double>::infinity();
  bool any_critical = false;
  for (std::size_t j = 1; j <= d.size(); ++j) {
    const auto s = threshold_sides(d, j);
    const double gap = s.lhs - s.rhs;
    if (std::abs(gap) <= eps) any_critical = true;
    if (gap > best_gap) {
      best_gap = gap;
      best = j;
      best_sides = s;
    }
  }

  Classification c;
  c.lhs = best_sides.lhs;
  c.rhs = best_sides.rhs;
  if (best_gap > eps) {
    c.kind = CriticalityKind::Supercritical;
    c.witness_index = best;
  } else if (any_critical) {
    c.kind = CriticalityKind::Critical;
    c.witness_index = best;
  }
  return c;
}

double football_invariant(double beta) {
  check_beta(beta, "football_invariant");
  const double a = beta * (beta + 2.0);
  return 0.25 * a * a;
}

}  // namespace s2lab
