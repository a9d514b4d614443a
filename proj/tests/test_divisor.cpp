#include <doctest.h>

#include <algorithm>
#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <random>

#include "s2lab/divisor.hpp"
#include "s2lab/errors.hpp"

using namespace s2lab;
using boost::multiprecision::cpp_rational;

namespace {

// Exact threshold sides for a divisor whose beta-tilde is rational (a
// single remaining entry, or none).
std::pair<cpp_rational, cpp_rational> exact_sides(const std::vector<cpp_rational>& betas, std::size_t j) {
  const cpp_rational bj = betas[j - 1];
  cpp_rational bt = 0, squares = 0;
  for (std::size_t i = 0; i < betas.size(); ++i)
    if (i + 1 != j) {
      bt = betas[i];
      squares += betas[i] * betas[i];
    }
  const cpp_rational three_eighths(3, 8);
  const cpp_rational lhs = three_eighths * bj * bj * (bj + 2) * (bj + 2);
  const cpp_rational rhs = three_eighths * bt * bt * (bt + 2) * (bt + 2) + (bt + cpp_rational(3, 2)) * (squares - bt * bt);
  return {lhs, rhs};
}

}  // namespace

TEST_CASE("defects") {
  CHECK(defect(-0.5) == doctest::Approx(0.3125).epsilon(1e-15));
  CHECK(defect(0.0) == 0.0);
  for (double b : {-0.1, -0.37, -0.9}) CHECK(defect(b) == doctest::Approx(0.5 * (b * b * b + 3 * b * b)).epsilon(1e-14));
  // n = 2: f(beta) = |beta|
  CHECK(defect(-0.3, 2) == doctest::Approx(0.3));
  CHECK_THROWS_AS(defect(0.1), DomainError);
  CHECK_THROWS_AS(defect(-1.0), DomainError);
  CHECK_THROWS_AS(defect(-0.5, 3), DomainError);
}

TEST_CASE("reflection identity f(beta) + f(-2-beta) = 2 for even n") {
  for (int n : {2, 4, 6, 8})
    for (int i = 0; i < 1000; ++i) {
      const double b = -static_cast<double>(i) / 1000.0;
      CHECK(reflection_identity_gap(b, n) < 1e-12);
    }
}

TEST_CASE("GBC totals") {
  CHECK(gbc_total(ConicDivisor({-0.5, -0.5})) == doctest::Approx(1.375).epsilon(1e-15));
  CHECK(gbc_total(ConicDivisor{}) == 2.0);
  CHECK(gbc_total(ConicDivisor({-0.2, -0.7, -0.4})) ==
        doctest::Approx(2 - defect(-0.2) - defect(-0.7) - defect(-0.4)));
}

TEST_CASE("divisor validation") {
  CHECK_THROWS_AS(ConicDivisor({-0.5, 0.0}), DomainError);
  CHECK_THROWS_AS(ConicDivisor({-1.0}), DomainError);
  CHECK_THROWS_AS(ConicDivisor({}, true), DomainError);
  const ConicDivisor d({-0.2, -0.4}, true);
  CHECK(d.includes_infinity());
  CHECK(d.size() == 2);
}

TEST_CASE("beta tilde") {
  const ConicDivisor d({-0.3, -0.6, -0.5});
  CHECK(beta_tilde(d, 1) == doctest::Approx(std::cbrt(-0.216 - 0.125)));
  CHECK(beta_tilde(ConicDivisor({-0.3, -0.6}), 2) == -0.3);
  CHECK(beta_tilde(ConicDivisor({-0.5}), 1) == 0.0);
  CHECK_THROWS_AS(beta_tilde(d, 0), DomainError);
  CHECK_THROWS_AS(beta_tilde(d, 4), DomainError);
}

TEST_CASE("classification examples") {
  const auto c = classify(ConicDivisor({-0.3, -0.6}));
  CHECK(c.kind == CriticalityKind::Supercritical);
  REQUIRE(c.witness_index.has_value());
  CHECK(*c.witness_index == 2);
  CHECK(std::abs(c.lhs - 0.2646) < 1e-12);
  CHECK(std::abs(c.rhs - 0.0975375) < 1e-12);

  const auto single = classify(ConicDivisor({-0.5}));
  CHECK(single.kind == CriticalityKind::Supercritical);
  CHECK(single.lhs == doctest::Approx(0.2109375));
  CHECK(single.rhs == 0.0);

  const auto pair = classify(ConicDivisor({-0.5, -0.5}));
  CHECK(pair.kind == CriticalityKind::Critical);
  CHECK(to_string(pair.kind) == "critical");

  // Three small equal orders: every lhs_j is below rhs_j.
  const auto triple = classify(ConicDivisor({-0.2, -0.2, -0.2}));
  CHECK(triple.kind == CriticalityKind::Subcritical);
  CHECK_FALSE(triple.witness_index.has_value());

  CHECK_THROWS_AS(classify(ConicDivisor{}), DomainError);
  CHECK_THROWS_AS(classify(ConicDivisor({-0.5}), -1.0), DomainError);
}

TEST_CASE("threshold sides match exact rational arithmetic") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> num(1, 999);
  for (int trial = 0; trial < 200; ++trial) {
    // Two entries, so beta tilde is the other entry and everything is rational.
    const cpp_rational a(-num(rng), 1000), b(-num(rng), 1000);
    const ConicDivisor d({a.convert_to<double>(), b.convert_to<double>()});
    for (std::size_t j = 1; j <= 2; ++j) {
      const auto [lhs, rhs] = exact_sides({a, b}, j);
      const auto s = threshold_sides(d, j);
      CHECK(std::abs(s.lhs - lhs.convert_to<double>()) < 1e-15);
      CHECK(std::abs(s.rhs - rhs.convert_to<double>()) < 1e-15);
    }
    // Symmetric pairs are exactly critical.
    const auto [lhs, rhs] = exact_sides({a, a}, 1);
    CHECK(lhs == rhs);
    CHECK(classify(ConicDivisor({a.convert_to<double>(), a.convert_to<double>()}), 0.0).kind == CriticalityKind::Critical);
  }
  const auto [lhs, rhs] = exact_sides({cpp_rational(-3, 10), cpp_rational(-6, 10)}, 2);
  CHECK(lhs == cpp_rational(2646, 10000));
  CHECK(rhs == cpp_rational(975375, 10000000));
}

TEST_CASE("classification is permutation invariant") {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> beta(-0.99, -0.01);
  std::uniform_int_distribution<int> size(1, 7);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<double> betas(static_cast<std::size_t>(size(rng)));
    for (auto& b : betas) b = beta(rng);
    auto shuffled = betas;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    const auto a = classify(ConicDivisor(betas));
    const auto s = classify(ConicDivisor(shuffled));
    CHECK(a.kind == s.kind);
    CHECK(a.lhs == s.lhs);
    CHECK(a.rhs == s.rhs);
    CHECK(gbc_total(ConicDivisor(betas)) == doctest::Approx(gbc_total(ConicDivisor(shuffled))).epsilon(1e-15));
    if (a.witness_index) CHECK(betas[*a.witness_index - 1] == shuffled[*s.witness_index - 1]);
  }
}

TEST_CASE("football invariant") {
  CHECK(football_invariant(-0.5) == doctest::Approx(0.140625).epsilon(1e-15));
  CHECK(football_invariant(0.0) == 0.0);
  // M(+inf) = (2/3) D + (4/9) D z + z^4 / 36 with D = f(beta), z = beta.
  for (double b : {-0.1, -0.5, -0.85}) {
    const double d = defect(b);
    CHECK((2.0 / 3.0) * d + (4.0 / 9.0) * d * b + b * b * b * b / 36.0 == doctest::Approx(football_invariant(b)));
  }
}
