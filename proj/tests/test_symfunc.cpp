#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <vector>

#include "s2lab/errors.hpp"
#include "s2lab/symfunc.hpp"

using namespace s2lab;

namespace {

SymmetricMatrix random_symmetric(int n, std::mt19937_64& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> e(-scale, scale);
  SymmetricMatrix m(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) m.set(i, j, e(rng));
  return m;
}

int permutation_sign(const std::vector<int>& p) {
  int sign = 1;
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = i + 1; j < p.size(); ++j)
      if (p[i] > p[j]) sign = -sign;
  return sign;
}

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

// (1/k!) sum over index tuples of the generalized Kronecker delta times
// A_{i1 j1} .. A_{ik jk}. The delta is nonzero only when (j) is a
// permutation of (i) with distinct entries, and then equals its sign.
double delta_sum_sigma(const SymmetricMatrix& a, int k) {
  const int n = a.dim();
  if (k == 0) return 1.0;
  std::vector<int> idx(static_cast<std::size_t>(k), 0);
  double total = 0.0;
  while (true) {
    std::vector<int> sorted = idx;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end()) {
      std::vector<int> perm(static_cast<std::size_t>(k));
      std::iota(perm.begin(), perm.end(), 0);
      do {
        double term = permutation_sign(perm);
        for (int m = 0; m < k; ++m) term *= a(idx[static_cast<std::size_t>(m)], idx[static_cast<std::size_t>(perm[static_cast<std::size_t>(m)])]);
        total += term;
      } while (std::next_permutation(perm.begin(), perm.end()));
    }
    int pos = 0;
    while (pos < k && ++idx[static_cast<std::size_t>(pos)] == n) idx[static_cast<std::size_t>(pos++)] = 0;
    if (pos == k) break;
  }
  return total / factorial(k);
}

// T_l(A)^i_j = (1/l!) sum delta^{i i1..il}_{j j1..jl} A_{i1 j1} .. A_{il jl}.
SymmetricMatrix delta_sum_newton(const SymmetricMatrix& a, int l) {
  const int n = a.dim();
  SymmetricMatrix out(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      double total = 0.0;
      std::vector<int> rest(static_cast<std::size_t>(l), 0);
      while (true) {
        std::vector<int> upper{i};
        upper.insert(upper.end(), rest.begin(), rest.end());
        std::vector<int> sorted = upper;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end()) {
          std::vector<int> perm(static_cast<std::size_t>(l + 1));
          std::iota(perm.begin(), perm.end(), 0);
          do {
            if (upper[static_cast<std::size_t>(perm[0])] != j) continue;
            double term = permutation_sign(perm);
            for (int m = 1; m <= l; ++m)
              term *= a(upper[static_cast<std::size_t>(m)], upper[static_cast<std::size_t>(perm[static_cast<std::size_t>(m)])]);
            total += term;
          } while (std::next_permutation(perm.begin(), perm.end()));
        }
        int pos = 0;
        while (pos < l && ++rest[static_cast<std::size_t>(pos)] == n) rest[static_cast<std::size_t>(pos++)] = 0;
        if (pos == l) break;
      }
      out.set(i, j, total / factorial(l));
    }
  return out;
}

std::vector<double> eigen_spectrum(const SymmetricMatrix& m) {
  const int n = m.dim();
  Eigen::MatrixXd full(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) full(i, j) = m(i, j);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(full);
  return {es.eigenvalues().data(), es.eigenvalues().data() + n};
}

}  // namespace

TEST_CASE("sigma_k on spectra") {
  CHECK(sigma_k(Spectrum{1, 1, 1, 1}, 2) == 6.0);
  CHECK(sigma_k(Spectrum{0.5, 0.5, 0.5, 0.5}, 2) == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(sigma_k(Spectrum{2, 3, 5, 7}, 4) == 210.0);
  CHECK(sigma_k(Spectrum{2, 3, 5, 7}, 0) == 1.0);
  CHECK(sigma_k(Spectrum{2, 3, 5, 7}, 1) == 17.0);
  CHECK(sigma_k(Spectrum{2, 3, 5, 7}, 3) == 2 * 3 * 5 + 2 * 3 * 7 + 2 * 5 * 7 + 3 * 5 * 7);

  const auto all = sigma_all(Spectrum{2, 3, 5, 7});
  REQUIRE(all.size() == 5);
  CHECK(all[2] == 6 + 10 + 14 + 15 + 21 + 35);

  CHECK_THROWS_AS(sigma_k(Spectrum{1, 2}, 3), DomainError);
  CHECK_THROWS_AS(sigma_k(Spectrum{1, 2}, -1), DomainError);
  CHECK_THROWS_AS(Spectrum(std::vector<double>{}), DomainError);
  CHECK_THROWS_AS(Spectrum({1.0, std::numeric_limits<double>::quiet_NaN()}), DomainError);
}

TEST_CASE("SymmetricMatrix storage") {
  CHECK_THROWS_AS(SymmetricMatrix(5), DomainError);
  CHECK_THROWS_AS(SymmetricMatrix(2), DomainError);
  const double asym[] = {1, 2, 0, 2.5, 1, 0, 0, 0, 1};
  CHECK_THROWS_AS(SymmetricMatrix::from_full(3, asym), DomainError);
  const double sym[] = {1, 2, 3, 2, 4, 5, 3, 5, 6};
  const auto m = SymmetricMatrix::from_full(3, sym);
  CHECK(m(0, 2) == 3.0);
  CHECK(m(2, 0) == 3.0);
  CHECK(m.trace() == 11.0);
  CHECK(m.packed().size() == 6);

  auto n = m;
  n.add(1, 0, 1.0);
  CHECK(n(0, 1) == 3.0);
  CHECK((m + m)(1, 2) == 10.0);
  CHECK((2.0 * m - m) == m);
}

TEST_CASE("sigma_k_matrix agrees with the generalized Kronecker-delta sum") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    for (int n : {3, 4}) {
      const auto m = random_symmetric(n, rng);
      for (int k = 0; k <= n; ++k) {
        const double oracle = delta_sum_sigma(m, k);
        CHECK(sigma_k_matrix(m, k) == doctest::Approx(oracle).epsilon(1e-12).scale(1.0));
      }
    }
  }
  CHECK(sigma_k_matrix(SymmetricMatrix::identity(4), 2) == 6.0);
  CHECK(sigma_k_matrix(SymmetricMatrix::diagonal({0.5, 0.5, 0.5, 0.5}), 2) == 1.5);
  CHECK_THROWS_AS(sigma_k_matrix(SymmetricMatrix::identity(3), 4), DomainError);
}

TEST_CASE("sigma_k_matrix agrees with sigma_k of the Eigen spectrum") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = trial % 2 ? 3 : 4;
    const auto m = random_symmetric(n, rng, 2.0);
    const Spectrum s(eigen_spectrum(m));
    for (int k = 1; k <= n; ++k) CHECK(sigma_k_matrix(m, k) == doctest::Approx(sigma_k(s, k)).epsilon(1e-10).scale(1.0));

    const auto spectrum = eigenvalues(m);
    const auto ours = spectrum.values();
    const auto ref = eigen_spectrum(m);
    for (int i = 0; i < n; ++i) CHECK(ours[static_cast<std::size_t>(i)] == doctest::Approx(ref[static_cast<std::size_t>(i)]).epsilon(1e-12));
  }
}

TEST_CASE("newton_tensor agrees with the delta-sum definition") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 10; ++trial) {
    for (int n : {3, 4}) {
      const auto m = random_symmetric(n, rng);
      for (int l = 0; l <= n - 1; ++l) {
        const auto t = newton_tensor(m, l);
        const auto oracle = delta_sum_newton(m, l);
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) CHECK(t(i, j) == doctest::Approx(oracle(i, j)).epsilon(1e-12).scale(1.0));
      }
    }
  }
  CHECK(newton_tensor(SymmetricMatrix::diagonal({1, 2, 3, 4}), 0) == SymmetricMatrix::identity(4));
  CHECK_THROWS_AS(newton_tensor(SymmetricMatrix::identity(4), 4), DomainError);
  CHECK_THROWS_AS(newton_tensor(SymmetricMatrix::identity(4), -1), DomainError);
}

TEST_CASE("Newton tensor identities") {
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto m = random_symmetric(4, rng, 3.0);
    for (int l = 0; l <= 3; ++l) {
      const auto t = newton_tensor(m, l);
      const double expected = (4 - l) * sigma_k_matrix(m, l);
      CHECK(std::abs(t.trace() - expected) <= 1e-10 * std::max(1.0, std::abs(expected)));
      // trace(T_l M) = (l + 1) sigma_{l+1}
      const auto tm = multiply(t, m);
      const double tr = tm[0] + tm[5] + tm[10] + tm[15];
      const double e2 = (l + 1) * sigma_k_matrix(m, l + 1);
      CHECK(std::abs(tr - e2) <= 1e-10 * std::max(1.0, std::abs(e2)));
    }
  }
}

TEST_CASE("Maclaurin inequality on random 3x3 matrices") {
  std::mt19937_64 rng(15);
  for (int trial = 0; trial < 20000; ++trial) {
    const auto m = random_symmetric(3, rng);
    const double s1 = sigma_k_matrix(m, 1), s2 = sigma_k_matrix(m, 2);
    CHECK(s1 * s1 - 3.0 * s2 >= -1e-12 * (1.0 + s1 * s1));
  }
}

TEST_CASE("cone membership") {
  CHECK(in_cone(SymmetricMatrix::identity(4), 4));
  const auto m = SymmetricMatrix::diagonal({1, 1, 1, -0.5});
  CHECK(in_cone(m, 1));
  CHECK(in_cone(m, 2));
  CHECK_FALSE(in_cone(m, 3));
  CHECK_FALSE(in_cone(SymmetricMatrix::zero(4), 1));  // strict
  CHECK_THROWS_AS(in_cone(m, 5), DomainError);
}

TEST_CASE("sphere volumes and binomials") {
  constexpr double pi = std::numbers::pi;
  CHECK(sphere_volume(1) == doctest::Approx(2 * pi));
  CHECK(sphere_volume(2) == doctest::Approx(4 * pi));
  CHECK(sphere_volume(3) == doctest::Approx(2 * pi * pi));
  CHECK(sphere_volume(4) == doctest::Approx(8 * pi * pi / 3));
  // |S^4| (3/2) / |S^3| = 2
  CHECK(sphere_volume(4) * 1.5 / sphere_volume(3) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(binomial(4, 2) == 6.0);
  CHECK(binomial(3, 0) == 1.0);
  CHECK(binomial(3, 4) == 0.0);
}
