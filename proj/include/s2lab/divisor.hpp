#pragma once

// Conic divisors on S^4, Gauss-Bonnet-Chern defects and the
// subcritical / critical / supercritical trichotomy for sigma_2.

#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace s2lab {

/// Cone orders beta_1..beta_q, each in (-1, 0). When includes_infinity is set
/// the last entry is the order at the point at infinity; it is otherwise
/// treated like any other entry.
class ConicDivisor {
 public:
  ConicDivisor() = default;
  explicit ConicDivisor(std::vector<double> betas, bool includes_infinity = false);

  std::size_t size() const noexcept { return betas_.size(); }
  bool empty() const noexcept { return betas_.empty(); }
  std::span<const double> betas() const noexcept { return betas_; }
  double operator[](std::size_t i) const { return betas_[i]; }
  bool includes_infinity() const noexcept { return includes_infinity_; }

 private:
  std::vector<double> betas_;
  bool includes_infinity_ = false;
};

/// Defect f(beta) = 2^{2-n} sum_{k=0}^{m-1} C(n-1, k) (2+beta)^k |beta|^{n-k-1},
/// n = 2m. Requires beta in (-1, 0] and n even, n >= 2.
double defect(double beta, int n = 4);

/// The same sum with no domain check on beta; used to evaluate f(-2-beta).
double defect_sum(double beta, int n = 4);

/// 2 - sum_i f(beta_i): the normalized total sigma_{n/2} curvature.
double gbc_total(const ConicDivisor& d, int n = 4);

/// |f(beta) + f(-2-beta) - 2|.
double reflection_identity_gap(double beta, int n = 4);

/// Real cube root of sum_{i != j} beta_i^3 (j is 1-based); 0 for q = 1.
double beta_tilde(const ConicDivisor& d, std::size_t j);

struct ThresholdSides {
  double lhs = 0.0;  // (3/8) b_j^2 (b_j + 2)^2
  double rhs = 0.0;  // (3/8) bt^2 (bt + 2)^2 + (bt + 3/2)(sum_{i != j} b_i^2 - bt^2)
};

/// Both sides of the threshold inequality at index j (1-based).
ThresholdSides threshold_sides(const ConicDivisor& d, std::size_t j);

enum class CriticalityKind { Subcritical, Critical, Supercritical };

std::string_view to_string(CriticalityKind kind) noexcept;

struct Classification {
  CriticalityKind kind = CriticalityKind::Subcritical;
  /// 1-based index maximizing lhs_j - rhs_j; empty for subcritical divisors.
  std::optional<std::size_t> witness_index;
  /// Sides at the maximizing index (reported for every kind).
  double lhs = 0.0;
  double rhs = 0.0;
};

/// Supercritical if some lhs_j > rhs_j + eps; otherwise critical if some
/// |lhs_j - rhs_j| <= eps; otherwise subcritical. Empty divisor: DomainError.
Classification classify(const ConicDivisor& d, double eps = 1e-9);

/// beta^2 (beta + 2)^2 / 4: the value of the monotone quantity along a
/// football of order beta.
double football_invariant(double beta);

}  // namespace s2lab
