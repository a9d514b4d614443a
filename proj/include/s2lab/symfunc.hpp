#pragma once

// Elementary symmetric functions of spectra and of small symmetric
// matrices, Newton tensors, positive-cone membership and sphere volumes.

#include <array>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace s2lab {

/// Eigenvalue list lambda_1..lambda_n (unordered, n >= 1, finite).
class Spectrum {
 public:
  Spectrum() = default;
  explicit Spectrum(std::vector<double> values);
  Spectrum(std::initializer_list<double> values);

  std::size_t size() const noexcept { return values_.size(); }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }

 private:
  std::vector<double> values_;
};

/// Real symmetric n x n matrix, n in {3, 4}. Only the upper triangle is
/// stored, so (i, j) and (j, i) are the same storage cell.
class SymmetricMatrix {
 public:
  static constexpr int kMaxDim = 4;
  static constexpr int kMaxPacked = kMaxDim * (kMaxDim + 1) / 2;

  explicit SymmetricMatrix(int dim = 4);

  static SymmetricMatrix zero(int dim) { return SymmetricMatrix(dim); }
  static SymmetricMatrix identity(int dim);
  static SymmetricMatrix diagonal(std::span<const double> diag);
  static SymmetricMatrix diagonal(std::initializer_list<double> diag);
  /// Builds from a row-major n x n array; throws DomainError unless the
  /// input is exactly symmetric.
  static SymmetricMatrix from_full(int dim, std::span<const double> row_major);

  int dim() const noexcept { return dim_; }
  double operator()(int i, int j) const noexcept { return packed_[index(i, j)]; }
  void set(int i, int j, double v) noexcept { packed_[index(i, j)] = v; }
  /// Adds v to entry (i, j); for i != j this also changes (j, i).
  void add(int i, int j, double v) noexcept { packed_[index(i, j)] += v; }

  double trace() const noexcept;
  SymmetricMatrix operator+(const SymmetricMatrix& o) const;
  SymmetricMatrix operator-(const SymmetricMatrix& o) const;
  SymmetricMatrix operator*(double s) const;
  friend SymmetricMatrix operator*(double s, const SymmetricMatrix& m) { return m * s; }
  bool operator==(const SymmetricMatrix&) const = default;

  /// Packed upper-triangle storage, row by row: (0,0) (0,1) .. (0,n-1) (1,1) ..
  std::span<const double> packed() const noexcept {
    return {packed_.data(), static_cast<std::size_t>(dim_ * (dim_ + 1) / 2)};
  }
  static int packed_index(int dim, int i, int j) noexcept;

 private:
  int index(int i, int j) const noexcept { return packed_index(dim_, i, j); }

  int dim_;
  std::array<double, kMaxPacked> packed_{};
};

/// Row-major full product of two symmetric matrices (generally not symmetric).
std::vector<double> multiply(const SymmetricMatrix& a, const SymmetricMatrix& b);

/// k-th elementary symmetric function of the spectrum, 0 <= k <= n.
double sigma_k(const Spectrum& s, int k);

/// sigma_0..sigma_n of the spectrum in one pass.
std::vector<double> sigma_all(const Spectrum& s);

/// k-th elementary symmetric function of the eigenvalues of M, computed as
/// the sum of k x k principal minors (characteristic-polynomial coefficient).
double sigma_k_matrix(const SymmetricMatrix& m, int k);

/// sigma_1..sigma_n of M (index 0 holds sigma_1).
std::array<double, SymmetricMatrix::kMaxDim> sigma_all_matrix(const SymmetricMatrix& m);

/// Newton tensor T_l(M) = sum_{i=0}^{l} (-1)^i sigma_{l-i}(M) M^i, 0 <= l <= n-1.
SymmetricMatrix newton_tensor(const SymmetricMatrix& m, int l);

/// True iff sigma_j(M) > 0 for every 1 <= j <= k (strict, no tolerance).
bool in_cone(const SymmetricMatrix& m, int k);

/// Eigenvalues of M in ascending order (symmetric eigensolver).
Spectrum eigenvalues(const SymmetricMatrix& m);

/// Volume of the unit n-sphere S^n in R^{n+1}: 2 pi^{(n+1)/2} / Gamma((n+1)/2).
double sphere_volume(int n);

/// Binomial coefficient C(n, k) as a double (exact for the sizes used here).
double binomial(int n, int k);

}  // namespace s2lab
