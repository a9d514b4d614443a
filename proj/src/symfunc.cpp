#include "s2lab/symfunc.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "kernels/sigma_formulas.hpp"
#include "s2lab/errors.hpp"

namespace s2lab {

Spectrum::Spectrum(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw DomainError("Spectrum: at least one eigenvalue required");
  for (double v : values_)
    if (!std::isfinite(v)) throw DomainError("Spectrum: eigenvalues must be finite");
}

Spectrum::Spectrum(std::initializer_list<double> values) : Spectrum(std::vector<double>(values)) {}

SymmetricMatrix::SymmetricMatrix(int dim) : dim_(dim) {
  if (dim != 3 && dim != 4) throw DomainError("SymmetricMatrix: dimension must be 3 or 4");
}

int SymmetricMatrix::packed_index(int dim, int i, int j) noexcept {
  if (i > j) std::swap(i, j);
  return i * dim - i * (i - 1) / 2 + (j - i);
}

SymmetricMatrix SymmetricMatrix::identity(int dim) {
  SymmetricMatrix m(dim);
  for (int i = 0; i < dim; ++i) m.set(i, i, 1.0);
  return m;
}

SymmetricMatrix SymmetricMatrix::diagonal(std::span<const double> diag) {
  SymmetricMatrix m(static_cast<int>(diag.size()));
  for (int i = 0; i < m.dim(); ++i) m.set(i, i, diag[static_cast<std::size_t>(i)]);
  return m;
}

SymmetricMatrix SymmetricMatrix::diagonal(std::initializer_list<double> diag) {
  return diagonal(std::span<const double>(diag.begin(), diag.size()));
}

SymmetricMatrix SymmetricMatrix::from_full(int dim, std::span<const double> row_major) {
  if (row_major.size() != static_cast<std::size_t>(dim * dim))
    throw DomainError("SymmetricMatrix::from_full: wrong number of entries");
  SymmetricMatrix m(dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = i; j < dim; ++j) {
      const double a = row_major[static_cast<std::size_t>(i * dim + j)];
      const double b = row_major[static_cast<std::size_t>(j * dim + i)];
      if (a != b) throw DomainError("SymmetricMatrix::from_full: input is not symmetric");
      m.set(i, j, a);
    }
  }
  return m;
}

double SymmetricMatrix::trace() const noexcept {
  double t = 0.0;
  for (int i = 0; i < dim_; ++i) t += (*this)(i, i);
  return t;
}

SymmetricMatrix SymmetricMatrix::operator+(const SymmetricMatrix& o) const {
  if (o.dim_ != dim_) throw DomainError("SymmetricMatrix: dimension mismatch");
  SymmetricMatrix r(dim_);
  for (std::size_t p = 0; p < packed().size(); ++p) r.packed_[p] = packed_[p] + o.packed_[p];
  return r;
}

SymmetricMatrix SymmetricMatrix::operator-(const SymmetricMatrix& o) const {
  if (o.dim_ != dim_) throw DomainError("SymmetricMatrix: dimension mismatch");
  SymmetricMatrix r(dim_);
  for (std::size_t p = 0; p < packed().size(); ++p) r.packed_[p] = packed_[p] - o.packed_[p];
  return r;
}

SymmetricMatrix SymmetricMatrix::operator*(double s) const {
  SymmetricMatrix r(dim_);
  for (std::size_t p = 0; p < packed().size(); ++p) r.packed_[p] = packed_[p] * s;
  return r;
}

std::vector<double> multiply(const SymmetricMatrix& a, const SymmetricMatrix& b) {
  if (a.dim() != b.dim()) throw DomainError("multiply: dimension mismatch");
  const int n = a.dim();
  std::vector<double> r(static_cast<std::size_t>(n * n), 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < n; ++k) s += a(i, k) * b(k, j);
      r[static_cast<std::size_t>(i * n + j)] = s;
    }
  return r;
}

std::vector<double> sigma_all(const Spectrum& s) {
  const std::size_t n = s.size();
  std::vector<double> e(n + 1, 0.0);
  e[0] = 1.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j >= 1; --j) e[j] += s[i] * e[j - 1];
  return e;
}

double sigma_k(const Spectrum& s, int k) {
  if (k < 0 || static_cast<std::size_t>(k) > s.size())
    throw DomainError("sigma_k: k=" + std::to_string(k) + " outside [0, n]");
  return sigma_all(s)[static_cast<std::size_t>(k)];
}

std::array<double, SymmetricMatrix::kMaxDim> sigma_all_matrix(const SymmetricMatrix& m) {
  std::array<double, SymmetricMatrix::kMaxDim> out{};
  const auto packed = m.packed();
  if (m.dim() == 3) {
    kernels::detail::sigma_dim3(packed.data(), out.data());
  } else {
    kernels::detail::sigma_dim4(packed.data(), out.data());
  }
  return out;
}

double sigma_k_matrix(const SymmetricMatrix& m, int k) {
  if (k < 0 || k > m.dim())
    throw DomainError("sigma_k_matrix: k=" + std::to_string(k) + " outside [0, n]");
  if (k == 0) return 1.0;
  return sigma_all_matrix(m)[static_cast<std::size_t>(k - 1)];
}

SymmetricMatrix newton_tensor(const SymmetricMatrix& m, int l) {
  const int n = m.dim();
  if (l < 0 || l > n - 1)
    throw DomainError("newton_tensor: l=" + std::to_string(l) + " outside [0, n-1]");
  const auto sig = sigma_all_matrix(m);

  // T_0 = I, T_j = sigma_j I - M T_{j-1}.
  std::vector<double> t(static_cast<std::size_t>(n * n), 0.0);
  for (int i = 0; i < n; ++i) t[static_cast<std::size_t>(i * n + i)] = 1.0;
  for (int j = 1; j <= l; ++j) {
    std::vector<double> next(t.size(), 0.0);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) {
        double s = 0.0;
        for (int k = 0; k < n; ++k) s += m(r, k) * t[static_cast<std::size_t>(k * n + c)];
        next[static_cast<std::size_t>(r * n + c)] = -s;
      }
    for (int i = 0; i < n; ++i) next[static_cast<std::size_t>(i * n + i)] += sig[static_cast<std::size_t>(j - 1)];
    t = std::move(next);
  }

  SymmetricMatrix out(n);
  for (int r = 0; r < n; ++r)
    for (int c = r; c < n; ++c)
      out.set(r, c, 0.5 * (t[static_cast<std::size_t>(r * n + c)] + t[static_cast<std::size_t>(c * n + r)]));
  return out;
}

bool in_cone(const SymmetricMatrix& m, int k) {
  if (k < 1 || k > m.dim()) throw DomainError("in_cone: k out of range");
  const auto sig = sigma_all_matrix(m);
  for (int j = 0; j < k; ++j)
    if (!(sig[static_cast<std::size_t>(j)] > 0.0)) return false;
  return true;
}

Spectrum eigenvalues(const SymmetricMatrix& m) {
  const int n = m.dim();
  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = m(i, j);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a, Eigen::EigenvaluesOnly);
  const auto& ev = solver.eigenvalues();
  return Spectrum(std::vector<double>(ev.data(), ev.data() + n));
}

double sphere_volume(int n) {
  if (n < 1) throw DomainError("sphere_volume: n must be >= 1");
  const double half = 0.5 * (n + 1);
  return 2.0 * std::pow(std::numbers::pi, half) / std::tgamma(half);
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace s2lab
