#include <cstdlib>
#include <stdexcept>
#include <string>

#include "kernels/sigma_batch.hpp"
#include "s2lab/errors.hpp"
#include "s2lab/kernels.hpp"

namespace s2lab::kernels {

std::string_view to_string(Isa isa) noexcept {
  switch (isa) {
    case Isa::Scalar:
      return "scalar";
    case Isa::Avx2:
      return "avx2";
  }
  return "unknown";
}

bool isa_available(Isa isa) noexcept {
  switch (isa) {
    case Isa::Scalar:
      return true;
    case Isa::Avx2:
#if defined(S2LAB_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
  }
  return false;
}

Isa detected_isa() noexcept {
  static const Isa isa = isa_available(Isa::Avx2) ? Isa::Avx2 : Isa::Scalar;
  return isa;
}

Isa active_isa() noexcept {
  const char* force = std::getenv("S2LAB_FORCE_SCALAR");
  if (force != nullptr && *force != '\0' && std::string(force) != "0") return Isa::Scalar;
  return detected_isa();
}

SymmetricBatch::SymmetricBatch(int dim, std::size_t count) : dim_(dim), count_(count) {
  if (dim != 3 && dim != 4) throw DomainError("SymmetricBatch: dimension must be 3 or 4");
  data_.assign(static_cast<std::size_t>(packed_size()) * count, 0.0);
}

void SymmetricBatch::set(std::size_t i, const SymmetricMatrix& m) {
  if (m.dim() != dim_) throw DomainError("SymmetricBatch::set: dimension mismatch");
  const auto packed = m.packed();
  for (int p = 0; p < packed_size(); ++p) lane(p)[i] = packed[static_cast<std::size_t>(p)];
}

SymmetricMatrix SymmetricBatch::get(std::size_t i) const {
  SymmetricMatrix m(dim_);
  for (int r = 0; r < dim_; ++r)
    for (int c = r; c < dim_; ++c) m.set(r, c, lane(SymmetricMatrix::packed_index(dim_, r, c))[i]);
  return m;
}

void sigma_batch(const SymmetricBatch& batch, std::span<double> out, Isa isa) {
  const std::size_t n = batch.size();
  if (out.size() < static_cast<std::size_t>(batch.dim()) * n)
    throw std::invalid_argument("sigma_batch: output span too small");
  if (!isa_available(isa)) throw std::invalid_argument("sigma_batch: variant not available");

  const double* lanes[10];
  double* outs[4];
  for (int p = 0; p < batch.packed_size(); ++p) lanes[p] = batch.lane(p).data();
  for (int k = 0; k < batch.dim(); ++k) outs[k] = out.data() + static_cast<std::size_t>(k) * n;

  switch (isa) {
    case Isa::Scalar:
      detail::sigma_batch_scalar(batch.dim(), n, lanes, outs);
      return;
    case Isa::Avx2:
#if defined(S2LAB_HAVE_AVX2)
      detail::sigma_batch_avx2(batch.dim(), n, lanes, outs);
      return;
#else
      break;
#endif
  }
  detail::sigma_batch_scalar(batch.dim(), n, lanes, outs);
}

std::vector<double> sigma_batch(const SymmetricBatch& batch) {
  std::vector<double> out(static_cast<std::size_t>(batch.dim()) * batch.size());
  sigma_batch(batch, out);
  return out;
}

void in_cone_batch(const SymmetricBatch& batch, int k, std::span<std::uint8_t> out) {
  if (k < 1 || k > batch.dim()) throw DomainError("in_cone_batch: k out of range");
  if (out.size() < batch.size()) throw std::invalid_argument("in_cone_batch: output span too small");
  const auto sig = sigma_batch(batch);
  const std::size_t n = batch.size();
  for (std::size_t i = 0; i < n; ++i) {
    bool inside = true;
    for (int j = 0; j < k && inside; ++j) inside = sig[static_cast<std::size_t>(j) * n + i] > 0.0;
    out[i] = inside ? 1 : 0;
  }
}

}  // namespace s2lab::kernels
