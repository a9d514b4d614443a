#pragma once

// Batched sigma_k evaluation over many small symmetric matrices.
//
// Matrices are stored structure-of-arrays: lane p holds packed entry p of
// every matrix, so a SIMD register covers the same entry of consecutive
// matrices. A scalar reference variant is always built; an AVX2 variant is
// built on x86-64 and chosen at runtime when the CPU supports it.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "s2lab/symfunc.hpp"

namespace s2lab::kernels {

enum class Isa { Scalar, Avx2 };

std::string_view to_string(Isa isa) noexcept;

/// Best variant the running CPU supports among those compiled in.
Isa detected_isa() noexcept;

/// Variant used by default: detected_isa(), unless the environment variable
/// S2LAB_FORCE_SCALAR is set to a non-empty value other than "0".
Isa active_isa() noexcept;

/// True if this build contains the given variant and the CPU can run it.
bool isa_available(Isa isa) noexcept;

class SymmetricBatch {
 public:
  SymmetricBatch(int dim, std::size_t count);

  int dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return count_; }
  int packed_size() const noexcept { return dim_ * (dim_ + 1) / 2; }

  void set(std::size_t i, const SymmetricMatrix& m);
  SymmetricMatrix get(std::size_t i) const;

  std::span<const double> lane(int p) const noexcept {
    return {data_.data() + static_cast<std::size_t>(p) * count_, count_};
  }
  std::span<double> lane(int p) noexcept {
    return {data_.data() + static_cast<std::size_t>(p) * count_, count_};
  }

 private:
  int dim_;
  std::size_t count_;
  std::vector<double> data_;
};

/// Writes sigma_k of every matrix into out[(k-1) * size + i], k = 1..dim.
/// `out` must hold dim * size values.
void sigma_batch(const SymmetricBatch& batch, std::span<double> out, Isa isa);
inline void sigma_batch(const SymmetricBatch& batch, std::span<double> out) {
  sigma_batch(batch, out, active_isa());
}

/// Convenience wrapper returning a freshly allocated result.
std::vector<double> sigma_batch(const SymmetricBatch& batch);

/// out[i] = 1 iff matrix i lies in the open cone {sigma_1..sigma_k > 0}.
void in_cone_batch(const SymmetricBatch& batch, int k, std::span<std::uint8_t> out);

}  // namespace s2lab::kernels
