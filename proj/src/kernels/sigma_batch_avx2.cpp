// Built with -mavx2 (see src/CMakeLists.txt). Only reached through the
// runtime dispatcher after the CPU has been checked for AVX2.

#include <immintrin.h>

#include "kernels/sigma_batch.hpp"
#include "kernels/sigma_formulas.hpp"

namespace s2lab::kernels::detail {
namespace {

struct Lane4 {
  __m256d v;
};

inline Lane4 operator+(const Lane4& a, const Lane4& b) { return {_mm256_add_pd(a.v, b.v)}; }
inline Lane4 operator-(const Lane4& a, const Lane4& b) { return {_mm256_sub_pd(a.v, b.v)}; }
inline Lane4 operator*(const Lane4& a, const Lane4& b) { return {_mm256_mul_pd(a.v, b.v)}; }

}  // namespace

void sigma_batch_avx2(int dim, std::size_t count, const double* const* lanes,
                      double* const* out) {
  const int packed = dim * (dim + 1) / 2;
  Lane4 m[10];
  Lane4 s[4];
  std::size_t i = 0;
  for (; i + 4 <= count; i += 4) {
    for (int p = 0; p < packed; ++p) m[p].v = _mm256_loadu_pd(lanes[p] + i);
    if (dim == 3) {
      sigma_dim3(m, s);
    } else {
      sigma_dim4(m, s);
    }
    for (int k = 0; k < dim; ++k) _mm256_storeu_pd(out[k] + i, s[k].v);
  }
  if (i < count) {
    const double* tail_lanes[10];
    double* tail_out[4];
    for (int p = 0; p < packed; ++p) tail_lanes[p] = lanes[p] + i;
    for (int k = 0; k < dim; ++k) tail_out[k] = out[k] + i;
    sigma_batch_scalar(dim, count - i, tail_lanes, tail_out);
  }
}

}  // namespace s2lab::kernels::detail
