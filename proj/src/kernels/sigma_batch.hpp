#pragma once

#include <cstddef>

namespace s2lab::kernels::detail {

// lanes[p][i]: packed entry p of matrix i.  out[k-1][i]: sigma_k of matrix i.
void sigma_batch_scalar(int dim, std::size_t count, const double* const* lanes,
                        double* const* out);

#if defined(S2LAB_HAVE_AVX2)
void sigma_batch_avx2(int dim, std::size_t count, const double* const* lanes,
                      double* const* out);
#endif

}  // namespace s2lab::kernels::detail
