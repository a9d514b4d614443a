#include "kernels/sigma_batch.hpp"

#include "kernels/sigma_formulas.hpp"

namespace s2lab::kernels::detail {

void sigma_batch_scalar(int dim, std::size_t count, const double* const* lanes,
                        double* const* out) {
  double m[10];
  double s[4];
  const int packed = dim * (dim + 1) / 2;
  for (std::size_t i = 0; i < count; ++i) {
    for (int p = 0; p < packed; ++p) m[p] = lanes[p][i];
    if (dim == 3) {
      sigma_dim3(m, s);
    } else {
      sigma_dim4(m, s);
    }
    for (int k = 0; k < dim; ++k) out[k][i] = s[k];
  }
}

}  // namespace s2lab::kernels::detail
