#include "vplague/kernels/exposure_kernels.hpp"

#include <algorithm>

namespace vplague::kernels {

namespace {

double survival_product_scalar(const double* p, std::size_t n) {
  double lane[4] = {1.0, 1.0, 1.0, 1.0};
  for (std::size_t i = 0; i < n; ++i) lane[i & 3] *= (1.0 - p[i]);
  return (lane[0] * lane[1]) * (lane[2] * lane[3]);
}

void scale_clamp_scalar(const double* m, std::size_t n, double beta, double* out) {
  for (std::size_t i = 0; i < n; ++i) out[i] = std::min(std::max(beta * m[i], 0.0), 1.0);
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable table{Isa::Scalar, &survival_product_scalar, &scale_clamp_scalar};
  return table;
}

}  // namespace vplague::kernels
