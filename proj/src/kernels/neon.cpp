// AArch64 only. Two float64x2 registers hold lanes {0,1} and {2,3}.
#include "vplague/kernels/exposure_kernels.hpp"

#include <arm_neon.h>

namespace vplague::kernels::detail {

namespace {

double survival_product_neon(const double* p, std::size_t n) {
  const float64x2_t one = vdupq_n_f64(1.0);
  float64x2_t lo = one;
  float64x2_t hi = one;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    lo = vmulq_f64(lo, vsubq_f64(one, vld1q_f64(p + i)));
    hi = vmulq_f64(hi, vsubq_f64(one, vld1q_f64(p + i + 2)));
  }
  double lane[4];
  vst1q_f64(lane, lo);
  vst1q_f64(lane + 2, hi);
  for (; i < n; ++i) lane[i & 3] *= (1.0 - p[i]);
  return (lane[0] * lane[1]) * (lane[2] * lane[3]);
}

void scale_clamp_neon(const double* m, std::size_t n, double beta, double* out) {
  const float64x2_t b = vdupq_n_f64(beta);
  const float64x2_t zero = vdupq_n_f64(0.0);
  const float64x2_t one = vdupq_n_f64(1.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    float64x2_t x = vmulq_f64(b, vld1q_f64(m + i));
    vst1q_f64(out + i, vminq_f64(vmaxq_f64(x, zero), one));
  }
  for (; i < n; ++i) {
    const double x = beta * m[i];
    out[i] = x < 0.0 ? 0.0 : (x > 1.0 ? 1.0 : x);
  }
}

}  // namespace

const KernelTable& neon_kernels() {
  static const KernelTable table{Isa::Neon, &survival_product_neon, &scale_clamp_neon};
  return table;
}

}  // namespace vplague::kernels::detail
