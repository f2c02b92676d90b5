// Compiled with -mavx2 on x86-64 only; reached through the dispatcher after a
// runtime CPU check.
#include "vplague/kernels/exposure_kernels.hpp"

#include <immintrin.h>

namespace vplague::kernels::detail {

namespace {

double survival_product_avx2(const double* p, std::size_t n) {
  const __m256d one = _mm256_set1_pd(1.0);
  __m256d acc = one;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_mul_pd(acc, _mm256_sub_pd(one, _mm256_loadu_pd(p + i)));
  alignas(32) double lane[4];
  _mm256_store_pd(lane, acc);
  for (; i < n; ++i) lane[i & 3] *= (1.0 - p[i]);
  return (lane[0] * lane[1]) * (lane[2] * lane[3]);
}

void scale_clamp_avx2(const double* m, std::size_t n, double beta, double* out) {
  const __m256d b = _mm256_set1_pd(beta);
  const __m256d zero = _mm256_setzero_pd();
  const __m256d one = _mm256_set1_pd(1.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d x = _mm256_mul_pd(b, _mm256_loadu_pd(m + i));
    _mm256_storeu_pd(out + i, _mm256_min_pd(_mm256_max_pd(x, zero), one));
  }
  for (; i < n; ++i) {
    const double x = beta * m[i];
    out[i] = x < 0.0 ? 0.0 : (x > 1.0 ? 1.0 : x);
  }
}

}  // namespace

const KernelTable& avx2_kernels() {
  static const KernelTable table{Isa::Avx2, &survival_product_avx2, &scale_clamp_avx2};
  return table;
}

}  // namespace vplague::kernels::detail
