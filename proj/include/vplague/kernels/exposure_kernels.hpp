#pragma once

#include <cstddef>
#include <span>
#include <string_view>

// Data-parallel inner loops of exposure composition. Each kernel has a scalar
// reference and optional AVX2 / NEON variants. Variants are required to be
// bit-identical to the reference: products accumulate in four fixed lanes
// (element i goes to lane i % 4) and lanes reduce as (l0*l1)*(l2*l3).

namespace vplague::kernels {

enum class Isa { Scalar, Avx2, Neon };

struct KernelTable {
  Isa isa;
  /// prod_i (1 - p[i])
  double (*survival_product)(const double* p, std::size_t n);
  /// out[i] = clamp(beta * multiplier[i], 0, 1)
  void (*scale_clamp)(const double* multiplier, std::size_t n, double beta, double* out);
};

const KernelTable& scalar_table();
/// nullptr when the variant was not compiled in or the CPU lacks support.
const KernelTable* avx2_table();
const KernelTable* neon_table();

std::string_view to_string(Isa isa);
bool isa_available(Isa isa);

/// Best available variant unless overridden via force_isa() or the
/// VPLAGUE_ISA environment variable (scalar|avx2|neon).
const KernelTable& active();
Isa active_isa();
/// Returns false (and leaves the selection alone) if `isa` is unavailable.
bool force_isa(Isa isa);

inline double survival_product(std::span<const double> p) {
  return active().survival_product(p.data(), p.size());
}

inline void scale_clamp(std::span<const double> multiplier, double beta, std::span<double> out) {
  active().scale_clamp(multiplier.data(), multiplier.size(), beta, out.data());
}

}  // namespace vplague::kernels
