#include "vplague/kernels/exposure_kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace vplague::kernels {

namespace detail {
#if defined(VPLAGUE_HAVE_AVX2)
const KernelTable& avx2_kernels();
#endif
#if defined(VPLAGUE_HAVE_NEON)
const KernelTable& neon_kernels();
#endif
}  // namespace detail

namespace {

std::atomic<const KernelTable*> g_active{nullptr};

const KernelTable* table_for(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return &scalar_table();
    case Isa::Avx2: return avx2_table();
    case Isa::Neon: return neon_table();
  }
  return nullptr;
}

const KernelTable* pick_default() {
  if (const char* env = std::getenv("VPLAGUE_ISA")) {
    const std::string want(env);
    for (Isa isa : {Isa::Scalar, Isa::Avx2, Isa::Neon})
      if (want == to_string(isa))
        if (const KernelTable* t = table_for(isa)) return t;
  }
  if (const KernelTable* t = avx2_table()) return t;
  if (const KernelTable* t = neon_table()) return t;
  return &scalar_table();
}

}  // namespace

const KernelTable* avx2_table() {
#if defined(VPLAGUE_HAVE_AVX2)
  static const bool supported = __builtin_cpu_supports("avx2");
  return supported ? &detail::avx2_kernels() : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable* neon_table() {
#if defined(VPLAGUE_HAVE_NEON)
  return &detail::neon_kernels();
#else
  return nullptr;
#endif
}

std::string_view to_string(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
    case Isa::Neon: return "neon";
  }
  return "unknown";
}

bool isa_available(Isa isa) { return table_for(isa) != nullptr; }

const KernelTable& active() {
  const KernelTable* t = g_active.load(std::memory_order_acquire);
  if (t == nullptr) {
    const KernelTable* chosen = pick_default();
    g_active.compare_exchange_strong(t, chosen, std::memory_order_acq_rel);
    t = g_active.load(std::memory_order_acquire);
  }
  return *t;
}

Isa active_isa() { return active().isa; }

bool force_isa(Isa isa) {
  const KernelTable* t = table_for(isa);
  if (t == nullptr) return false;
  g_active.store(t, std::memory_order_release);
  return true;
}

}  // namespace vplague::kernels
