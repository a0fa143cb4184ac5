#include <atomic>
#include <cstdlib>
#include <string>

#include "finn/simd/kernels.hpp"

namespace finn::simd {

#if defined(FINN_HAVE_AVX2)
namespace avx2 {
const KernelTable& table();
}
#endif
#if defined(FINN_HAVE_NEON)
namespace neon {
const KernelTable& table();
}
#endif

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
    case Isa::neon: return "neon";
  }
  return "unknown";
}

const KernelTable* avx2_kernels() {
#if defined(FINN_HAVE_AVX2)
  static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return supported ? &avx2::table() : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable* neon_kernels() {
#if defined(FINN_HAVE_NEON)
  return &neon::table();
#else
  return nullptr;
#endif
}

std::vector<const KernelTable*> available_kernels() {
  std::vector<const KernelTable*> tables{&scalar_kernels()};
  if (const auto* t = avx2_kernels()) tables.push_back(t);
  if (const auto* t = neon_kernels()) tables.push_back(t);
  return tables;
}

namespace {

const KernelTable* select_default() {
  const char* env = std::getenv("FINN_SIMD");
  const std::string want = env ? env : "auto";
  if (want == "scalar") return &scalar_kernels();
  if (want == "avx2" && avx2_kernels()) return avx2_kernels();
  if (want == "neon" && neon_kernels()) return neon_kernels();
  if (const auto* t = avx2_kernels()) return t;
  if (const auto* t = neon_kernels()) return t;
  return &scalar_kernels();
}

std::atomic<const KernelTable*>& slot() {
  static std::atomic<const KernelTable*> current{select_default()};
  return current;
}

}  // namespace

const KernelTable& active() { return *slot().load(std::memory_order_relaxed); }

void set_active(const KernelTable& table) { slot().store(&table, std::memory_order_relaxed); }

}  // namespace finn::simd
