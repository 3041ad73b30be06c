#include <atomic>
#include <cstdlib>
#include <string>

#include "kernels_impl.hpp"
#include "pdelearn/simd/kernels.hpp"

namespace pdelearn::simd {
namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable* table_for(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return &scalar_kernels();
    case Isa::kAvx2:
      return avx2_kernels();
    case Isa::kNeon:
      return neon_kernels();
  }
  return nullptr;
}

const KernelTable* best_available() {
  if (const char* env = std::getenv("PDELEARN_ISA")) {
    const std::string want(env);
    if (want == "scalar") return &scalar_kernels();
    if (want == "avx2" && avx2_kernels() != nullptr) return avx2_kernels();
    if (want == "neon" && neon_kernels() != nullptr) return neon_kernels();
  }
  if (const KernelTable* t = avx2_kernels()) return t;
  if (const KernelTable* t = neon_kernels()) return t;
  return &scalar_kernels();
}

std::atomic<const KernelTable*>& active_slot() {
  static std::atomic<const KernelTable*> slot{best_available()};
  return slot;
}

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return "scalar";
    case Isa::kAvx2:
      return "avx2";
    case Isa::kNeon:
      return "neon";
  }
  return "unknown";
}

const KernelTable* avx2_kernels() {
  static const KernelTable* table = cpu_has_avx2() ? detail::avx2_table() : nullptr;
  return table;
}

const KernelTable* neon_kernels() { return detail::neon_table(); }

bool isa_available(Isa isa) { return table_for(isa) != nullptr; }

const KernelTable& active() { return *active_slot().load(std::memory_order_acquire); }

void force_isa(Isa isa) {
  if (const KernelTable* t = table_for(isa)) active_slot().store(t, std::memory_order_release);
}

void reset_isa() { active_slot().store(best_available(), std::memory_order_release); }

}  // namespace pdelearn::simd
