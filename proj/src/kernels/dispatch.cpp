#include "reshape/error.hpp"
#include "reshape/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace reshape::kernels {
namespace {

bool cpu_has_avx2() noexcept {
#if defined(RESHAPE_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable* pick_default() noexcept {
  if (const char* env = std::getenv("RESHAPE_SIMD"); env && std::string(env) == "scalar")
    return &scalar_table();
#if defined(RESHAPE_HAVE_AVX2)
  if (cpu_has_avx2())
    return &avx2_table();
#endif
  return &scalar_table();
}

std::atomic<const KernelTable*>& current() noexcept {
  static std::atomic<const KernelTable*> table{pick_default()};
  return table;
}

} // namespace

bool available(Isa isa) noexcept {
  switch (isa) {
  case Isa::scalar:
    return true;
  case Isa::avx2:
    return cpu_has_avx2();
  }
  return false;
}

const KernelTable& active() noexcept { return *current().load(std::memory_order_acquire); }

void select(Isa isa) {
  if (!available(isa))
    throw ConfigError("SIMD variant '" + std::string(isa_name(isa)) + "' is not available on this machine");
#if defined(RESHAPE_HAVE_AVX2)
  current().store(isa == Isa::avx2 ? &avx2_table() : &scalar_table(), std::memory_order_release);
#else
  current().store(&scalar_table(), std::memory_order_release);
#endif
}

std::string_view isa_name(Isa isa) noexcept {
  switch (isa) {
  case Isa::scalar:
    return "scalar";
  case Isa::avx2:
    return "avx2";
  }
  return "unknown";
}

} // namespace reshape::kernels
