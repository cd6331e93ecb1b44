#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>

// Inner loops of the simulator. Every kernel has a scalar reference
// implementation; wider variants are chosen at runtime from CPU features and
// must agree with the reference to rounding (see tests/test_kernels.cpp).

namespace reshape::kernels {

using cplx = std::complex<double>;

enum class Isa { scalar, avx2 };

struct KernelTable {
  Isa isa;
  const char* name;
  // x[i] *= m[i]
  void (*mul_inplace)(cplx* x, const cplx* m, std::size_t n);
  // [a; b] <- [[c, -conj(g)], [g, c]] [a; b] per sample, with c^2 + |g|^2 = 1
  void (*rotate)(cplx* a, cplx* b, const double* c, const cplx* g, std::size_t n);
  // sum |x|^2
  double (*norm2)(const cplx* x, std::size_t n);
  // sum conj(a) b
  cplx (*inner)(const cplx* a, const cplx* b, std::size_t n);
  // sum a b
  cplx (*dot)(const cplx* a, const cplx* b, std::size_t n);
};

const KernelTable& scalar_table() noexcept;
#if defined(RESHAPE_HAVE_AVX2)
const KernelTable& avx2_table() noexcept;
#endif

/// True if the variant was compiled in and the CPU supports it.
bool available(Isa isa) noexcept;

/// Table in use. Picks the widest available variant on first call unless
/// RESHAPE_SIMD=scalar is set in the environment.
const KernelTable& active() noexcept;

/// Forces a variant; throws ConfigError if it is not available.
void select(Isa isa);

std::string_view isa_name(Isa isa) noexcept;

inline void mul_inplace(std::span<cplx> x, std::span<const cplx> m) { active().mul_inplace(x.data(), m.data(), x.size()); }
inline void rotate(std::span<cplx> a, std::span<cplx> b, std::span<const double> c, std::span<const cplx> g) {
  active().rotate(a.data(), b.data(), c.data(), g.data(), a.size());
}
inline double norm2(std::span<const cplx> x) { return active().norm2(x.data(), x.size()); }
inline cplx inner(std::span<const cplx> a, std::span<const cplx> b) { return active().inner(a.data(), b.data(), a.size()); }
inline cplx dot(std::span<const cplx> a, std::span<const cplx> b) { return active().dot(a.data(), b.data(), a.size()); }

} // namespace reshape::kernels
