// Compiled with -mavx2 -mfma; only reached through the dispatch table after a
// CPUID check.

#include "reshape/kernels.hpp"

#include <immintrin.h>

namespace reshape::kernels {
namespace {

// Two complex doubles per register, laid out (re0, im0, re1, im1).

inline __m256d cmul(__m256d x, __m256d m) {
  const __m256d m_re = _mm256_movedup_pd(m);
  const __m256d m_im = _mm256_permute_pd(m, 0xF);
  const __m256d x_sw = _mm256_permute_pd(x, 0x5);
  return _mm256_fmaddsub_pd(x, m_re, _mm256_mul_pd(x_sw, m_im));
}

inline __m256d conj(__m256d x) {
  return _mm256_xor_pd(x, _mm256_set_pd(-0.0, 0.0, -0.0, 0.0));
}

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

// (v0 - v1 + v2 - v3) and (v0 + v1 + v2 + v3) helpers for the complex sums.
inline double hsum_even_minus_odd(__m256d v) {
  return hsum(_mm256_xor_pd(v, _mm256_set_pd(-0.0, 0.0, -0.0, 0.0)));
}

void mul_inplace_avx2(cplx* x, const cplx* m, std::size_t n) {
  auto* xd = reinterpret_cast<double*>(x);
  const auto* md = reinterpret_cast<const double*>(m);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d xv = _mm256_loadu_pd(xd + 2 * i);
    const __m256d mv = _mm256_loadu_pd(md + 2 * i);
    _mm256_storeu_pd(xd + 2 * i, cmul(xv, mv));
  }
  if (i < n)
    scalar_table().mul_inplace(x + i, m + i, n - i);
}

void rotate_avx2(cplx* a, cplx* b, const double* c, const cplx* g, std::size_t n) {
  auto* ad = reinterpret_cast<double*>(a);
  auto* bd = reinterpret_cast<double*>(b);
  const auto* gd = reinterpret_cast<const double*>(g);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d av = _mm256_loadu_pd(ad + 2 * i);
    const __m256d bv = _mm256_loadu_pd(bd + 2 * i);
    const __m256d gv = _mm256_loadu_pd(gd + 2 * i);
    // (c0, c0, c1, c1)
    const __m256d cv = _mm256_permute4x64_pd(_mm256_castpd128_pd256(_mm_loadu_pd(c + i)), 0x50);
    const __m256d a_new = _mm256_fmsub_pd(cv, av, cmul(conj(gv), bv));
    const __m256d b_new = _mm256_fmadd_pd(cv, bv, cmul(gv, av));
    _mm256_storeu_pd(ad + 2 * i, a_new);
    _mm256_storeu_pd(bd + 2 * i, b_new);
  }
  if (i < n)
    scalar_table().rotate(a + i, b + i, c + i, g + i, n - i);
}

double norm2_avx2(const cplx* x, std::size_t n) {
  const auto* xd = reinterpret_cast<const double*>(x);
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v0 = _mm256_loadu_pd(xd + 2 * i);
    const __m256d v1 = _mm256_loadu_pd(xd + 2 * i + 4);
    acc0 = _mm256_fmadd_pd(v0, v0, acc0);
    acc1 = _mm256_fmadd_pd(v1, v1, acc1);
  }
  double s = hsum(_mm256_add_pd(acc0, acc1));
  if (i < n)
    s += scalar_table().norm2(x + i, n - i);
  return s;
}

cplx inner_avx2(const cplx* a, const cplx* b, std::size_t n) {
  const auto* ad = reinterpret_cast<const double*>(a);
  const auto* bd = reinterpret_cast<const double*>(b);
  __m256d acc_re = _mm256_setzero_pd(); // (ar br, ai bi)
  __m256d acc_im = _mm256_setzero_pd(); // (ar bi, ai br)
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d av = _mm256_loadu_pd(ad + 2 * i);
    const __m256d bv = _mm256_loadu_pd(bd + 2 * i);
    acc_re = _mm256_fmadd_pd(av, bv, acc_re);
    acc_im = _mm256_fmadd_pd(av, _mm256_permute_pd(bv, 0x5), acc_im);
  }
  cplx s{hsum(acc_re), hsum_even_minus_odd(acc_im)};
  if (i < n)
    s += scalar_table().inner(a + i, b + i, n - i);
  return s;
}

cplx dot_avx2(const cplx* a, const cplx* b, std::size_t n) {
  const auto* ad = reinterpret_cast<const double*>(a);
  const auto* bd = reinterpret_cast<const double*>(b);
  __m256d acc_re = _mm256_setzero_pd(); // (ar br, ai bi)
  __m256d acc_im = _mm256_setzero_pd(); // (ar bi, ai br)
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d av = _mm256_loadu_pd(ad + 2 * i);
    const __m256d bv = _mm256_loadu_pd(bd + 2 * i);
    acc_re = _mm256_fmadd_pd(av, bv, acc_re);
    acc_im = _mm256_fmadd_pd(av, _mm256_permute_pd(bv, 0x5), acc_im);
  }
  cplx s{hsum_even_minus_odd(acc_re), hsum(acc_im)};
  if (i < n)
    s += scalar_table().dot(a + i, b + i, n - i);
  return s;
}

constexpr KernelTable kAvx2{
    Isa::avx2, "avx2", mul_inplace_avx2, rotate_avx2, norm2_avx2, inner_avx2, dot_avx2,
};

} // namespace

const KernelTable& avx2_table() noexcept { return kAvx2; }

} // namespace reshape::kernels
