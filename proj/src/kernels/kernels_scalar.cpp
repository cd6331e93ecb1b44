#include "reshape/kernels.hpp"

namespace reshape::kernels {
namespace {

// Plain real arithmetic; std::complex operator* carries NaN recovery branches.

void mul_inplace_scalar(cplx* x, const cplx* m, std::size_t n) {
  auto* xd = reinterpret_cast<double*>(x);
  const auto* md = reinterpret_cast<const double*>(m);
  for (std::size_t i = 0; i < n; ++i) {
    const double xr = xd[2 * i], xi = xd[2 * i + 1];
    const double mr = md[2 * i], mi = md[2 * i + 1];
    xd[2 * i] = xr * mr - xi * mi;
    xd[2 * i + 1] = xr * mi + xi * mr;
  }
}

void rotate_scalar(cplx* a, cplx* b, const double* c, const cplx* g, std::size_t n) {
  auto* ad = reinterpret_cast<double*>(a);
  auto* bd = reinterpret_cast<double*>(b);
  const auto* gd = reinterpret_cast<const double*>(g);
  for (std::size_t i = 0; i < n; ++i) {
    const double ar = ad[2 * i], ai = ad[2 * i + 1];
    const double br = bd[2 * i], bi = bd[2 * i + 1];
    const double gr = gd[2 * i], gi = gd[2 * i + 1];
    const double ci = c[i];
    // conj(g) b = (gr br + gi bi) + i (gr bi - gi br)
    ad[2 * i] = ci * ar - (gr * br + gi * bi);
    ad[2 * i + 1] = ci * ai - (gr * bi - gi * br);
    // g a = (gr ar - gi ai) + i (gr ai + gi ar)
    bd[2 * i] = ci * br + (gr * ar - gi * ai);
    bd[2 * i + 1] = ci * bi + (gr * ai + gi * ar);
  }
}

double norm2_scalar(const cplx* x, std::size_t n) {
  const auto* xd = reinterpret_cast<const double*>(x);
  double s = 0.0;
  for (std::size_t i = 0; i < 2 * n; ++i)
    s += xd[i] * xd[i];
  return s;
}

cplx inner_scalar(const cplx* a, const cplx* b, std::size_t n) {
  const auto* ad = reinterpret_cast<const double*>(a);
  const auto* bd = reinterpret_cast<const double*>(b);
  double re = 0.0, im = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double ar = ad[2 * i], ai = ad[2 * i + 1];
    const double br = bd[2 * i], bi = bd[2 * i + 1];
    re += ar * br + ai * bi;
    im += ar * bi - ai * br;
  }
  return {re, im};
}

cplx dot_scalar(const cplx* a, const cplx* b, std::size_t n) {
  const auto* ad = reinterpret_cast<const double*>(a);
  const auto* bd = reinterpret_cast<const double*>(b);
  double re = 0.0, im = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double ar = ad[2 * i], ai = ad[2 * i + 1];
    const double br = bd[2 * i], bi = bd[2 * i + 1];
    re += ar * br - ai * bi;
    im += ar * bi + ai * br;
  }
  return {re, im};
}

constexpr KernelTable kScalar{
    Isa::scalar, "scalar", mul_inplace_scalar, rotate_scalar, norm2_scalar, inner_scalar, dot_scalar,
};

} // namespace

const KernelTable& scalar_table() noexcept { return kScalar; }

} // namespace reshape::kernels
