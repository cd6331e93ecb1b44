#pragma once

#include <complex>
#include <cstddef>
#include <span>

namespace reshape::fft {

using cplx = std::complex<double>;

// Unnormalized transforms:
//   forward:  X_j = sum_i x_i exp(-2 pi i j i / N)
//   backward: x_i = sum_j X_j exp(+2 pi i j i / N)
// backward(forward(x)) = N x. Plans are cached per size; execution is
// thread-safe, and in/out may alias.

void forward(std::span<const cplx> in, std::span<cplx> out);
void backward(std::span<const cplx> in, std::span<cplx> out);

inline void forward(std::span<cplx> x) { forward(std::span<const cplx>(x), x); }
inline void backward(std::span<cplx> x) { backward(std::span<const cplx>(x), x); }

} // namespace reshape::fft
