#pragma once

#include "reshape/comb.hpp"
#include "reshape/grid.hpp"

#include <span>
#include <vector>

namespace reshape {

/// Carrier wavelengths of the three interacting bands (nm).
inline constexpr double kSignalNm = 1532.1;
inline constexpr double kPumpNm = 1556.6;
inline constexpr double kSumNm = 772.1;

/// Sampled baseband field on a TimeGrid. The carrier is bookkeeping only.
class ComplexEnvelope {
public:
  /// All-zero envelope.
  ComplexEnvelope(TimeGrid grid, double carrier_nm);
  /// Throws ConfigError if values.size() != grid.samples().
  ComplexEnvelope(TimeGrid grid, std::vector<cplx> values, double carrier_nm);

  const TimeGrid& grid() const noexcept { return grid_; }
  double carrier_nm() const noexcept { return carrier_nm_; }
  std::size_t size() const noexcept { return values_.size(); }

  std::span<const cplx> values() const noexcept { return values_; }
  std::span<cplx> values() noexcept { return values_; }
  const cplx& operator[](std::size_t i) const noexcept { return values_[i]; }
  cplx& operator[](std::size_t i) noexcept { return values_[i]; }

  /// Sum |E|^2 dt.
  double energy() const;
  double peak_modulus() const;

  ComplexEnvelope& operator*=(cplx s);
  ComplexEnvelope& operator+=(const ComplexEnvelope& other);

  bool operator==(const ComplexEnvelope&) const = default;

private:
  TimeGrid grid_;
  std::vector<cplx> values_;
  double carrier_nm_;
};

ComplexEnvelope operator*(cplx s, ComplexEnvelope e);
ComplexEnvelope operator+(ComplexEnvelope a, const ComplexEnvelope& b);

/// Throws ConfigError unless both envelopes share a grid.
void require_same_grid(const ComplexEnvelope& a, const ComplexEnvelope& b, const char* what);

/// Sum conj(a) b dt.
cplx overlap(const ComplexEnvelope& a, const ComplexEnvelope& b);

/// Energy-normalized L2 distance |a - b| / sqrt(E_a).
double relative_distance(const ComplexEnvelope& a, const ComplexEnvelope& b);

} // namespace reshape
