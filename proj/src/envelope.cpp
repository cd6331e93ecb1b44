#include "reshape/envelope.hpp"

#include "reshape/error.hpp"
#include "reshape/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace reshape {

ComplexEnvelope::ComplexEnvelope(TimeGrid grid, double carrier_nm)
    : grid_(grid), values_(grid.samples(), cplx{}), carrier_nm_(carrier_nm) {}

ComplexEnvelope::ComplexEnvelope(TimeGrid grid, std::vector<cplx> values, double carrier_nm)
    : grid_(grid), values_(std::move(values)), carrier_nm_(carrier_nm) {
  if (values_.size() != grid_.samples())
    throw ConfigError("envelope has " + std::to_string(values_.size()) + " samples, grid has " +
                      std::to_string(grid_.samples()));
}

double ComplexEnvelope::energy() const { return kernels::norm2(values_) * grid_.dt(); }

double ComplexEnvelope::peak_modulus() const {
  double m = 0.0;
  for (const auto& v : values_)
    m = std::max(m, std::abs(v));
  return m;
}

ComplexEnvelope& ComplexEnvelope::operator*=(cplx s) {
  for (auto& v : values_)
    v *= s;
  return *this;
}

ComplexEnvelope& ComplexEnvelope::operator+=(const ComplexEnvelope& other) {
  require_same_grid(*this, other, "envelope sum");
  for (std::size_t i = 0; i < values_.size(); ++i)
    values_[i] += other.values_[i];
  return *this;
}

ComplexEnvelope operator*(cplx s, ComplexEnvelope e) {
  e *= s;
  return e;
}

ComplexEnvelope operator+(ComplexEnvelope a, const ComplexEnvelope& b) {
  a += b;
  return a;
}

void require_same_grid(const ComplexEnvelope& a, const ComplexEnvelope& b, const char* what) {
  if (!(a.grid() == b.grid()))
    throw ConfigError(std::string(what) + ": envelopes live on different time grids");
}

cplx overlap(const ComplexEnvelope& a, const ComplexEnvelope& b) {
  require_same_grid(a, b, "overlap");
  return kernels::inner(a.values(), b.values()) * a.grid().dt();
}

double relative_distance(const ComplexEnvelope& a, const ComplexEnvelope& b) {
  require_same_grid(a, b, "relative_distance");
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    d += std::norm(a[i] - b[i]);
  const double ea = kernels::norm2(a.values());
  if (ea == 0.0)
    return std::sqrt(d);
  return std::sqrt(d / ea);
}

} // namespace reshape
