#include "reshape/fft.hpp"

#include "reshape/error.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <utility>
#include <vector>

namespace reshape::fft {
namespace {

struct Plans {
  fftw_plan fwd_inplace = nullptr;
  fftw_plan bwd_inplace = nullptr;
  fftw_plan fwd_outofplace = nullptr;
  fftw_plan bwd_outofplace = nullptr;
};

class PlanCache {
public:
  ~PlanCache() {
    for (auto& [n, p] : plans_) {
      fftw_destroy_plan(p.fwd_inplace);
      fftw_destroy_plan(p.bwd_inplace);
      fftw_destroy_plan(p.fwd_outofplace);
      fftw_destroy_plan(p.bwd_outofplace);
    }
  }

  // The FFTW planner is not thread-safe; plan creation happens under the lock.
  // fftw_execute_dft on an existing plan is.
  const Plans& get(std::size_t n) {
    std::lock_guard lock(mutex_);
    if (auto it = plans_.find(n); it != plans_.end())
      return it->second;
    std::vector<cplx> a(n), b(n);
    auto* pa = reinterpret_cast<fftw_complex*>(a.data());
    auto* pb = reinterpret_cast<fftw_complex*>(b.data());
    const int ni = static_cast<int>(n);
    constexpr unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    Plans p;
    p.fwd_inplace = fftw_plan_dft_1d(ni, pa, pa, FFTW_FORWARD, flags);
    p.bwd_inplace = fftw_plan_dft_1d(ni, pa, pa, FFTW_BACKWARD, flags);
    p.fwd_outofplace = fftw_plan_dft_1d(ni, pa, pb, FFTW_FORWARD, flags);
    p.bwd_outofplace = fftw_plan_dft_1d(ni, pa, pb, FFTW_BACKWARD, flags);
    if (!p.fwd_inplace || !p.bwd_inplace || !p.fwd_outofplace || !p.bwd_outofplace)
      throw Error("FFTW planning failed");
    return plans_.emplace(n, p).first->second;
  }

private:
  std::mutex mutex_;
  std::map<std::size_t, Plans> plans_;
};

PlanCache& cache() {
  static PlanCache c;
  return c;
}

void run(std::span<const cplx> in, std::span<cplx> out, bool fwd) {
  if (in.size() != out.size())
    throw ConfigError("fft input and output sizes differ");
  if (in.empty())
    return;
  const Plans& p = cache().get(in.size());
  const bool inplace = in.data() == out.data();
  fftw_plan plan = fwd ? (inplace ? p.fwd_inplace : p.fwd_outofplace) : (inplace ? p.bwd_inplace : p.bwd_outofplace);
  // FFTW_DESTROY_INPUT is not set for c2c plans, so the const_cast is safe.
  auto* pin = reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in.data()));
  auto* pout = reinterpret_cast<fftw_complex*>(out.data());
  fftw_execute_dft(plan, pin, pout);
}

} // namespace

void forward(std::span<const cplx> in, std::span<cplx> out) { run(in, out, true); }
void backward(std::span<const cplx> in, std::span<cplx> out) { run(in, out, false); }

} // namespace reshape::fft
