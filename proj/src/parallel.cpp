#include "reshape/parallel.hpp"

namespace reshape {
namespace {

std::atomic<unsigned>& setting() noexcept {
  static std::atomic<unsigned> n{std::max(1u, std::thread::hardware_concurrency())};
  return n;
}

} // namespace

unsigned default_threads() noexcept { return setting().load(); }
void set_default_threads(unsigned n) noexcept { setting().store(std::max(1u, n)); }

} // namespace reshape
