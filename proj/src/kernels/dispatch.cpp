#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "polysum/kernels.hpp"

namespace polysum::kernels {

const Funcs* avx2_funcs_or_null();

#ifndef POLYSUM_BUILD_AVX2
const Funcs* avx2_funcs_or_null() { return nullptr; }
#endif

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(_M_X64)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

namespace {

Backend pick_default() {
  if (const char* env = std::getenv("POLYSUM_KERNELS")) {
    const std::string v(env);
    if (v == "scalar") return Backend::scalar;
    if (v == "avx2") return Backend::avx2;
  }
  if (avx2_funcs_or_null() != nullptr && cpu_has_avx2()) return Backend::avx2;
  return Backend::scalar;
}

std::atomic<Backend> g_backend{pick_default()};

}  // namespace

Backend active_backend() { return g_backend.load(std::memory_order_relaxed); }

const Funcs& funcs_for(Backend b) {
  if (b == Backend::avx2) {
    const Funcs* f = avx2_funcs_or_null();
    if (f == nullptr || !cpu_has_avx2()) {
      throw std::invalid_argument("avx2 kernels unavailable on this build/CPU");
    }
    return *f;
  }
  return scalar_funcs();
}

void force_backend(Backend b) {
  funcs_for(b);  // validates availability
  g_backend.store(b, std::memory_order_relaxed);
}

const Funcs& active() { return funcs_for(active_backend()); }

}  // namespace polysum::kernels
