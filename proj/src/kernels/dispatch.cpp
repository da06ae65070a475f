#include "hocs/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace hocs::kernels {

namespace detail {
#if defined(HOCS_HAVE_AVX2)
const Ops& avx2_table();
#endif
#if defined(HOCS_HAVE_NEON)
const Ops& neon_table();
#endif
}  // namespace detail

const Ops* avx2_ops() {
#if defined(HOCS_HAVE_AVX2)
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma"))
    return &detail::avx2_table();
#endif
  return nullptr;
}

const Ops* neon_ops() {
#if defined(HOCS_HAVE_NEON)
  // NEON is baseline on aarch64.
  return &detail::neon_table();
#else
  return nullptr;
#endif
}

namespace {

const Ops& select() {
  if (const char* env = std::getenv("HOCS_KERNELS")) {
    if (std::strcmp(env, "scalar") == 0) return scalar_ops();
    if (std::strcmp(env, "avx2") == 0 && avx2_ops()) return *avx2_ops();
    if (std::strcmp(env, "neon") == 0 && neon_ops()) return *neon_ops();
  }
  if (const Ops* t = avx2_ops()) return *t;
  if (const Ops* t = neon_ops()) return *t;
  return scalar_ops();
}

}  // namespace

const Ops& ops() {
  static const Ops& selected = select();
  return selected;
}

}  // namespace hocs::kernels
