#include "hocs/kernels.hpp"

#include <immintrin.h>

#include <cmath>

// Compiled with -mavx2 -mfma; only dispatched to when the CPU reports both.

namespace hocs::kernels {
namespace {

void axpy_avx2(double a, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d vy = _mm256_loadu_pd(y + i);
    vy = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), vy);
    _mm256_storeu_pd(y + i, vy);
  }
  for (; i < n; ++i) y[i] = std::fma(a, x[i], y[i]);
}

void scaled_copy_avx2(double a, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(y + i, _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
  for (; i < n; ++i) y[i] = a * x[i];
}

double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

double sum_sq_avx2(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_loadu_pd(x + i);
    acc = _mm256_fmadd_pd(v, v, acc);
  }
  double r = hsum(acc);
  for (; i < n; ++i) r += x[i] * x[i];
  return r;
}

double sum_sq_diff_avx2(const double* x, const double* y, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
    acc = _mm256_fmadd_pd(d, d, acc);
  }
  double r = hsum(acc);
  for (; i < n; ++i) {
    const double d = x[i] - y[i];
    r += d * d;
  }
  return r;
}

// Two interleaved complex doubles per vector.
inline __m256d cmul2(__m256d va, __m256d vb) {
  const __m256d br = _mm256_movedup_pd(vb);       // [br0 br0 br1 br1]
  const __m256d bi = _mm256_permute_pd(vb, 0xF);  // [bi0 bi0 bi1 bi1]
  const __m256d as = _mm256_permute_pd(va, 0x5);  // [ai0 ar0 ai1 ar1]
  return _mm256_fmaddsub_pd(va, br, _mm256_mul_pd(as, bi));
}

void cmul_avx2(const std::complex<double>* a, const std::complex<double>* b,
               std::complex<double>* out, std::size_t n) {
  const double* pa = reinterpret_cast<const double*>(a);
  const double* pb = reinterpret_cast<const double*>(b);
  double* po = reinterpret_cast<double*>(out);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2)
    _mm256_storeu_pd(po + 2 * i, cmul2(_mm256_loadu_pd(pa + 2 * i), _mm256_loadu_pd(pb + 2 * i)));
  for (; i < n; ++i) out[i] = a[i] * b[i];
}

void butterfly_avx2(std::complex<double>* top, std::complex<double>* bot,
                    const std::complex<double>* w, std::size_t n) {
  double* pt = reinterpret_cast<double*>(top);
  double* pb = reinterpret_cast<double*>(bot);
  const double* pw = reinterpret_cast<const double*>(w);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d t = cmul2(_mm256_loadu_pd(pb + 2 * i), _mm256_loadu_pd(pw + 2 * i));
    const __m256d u = _mm256_loadu_pd(pt + 2 * i);
    _mm256_storeu_pd(pt + 2 * i, _mm256_add_pd(u, t));
    _mm256_storeu_pd(pb + 2 * i, _mm256_sub_pd(u, t));
  }
  for (; i < n; ++i) {
    const std::complex<double> t = bot[i] * w[i];
    const std::complex<double> u = top[i];
    top[i] = u + t;
    bot[i] = u - t;
  }
}

}  // namespace

namespace detail {
const Ops& avx2_table() {
  static const Ops table{
      "avx2",           axpy_avx2, scaled_copy_avx2, sum_sq_avx2,
      sum_sq_diff_avx2, cmul_avx2, butterfly_avx2,
  };
  return table;
}
}  // namespace detail

}  // namespace hocs::kernels
