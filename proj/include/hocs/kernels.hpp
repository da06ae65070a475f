#pragma once

#include <complex>
#include <cstddef>

namespace hocs::kernels {

/// Function table for the data-parallel inner loops shared by the tensor,
/// FFT and benchmark code. A scalar reference implementation always exists;
/// vector variants (AVX2 on x86-64, NEON on aarch64) are compiled as separate
/// translation units and selected once at startup based on what the CPU
/// actually supports. The environment variable HOCS_KERNELS=scalar|avx2|neon
/// overrides the selection.
struct Ops {
  const char* name;

  // y[i] += a * x[i]
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
  // y[i] = a * x[i]
  void (*scaled_copy)(double a, const double* x, double* y, std::size_t n);
  // sum of x[i]^2
  double (*sum_sq)(const double* x, std::size_t n);
  // sum of (x[i] - y[i])^2
  double (*sum_sq_diff)(const double* x, const double* y, std::size_t n);
  // out[i] = a[i] * b[i], complex
  void (*cmul)(const std::complex<double>* a, const std::complex<double>* b,
               std::complex<double>* out, std::size_t n);
  // radix-2 step: t = bot[i]*w[i]; bot[i] = top[i] - t; top[i] += t
  void (*butterfly)(std::complex<double>* top, std::complex<double>* bot,
                    const std::complex<double>* w, std::size_t n);
};

const Ops& scalar_ops();

// nullptr when the variant is not compiled in or the CPU lacks the feature.
const Ops* avx2_ops();
const Ops* neon_ops();

/// The table in use for this process.
const Ops& ops();

}  // namespace hocs::kernels
