#include "hocs/kernels.hpp"

namespace hocs::kernels {
namespace {

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void scaled_copy_scalar(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = a * x[i];
}

double sum_sq_scalar(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * x[i];
  return acc;
}

double sum_sq_diff_scalar(const double* x, const double* y, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = x[i] - y[i];
    acc += d * d;
  }
  return acc;
}

void cmul_scalar(const std::complex<double>* a, const std::complex<double>* b,
                 std::complex<double>* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * b[i];
}

void butterfly_scalar(std::complex<double>* top, std::complex<double>* bot,
                      const std::complex<double>* w, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const std::complex<double> t = bot[i] * w[i];
    const std::complex<double> u = top[i];
    top[i] = u + t;
    bot[i] = u - t;
  }
}

}  // namespace

const Ops& scalar_ops() {
  static const Ops table{
      "scalar",         axpy_scalar, scaled_copy_scalar, sum_sq_scalar,
      sum_sq_diff_scalar, cmul_scalar, butterfly_scalar,
  };
  return table;
}

}  // namespace hocs::kernels
