#include "hocs/fft.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include "hocs/kernels.hpp"

namespace hocs {

ComplexTensor::ComplexTensor(std::vector<std::size_t> s) : shape(std::move(s)) {
  data.assign(detail::checked_product(shape), {0.0, 0.0});
}

namespace detail {
namespace {

struct Radix2Plan {
  std::size_t n = 0;
  std::vector<std::uint32_t> bitrev;
  // Per-stage twiddle tables, concatenated: stage for length `len` holds
  // len/2 roots exp(-2*pi*i*j/len).
  std::vector<std::complex<double>> twiddle;
  std::vector<std::size_t> stage_offset;  // one entry per stage
};

std::shared_ptr<const Radix2Plan> make_radix2_plan(std::size_t n) {
  auto plan = std::make_shared<Radix2Plan>();
  plan->n = n;
  plan->bitrev.resize(n);
  const int bits = std::countr_zero(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t r = 0;
    for (int b = 0; b < bits; ++b) r |= ((i >> b) & 1u) << (bits - 1 - b);
    plan->bitrev[i] = static_cast<std::uint32_t>(r);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    plan->stage_offset.push_back(plan->twiddle.size());
    const double step = -2.0 * std::numbers::pi / static_cast<double>(len);
    for (std::size_t j = 0; j < len / 2; ++j)
      plan->twiddle.push_back(std::polar(1.0, step * static_cast<double>(j)));
  }
  return plan;
}

void fft_pow2(std::complex<double>* x, const Radix2Plan& plan) {
  const std::size_t n = plan.n;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t r = plan.bitrev[i];
    if (i < r) std::swap(x[i], x[r]);
  }
  const auto& k = kernels::ops();
  std::size_t stage = 0;
  for (std::size_t len = 2; len <= n; len <<= 1, ++stage) {
    const std::complex<double>* w = plan.twiddle.data() + plan.stage_offset[stage];
    const std::size_t half = len / 2;
    for (std::size_t start = 0; start < n; start += len)
      k.butterfly(x + start, x + start + half, w, half);
  }
}

struct BluesteinPlan {
  std::size_t n = 0;
  std::size_t padded = 0;
  std::shared_ptr<const Radix2Plan> inner;
  std::vector<std::complex<double>> chirp;           // b_k = exp(i*pi*k^2/n), k < n
  std::vector<std::complex<double>> chirp_spectrum;  // forward FFT of wrapped chirp
};

std::shared_ptr<const BluesteinPlan> make_bluestein_plan(std::size_t n) {
  auto plan = std::make_shared<BluesteinPlan>();
  plan->n = n;
  plan->padded = std::bit_ceil(2 * n - 1);
  plan->inner = make_radix2_plan(plan->padded);
  plan->chirp.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    // k^2 mod 2n keeps the argument small enough for full double accuracy.
    const std::uint64_t q = (static_cast<std::uint64_t>(i) * i) % (2 * n);
    plan->chirp[i] = std::polar(1.0, std::numbers::pi * static_cast<double>(q) / static_cast<double>(n));
  }
  std::vector<std::complex<double>> ext(plan->padded, {0.0, 0.0});
  ext[0] = plan->chirp[0];
  for (std::size_t i = 1; i < n; ++i) {
    ext[i] = plan->chirp[i];
    ext[plan->padded - i] = plan->chirp[i];
  }
  fft_pow2(ext.data(), *plan->inner);
  plan->chirp_spectrum = std::move(ext);
  return plan;
}

// Forward transform of arbitrary length via chirp-z:
//   X_j = conj(b_j) * (a (circ*) b)_j  with  a_k = x_k * conj(b_k).
void bluestein_forward(std::complex<double>* x, const BluesteinPlan& plan) {
  const std::size_t n = plan.n;
  std::vector<std::complex<double>> buf(plan.padded, {0.0, 0.0});
  for (std::size_t i = 0; i < n; ++i) buf[i] = x[i] * std::conj(plan.chirp[i]);
  fft_pow2(buf.data(), *plan.inner);
  kernels::ops().cmul(buf.data(), plan.chirp_spectrum.data(), buf.data(), plan.padded);
  // Inverse FFT of buf via conjugation.
  for (auto& v : buf) v = std::conj(v);
  fft_pow2(buf.data(), *plan.inner);
  const double scale = 1.0 / static_cast<double>(plan.padded);
  for (std::size_t i = 0; i < n; ++i) x[i] = std::conj(buf[i]) * scale * std::conj(plan.chirp[i]);
}

template <class Plan, class Maker>
std::shared_ptr<const Plan> cached_plan(std::size_t n, Maker maker) {
  static std::map<std::size_t, std::shared_ptr<const Plan>> cache;
  static std::mutex mutex;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, maker(n)).first;
  return it->second;
}

void dft_1d_forward(std::complex<double>* x, std::size_t n) {
  if (n == 1) return;
  if (std::has_single_bit(n)) {
    fft_pow2(x, *cached_plan<Radix2Plan>(n, make_radix2_plan));
  } else {
    bluestein_forward(x, *cached_plan<BluesteinPlan>(n, make_bluestein_plan));
  }
}

}  // namespace

void dft_1d(std::complex<double>* x, std::size_t n, bool inverse) {
  if (!inverse) {
    dft_1d_forward(x, n);
    return;
  }
  for (std::size_t i = 0; i < n; ++i) x[i] = std::conj(x[i]);
  dft_1d_forward(x, n);
  const double scale = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = std::conj(x[i]) * scale;
}

namespace {

void transform_all_modes(ComplexTensor& t, bool inverse) {
  std::vector<std::complex<double>> fiber;
  std::size_t stride = 1;
  for (std::size_t k = 0; k < t.order(); ++k) {
    const std::size_t nk = t.shape[k];
    if (nk > 1) {
      const std::size_t block = stride * nk;
      const std::size_t outer = t.size() / block;
      if (stride == 1) {
        for (std::size_t o = 0; o < outer; ++o) dft_1d(t.data.data() + o * block, nk, inverse);
      } else {
        fiber.resize(nk);
        for (std::size_t o = 0; o < outer; ++o) {
          std::complex<double>* base = t.data.data() + o * block;
          for (std::size_t in = 0; in < stride; ++in) {
            for (std::size_t j = 0; j < nk; ++j) fiber[j] = base[in + j * stride];
            dft_1d(fiber.data(), nk, inverse);
            for (std::size_t j = 0; j < nk; ++j) base[in + j * stride] = fiber[j];
          }
        }
      }
    }
    stride *= nk;
  }
}

}  // namespace
}  // namespace detail

ComplexTensor dft_nd(const DenseTensor& t) {
  ComplexTensor out(t.shape());
  for (std::size_t i = 0; i < t.size(); ++i) out.data[i] = {t[i], 0.0};
  detail::transform_all_modes(out, false);
  return out;
}

ComplexTensor dft_nd(const ComplexTensor& t) {
  ComplexTensor out = t;
  detail::transform_all_modes(out, false);
  return out;
}

ComplexTensor idft_nd(const ComplexTensor& t) {
  ComplexTensor out = t;
  detail::transform_all_modes(out, true);
  return out;
}

DenseTensor circular_convolve(const DenseTensor& a, const DenseTensor& b) {
  if (a.shape() != b.shape())
    throw std::invalid_argument("circular_convolve requires identical shapes");
  ComplexTensor fa = dft_nd(a);
  const ComplexTensor fb = dft_nd(b);
  kernels::ops().cmul(fa.data.data(), fb.data.data(), fa.data.data(), fa.size());
  const ComplexTensor c = idft_nd(fa);

  DenseTensor out(a.shape());
  double imag_sq = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    out[i] = c.data[i].real();
    imag_sq += c.data[i].imag() * c.data[i].imag();
  }
  const double real_sq = kernels::ops().sum_sq(out.data(), out.size());
  if (imag_sq > 1e-12 * real_sq)
    throw std::runtime_error("circular_convolve: imaginary residue above tolerance");
  return out;
}

}  // namespace hocs
