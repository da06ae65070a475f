#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "hocs/tensor.hpp"

namespace hocs {

/// Complex tensor with the same column-major layout law as DenseTensor.
struct ComplexTensor {
  std::vector<std::size_t> shape;
  std::vector<std::complex<double>> data;

  ComplexTensor() = default;
  explicit ComplexTensor(std::vector<std::size_t> s);
  std::size_t size() const noexcept { return data.size(); }
  std::size_t order() const noexcept { return shape.size(); }
};

/// Separable DFT along every mode. Arbitrary extents are supported: powers of
/// two run the radix-2 path directly, everything else goes through a chirp-z
/// reduction to a padded power of two, so each mode stays O(m log m).
ComplexTensor dft_nd(const DenseTensor& t);
ComplexTensor dft_nd(const ComplexTensor& t);

/// Inverse transform; applies the 1/prod(m_k) normalization.
ComplexTensor idft_nd(const ComplexTensor& t);

/// Circular convolution of same-shape tensors via the transform pair. The
/// imaginary residue is checked against 1e-6 * ||result||_F and dropped.
DenseTensor circular_convolve(const DenseTensor& a, const DenseTensor& b);

namespace detail {
/// In-place 1-D transform of length n (any n >= 1).
void dft_1d(std::complex<double>* x, std::size_t n, bool inverse);
}  // namespace detail

}  // namespace hocs
