#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace hocs {

/// Dense N-dimensional real tensor, column-major: mode 0 varies fastest, so
/// the flat index of (i_0, ..., i_{l-1}) is i_0 + n_0*(i_1 + n_1*(i_2 + ...)).
/// Tensors are immutable by convention once an operation returns them; every
/// operation below is a pure function of its inputs.
class DenseTensor {
 public:
  DenseTensor() = default;

  /// Zero-filled tensor of the given shape (all extents must be positive).
  explicit DenseTensor(std::vector<std::size_t> shape);

  /// Adopts `data`, which must have exactly prod(shape) entries.
  DenseTensor(std::vector<std::size_t> shape, std::vector<double> data);

  static DenseTensor scalar(double value) { return DenseTensor({1}, {value}); }

  const std::vector<std::size_t>& shape() const noexcept { return shape_; }
  std::size_t order() const noexcept { return shape_.size(); }
  std::size_t size() const noexcept { return data_.size(); }

  double* data() noexcept { return data_.data(); }
  const double* data() const noexcept { return data_.data(); }
  std::span<const double> values() const noexcept { return data_; }

  double operator[](std::size_t flat) const { return data_[flat]; }
  double& operator[](std::size_t flat) { return data_[flat]; }

  std::size_t flat_index(std::span<const std::size_t> idx) const;
  double at(std::span<const std::size_t> idx) const { return data_[flat_index(idx)]; }
  double& at(std::span<const std::size_t> idx) { return data_[flat_index(idx)]; }

  double frobenius_norm() const;

  bool operator==(const DenseTensor& other) const = default;

 private:
  std::vector<std::size_t> shape_;
  std::vector<double> data_;
};

/// Pairing of contracted modes between two tensors. Output mode order is
/// fixed: free modes of A in ascending order, then free modes of B.
struct ContractionSpec {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;  // (mode of A, mode of B)
};

/// Relabels a flat value sequence as a tensor; values are never reordered.
DenseTensor reshape(std::vector<double> values, std::vector<std::size_t> shape);
DenseTensor reshape(const DenseTensor& t, std::vector<std::size_t> shape);

/// Reorders modes: output mode k is input mode perm[k].
DenseTensor permute_modes(const DenseTensor& t, std::span<const std::size_t> perm);

/// Contracts mode p of `t` with the columns of the matrix `m` (shape r x n_p):
/// out[..., j, ...] = sum_i m(j, i) * t[..., i, ...].
DenseTensor mode_product(const DenseTensor& t, const DenseTensor& m, std::size_t p);

/// Outer product: shape is the concatenation of the input shapes.
DenseTensor tensor_product(const DenseTensor& a, const DenseTensor& b);

/// Kronecker-style product with per-mode index pairing: output mode k has
/// extent nA_k * nB_k and entry ((a_k*nB_k + b_k))_k = A[a] * B[b]. The
/// lower-order operand is padded with trailing singleton modes first.
DenseTensor kron_pairing_product(const DenseTensor& a, const DenseTensor& b);

/// General contraction C = sum over paired modes of A (x) B, free-of-A modes
/// first in the output.
DenseTensor contract(const DenseTensor& a, const DenseTensor& b, const ContractionSpec& spec);

/// Maximum Frobenius norm over every order-p subtensor obtained by fixing any
/// l-p modes at any index values. p == order gives the full Frobenius norm.
/// Enumerates all C(l,p) mode subsets, so cost grows combinatorially with the
/// order; fine at the sizes this library targets.
double max_subtensor_norm(const DenseTensor& t, std::size_t p);

namespace detail {
/// Column-major odometer step; returns false after the last index wraps.
bool next_index(std::span<std::size_t> idx, std::span<const std::size_t> shape);
std::size_t checked_product(std::span<const std::size_t> shape);
}  // namespace detail

}  // namespace hocs
