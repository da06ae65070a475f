#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "hocs/count_sketch.hpp"
#include "hocs/hashing.hpp"
#include "hocs/tensor.hpp"

namespace hocs {

/// Per-mode hash parameters for sketching an order-l tensor of extents n_k
/// into an m_1 x ... x m_l tensor, with d independent replicas. Modes flagged
/// identity keep m_k = n_k, the identity index map and all-plus signs; they
/// are the modes a sketched contraction may sum over.
struct HcsPlan {
  std::vector<std::size_t> dims;         // n_k
  std::vector<std::size_t> sketch_dims;  // m_k
  std::size_t replicas = 1;              // d
  std::vector<bool> identity_mode;
  std::vector<std::vector<IndexHash>> index_hashes;  // [replica][mode]
  std::vector<std::vector<SignHash>> sign_hashes;

  static HcsPlan make(std::vector<std::size_t> dims, std::vector<std::size_t> sketch_dims,
                      std::size_t d, std::uint64_t seed,
                      const std::vector<std::size_t>& identity_modes = {});
  static HcsPlan identity(std::vector<std::size_t> dims, std::size_t d = 1);

  std::size_t order() const noexcept { return dims.size(); }
  std::size_t input_length() const;
  std::size_t sketch_length() const;
};

struct HcsSketch {
  std::shared_ptr<const HcsPlan> plan;
  std::vector<DenseTensor> tables;  // one sketch tensor per replica
};

/// Sketch of a vector reshaped (in place, column-major) to the plan's dims.
HcsSketch hcs_sketch_vector(std::span<const double> u, std::shared_ptr<const HcsPlan> plan);

/// Bucket-accumulation sketch: each entry lands at (h_k(i_k))_k weighted by
/// the product of the per-mode signs. Equals the mode-product form with the
/// explicit 0/1 hash matrices, which tests cross-check.
HcsSketch hcs_sketch_tensor(const DenseTensor& t, std::shared_ptr<const HcsPlan> plan);

/// Median over replicas of prod_k s_k(i_k) * sketch[h_1(i_1), ..., h_l(i_l)].
double hcs_recover_entry(const HcsSketch& sk, std::span<const std::size_t> idx);
double hcs_recover_entry(const HcsSketch& sk, std::size_t flat);
DenseTensor hcs_recover_full(const HcsSketch& sk);

/// Sketch of the per-mode paired product of the two inputs, computed as an
/// l-dimensional circular convolution of the sketch tensors per replica. A
/// lower-order operand is first padded with trailing singleton modes mapped
/// to bucket 0. Both plans must share sketch dims and replica count.
HcsSketch hcs_tensor_product(const HcsSketch& a, const HcsSketch& b);

/// Entry estimate of a product sketch addressed by factor indices; per mode
/// the bucket is (h_A(a_k) + h_B(b_k)) mod m_k. idx_b may omit padded modes.
double hcs_kron_recover(const HcsSketch& product, std::span<const std::size_t> idx_a,
                        std::span<const std::size_t> idx_b);

/// Sketched contraction: every contracted mode must be identity-flagged in
/// both plans (so the sketch tensors contract exactly); the result is a valid
/// sketch of contract(A, B, spec) under the free modes' hashes.
HcsSketch hcs_contract(const HcsSketch& a, const HcsSketch& b, const ContractionSpec& spec);

/// Sketch of a Tucker-form tensor obtained by sketching each factor along its
/// long mode and contracting the core with the sketched factors. factor_plans
/// are order-2 plans (n_k sketched, r_k identity).
HcsSketch hcs_tucker(const DenseTensor& core, const std::vector<DenseTensor>& factors,
                     const std::vector<std::shared_ptr<const HcsPlan>>& factor_plans);

/// Entry-estimator variance bound sum_p T_p^2 / m^p, where T_p is the maximum
/// Frobenius norm over order-p subtensors and m the (uniform) sketch dim.
/// Enumeration over subtensors is combinatorial in the order.
double hcs_variance_bound(const DenseTensor& t, const HcsPlan& plan);

}  // namespace hocs
