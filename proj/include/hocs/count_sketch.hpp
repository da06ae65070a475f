#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "hocs/hashing.hpp"
#include "hocs/tensor.hpp"

namespace hocs {

/// Hash parameters for sketching length-n vectors into c buckets, with d
/// independent replicas. Replica sub-seeds derive from the single root seed.
struct CsPlan {
  std::size_t input_length = 0;  // n
  std::size_t buckets = 0;       // c
  std::size_t replicas = 1;      // d
  std::vector<IndexHash> index_hashes;  // one per replica
  std::vector<SignHash> sign_hashes;

  static CsPlan make(std::size_t n, std::size_t c, std::size_t d, std::uint64_t seed);
  /// c == n, identity index map, all-plus signs: sketching is lossless.
  static CsPlan identity(std::size_t n, std::size_t d = 1);
  /// Single-replica plan from explicit tables (test fixtures).
  static CsPlan from_tables(std::vector<std::uint32_t> index_table, std::vector<std::int8_t> sign_table,
                            std::size_t c);
  /// Plan over the flattened product domain fast.n * slow.n whose hashes are
  /// the modular sums / sign products of the factor hashes. This is the plan
  /// a sketched outer product is recovered with.
  static CsPlan paired(const CsPlan& fast, const CsPlan& slow);
};

struct CsSketch {
  std::shared_ptr<const CsPlan> plan;
  std::vector<double> table;  // replicas x buckets

  std::span<double> replica(std::size_t r) {
    return {table.data() + r * plan->buckets, plan->buckets};
  }
  std::span<const double> replica(std::size_t r) const {
    return {table.data() + r * plan->buckets, plan->buckets};
  }
};

/// Middle value for odd counts, midpoint of the two middle values for even.
double median_estimate(std::span<const double> values);

CsSketch cs_sketch(std::span<const double> u, std::shared_ptr<const CsPlan> plan);

/// Median over replicas of s_r(i) * table_r[h_r(i)]; unbiased per replica.
double cs_recover(const CsSketch& sk, std::size_t i);
std::vector<double> cs_recover_all(const CsSketch& sk);

/// Sketch of the flattened outer product, computed replica-wise as a circular
/// convolution of the factor sketches. The result carries the paired plan.
CsSketch cs_outer_product(const CsSketch& u, const CsSketch& v);

/// Sketch of vec(A*B) built as the sum over the inner dimension of convolved
/// column/row sketches; consumes the two factor plans (rows of A, columns of
/// B) rather than one flat hash over the product domain.
CsSketch cs_matrix_product(const DenseTensor& a, const DenseTensor& b,
                           std::shared_ptr<const CsPlan> row_plan,
                           std::shared_ptr<const CsPlan> col_plan);

/// Sketch of the flattened dense Tucker reconstruction, as the G-weighted sum
/// of three-way convolved factor-column sketches.
CsSketch cs_tucker(const DenseTensor& core, const DenseTensor& u, const DenseTensor& v,
                   const DenseTensor& w, std::shared_ptr<const CsPlan> pu,
                   std::shared_ptr<const CsPlan> pv, std::shared_ptr<const CsPlan> pw);

}  // namespace hocs
