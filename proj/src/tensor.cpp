#include "hocs/tensor.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "hocs/kernels.hpp"

namespace hocs {

namespace detail {

std::size_t checked_product(std::span<const std::size_t> shape) {
  if (shape.empty()) throw std::invalid_argument("tensor shape must have at least one mode");
  std::size_t n = 1;
  for (std::size_t e : shape) {
    if (e == 0) throw std::invalid_argument("tensor extents must be positive");
    n *= e;
  }
  return n;
}

bool next_index(std::span<std::size_t> idx, std::span<const std::size_t> shape) {
  for (std::size_t k = 0; k < idx.size(); ++k) {
    if (++idx[k] < shape[k]) return true;
    idx[k] = 0;
  }
  return false;
}

}  // namespace detail

DenseTensor::DenseTensor(std::vector<std::size_t> shape)
    : shape_(std::move(shape)), data_(detail::checked_product(shape_), 0.0) {}

DenseTensor::DenseTensor(std::vector<std::size_t> shape, std::vector<double> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  if (detail::checked_product(shape_) != data_.size())
    throw std::invalid_argument("data length does not match shape product");
}

std::size_t DenseTensor::flat_index(std::span<const std::size_t> idx) const {
  if (idx.size() != shape_.size()) throw std::invalid_argument("index order mismatch");
  std::size_t flat = 0;
  std::size_t stride = 1;
  for (std::size_t k = 0; k < shape_.size(); ++k) {
    if (idx[k] >= shape_[k]) throw std::out_of_range("tensor index out of range");
    flat += idx[k] * stride;
    stride *= shape_[k];
  }
  return flat;
}

double DenseTensor::frobenius_norm() const {
  return std::sqrt(kernels::ops().sum_sq(data_.data(), data_.size()));
}

DenseTensor reshape(std::vector<double> values, std::vector<std::size_t> shape) {
  return DenseTensor(std::move(shape), std::move(values));
}

DenseTensor reshape(const DenseTensor& t, std::vector<std::size_t> shape) {
  return DenseTensor(std::move(shape), std::vector<double>(t.values().begin(), t.values().end()));
}

DenseTensor permute_modes(const DenseTensor& t, std::span<const std::size_t> perm) {
  const auto& shape = t.shape();
  const std::size_t l = shape.size();
  if (perm.size() != l) throw std::invalid_argument("permutation order mismatch");
  std::vector<bool> seen(l, false);
  std::vector<std::size_t> out_shape(l);
  for (std::size_t k = 0; k < l; ++k) {
    if (perm[k] >= l || seen[perm[k]]) throw std::invalid_argument("invalid mode permutation");
    seen[perm[k]] = true;
    out_shape[k] = shape[perm[k]];
  }

  // Stride of output mode k in the source layout.
  std::vector<std::size_t> src_stride(l, 1);
  for (std::size_t k = 1; k < l; ++k) src_stride[k] = src_stride[k - 1] * shape[k - 1];
  std::vector<std::size_t> gather_stride(l);
  for (std::size_t k = 0; k < l; ++k) gather_stride[k] = src_stride[perm[k]];

  DenseTensor out(out_shape);
  std::vector<std::size_t> idx(l, 0);
  std::size_t src = 0;
  for (std::size_t dst = 0;; ++dst) {
    out[dst] = t[src];
    std::size_t k = 0;
    for (; k < l; ++k) {
      src += gather_stride[k];
      if (++idx[k] < out_shape[k]) break;
      src -= gather_stride[k] * out_shape[k];
      idx[k] = 0;
    }
    if (k == l) break;
  }
  return out;
}

DenseTensor mode_product(const DenseTensor& t, const DenseTensor& m, std::size_t p) {
  const auto& shape = t.shape();
  if (p >= shape.size()) throw std::invalid_argument("mode index out of range");
  if (m.order() != 2) throw std::invalid_argument("mode_product expects a matrix");
  const std::size_t rows = m.shape()[0];
  const std::size_t cols = m.shape()[1];
  if (cols != shape[p]) throw std::invalid_argument("matrix columns must match the contracted mode");

  std::size_t inner = 1;
  for (std::size_t k = 0; k < p; ++k) inner *= shape[k];
  std::size_t outer = 1;
  for (std::size_t k = p + 1; k < shape.size(); ++k) outer *= shape[k];

  std::vector<std::size_t> out_shape = shape;
  out_shape[p] = rows;
  DenseTensor out(out_shape);

  const auto& k = kernels::ops();
  const double* src = t.data();
  double* dst = out.data();
  if (inner == 1) {
    // Contiguous output fibers along the replaced mode; m's columns are
    // contiguous as well (column-major rows x cols).
    for (std::size_t o = 0; o < outer; ++o) {
      double* ob = dst + o * rows;
      const double* ib = src + o * cols;
      for (std::size_t i = 0; i < cols; ++i) k.axpy(ib[i], m.data() + i * rows, ob, rows);
    }
  } else {
    for (std::size_t o = 0; o < outer; ++o) {
      const double* ib = src + o * cols * inner;
      double* ob = dst + o * rows * inner;
      for (std::size_t i = 0; i < cols; ++i)
        for (std::size_t j = 0; j < rows; ++j)
          k.axpy(m[j + rows * i], ib + i * inner, ob + j * inner, inner);
    }
  }
  return out;
}

DenseTensor tensor_product(const DenseTensor& a, const DenseTensor& b) {
  std::vector<std::size_t> out_shape = a.shape();
  out_shape.insert(out_shape.end(), b.shape().begin(), b.shape().end());
  DenseTensor out(out_shape);
  const auto& k = kernels::ops();
  for (std::size_t j = 0; j < b.size(); ++j)
    k.scaled_copy(b[j], a.data(), out.data() + j * a.size(), a.size());
  return out;
}

DenseTensor kron_pairing_product(const DenseTensor& a, const DenseTensor& b) {
  std::vector<std::size_t> sa = a.shape();
  std::vector<std::size_t> sb = b.shape();
  while (sa.size() < sb.size()) sa.push_back(1);
  while (sb.size() < sa.size()) sb.push_back(1);
  const std::size_t l = sa.size();

  std::vector<std::size_t> out_shape(l);
  for (std::size_t k = 0; k < l; ++k) out_shape[k] = sa[k] * sb[k];
  DenseTensor out(out_shape);

  std::vector<std::size_t> ia(l, 0), ib(l, 0), ic(l, 0);
  do {
    const double va = a[a.flat_index(std::span<const std::size_t>(ia).first(a.order()))];
    do {
      for (std::size_t k = 0; k < l; ++k) ic[k] = ia[k] * sb[k] + ib[k];
      const double vb = b[b.flat_index(std::span<const std::size_t>(ib).first(b.order()))];
      out.at(ic) = va * vb;
    } while (detail::next_index(ib, sb));
  } while (detail::next_index(ia, sa));
  return out;
}

namespace {

void validate_spec(const DenseTensor& a, const DenseTensor& b, const ContractionSpec& spec) {
  std::vector<bool> used_a(a.order(), false), used_b(b.order(), false);
  for (const auto& [pa, pb] : spec.pairs) {
    if (pa >= a.order() || pb >= b.order())
      throw std::invalid_argument("contracted mode out of range");
    if (used_a[pa] || used_b[pb])
      throw std::invalid_argument("mode appears twice in contraction spec");
    used_a[pa] = true;
    used_b[pb] = true;
    if (a.shape()[pa] != b.shape()[pb])
      throw std::invalid_argument("contracted modes must have equal extents");
  }
}

}  // namespace

DenseTensor contract(const DenseTensor& a, const DenseTensor& b, const ContractionSpec& spec) {
  validate_spec(a, b, spec);

  std::vector<bool> contracted_a(a.order(), false), contracted_b(b.order(), false);
  for (const auto& [pa, pb] : spec.pairs) {
    contracted_a[pa] = true;
    contracted_b[pb] = true;
  }

  std::vector<std::size_t> perm_a, perm_b;
  std::vector<std::size_t> out_shape;
  for (std::size_t k = 0; k < a.order(); ++k)
    if (!contracted_a[k]) {
      perm_a.push_back(k);
      out_shape.push_back(a.shape()[k]);
    }
  for (const auto& [pa, pb] : spec.pairs) perm_a.push_back(pa);
  for (const auto& [pa, pb] : spec.pairs) perm_b.push_back(pb);
  for (std::size_t k = 0; k < b.order(); ++k)
    if (!contracted_b[k]) {
      perm_b.push_back(k);
      out_shape.push_back(b.shape()[k]);
    }
  if (out_shape.empty()) out_shape.push_back(1);  // fully contracted: scalar

  const DenseTensor am = permute_modes(a, perm_a);  // (free A..., paired...)
  const DenseTensor bm = permute_modes(b, perm_b);  // (paired..., free B...)

  std::size_t kdim = 1;
  for (const auto& pr : spec.pairs) kdim *= a.shape()[pr.first];
  const std::size_t mdim = am.size() / kdim;
  const std::size_t ndim = bm.size() / kdim;

  DenseTensor out(out_shape);
  const auto& k = kernels::ops();
  // out (mdim x ndim) = am (mdim x kdim) * bm (kdim x ndim), all column-major.
  for (std::size_t j = 0; j < ndim; ++j) {
    double* oc = out.data() + j * mdim;
    const double* bc = bm.data() + j * kdim;
    for (std::size_t r = 0; r < kdim; ++r) k.axpy(bc[r], am.data() + r * mdim, oc, mdim);
  }
  return out;
}

double max_subtensor_norm(const DenseTensor& t, std::size_t p) {
  const std::size_t l = t.order();
  if (p < 1 || p > l) throw std::invalid_argument("subtensor order out of range");

  double best_sq = 0.0;
  // Iterate over all choices of p kept modes; accumulate squared values per
  // assignment of the fixed modes.
  for (std::size_t mask = 0; mask < (std::size_t{1} << l); ++mask) {
    if (static_cast<std::size_t>(std::popcount(mask)) != p) continue;
    std::vector<std::size_t> fixed_stride(l, 0);
    std::size_t fixed_count = 1;
    for (std::size_t k = 0; k < l; ++k) {
      if (mask & (std::size_t{1} << k)) continue;  // kept mode
      fixed_stride[k] = fixed_count;
      fixed_count *= t.shape()[k];
    }
    std::vector<double> acc(fixed_count, 0.0);
    std::vector<std::size_t> idx(l, 0);
    std::size_t flat = 0;
    do {
      std::size_t f = 0;
      for (std::size_t k = 0; k < l; ++k)
        if (!(mask & (std::size_t{1} << k))) f += idx[k] * fixed_stride[k];
      acc[f] += t[flat] * t[flat];
      ++flat;
    } while (detail::next_index(idx, t.shape()));
    best_sq = std::max(best_sq, *std::max_element(acc.begin(), acc.end()));
  }
  return std::sqrt(best_sq);
}

}  // namespace hocs
