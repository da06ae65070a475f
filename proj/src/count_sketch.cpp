#include "hocs/count_sketch.hpp"

#include <algorithm>
#include <stdexcept>

#include "hocs/fft.hpp"
#include "hocs/kernels.hpp"

namespace hocs {

namespace {

// Salts for deriving independent sub-seeds: index vs sign streams.
constexpr std::uint64_t kIndexSalt = 0x1d;
constexpr std::uint64_t kSignSalt = 0x2e;

void require_same_layout(const CsPlan& a, const CsPlan& b) {
  if (a.buckets != b.buckets || a.replicas != b.replicas)
    throw std::invalid_argument("sketch plans must share bucket and replica counts");
}

}  // namespace

CsPlan CsPlan::make(std::size_t n, std::size_t c, std::size_t d, std::uint64_t seed) {
  if (d == 0) throw std::invalid_argument("replica count must be positive");
  CsPlan plan;
  plan.input_length = n;
  plan.buckets = c;
  plan.replicas = d;
  for (std::size_t r = 0; r < d; ++r) {
    const std::uint64_t rs = mix_seed(seed, r);
    plan.index_hashes.push_back(make_index_hash(n, c, mix_seed(rs, kIndexSalt)));
    plan.sign_hashes.push_back(make_sign_hash(n, mix_seed(rs, kSignSalt)));
  }
  return plan;
}

CsPlan CsPlan::identity(std::size_t n, std::size_t d) {
  if (d == 0) throw std::invalid_argument("replica count must be positive");
  CsPlan plan;
  plan.input_length = n;
  plan.buckets = n;
  plan.replicas = d;
  for (std::size_t r = 0; r < d; ++r) {
    plan.index_hashes.push_back(IndexHash::identity(n));
    plan.sign_hashes.push_back(SignHash::identity(n));
  }
  return plan;
}

CsPlan CsPlan::from_tables(std::vector<std::uint32_t> index_table, std::vector<std::int8_t> sign_table,
                           std::size_t c) {
  if (index_table.size() != sign_table.size())
    throw std::invalid_argument("index and sign tables must have equal length");
  CsPlan plan;
  plan.input_length = index_table.size();
  plan.buckets = c;
  plan.replicas = 1;
  plan.index_hashes.push_back(IndexHash::from_table(std::move(index_table), c));
  plan.sign_hashes.push_back(SignHash::from_table(std::move(sign_table)));
  return plan;
}

CsPlan CsPlan::paired(const CsPlan& fast, const CsPlan& slow) {
  require_same_layout(fast, slow);
  CsPlan plan;
  plan.input_length = fast.input_length * slow.input_length;
  plan.buckets = fast.buckets;
  plan.replicas = fast.replicas;
  for (std::size_t r = 0; r < fast.replicas; ++r) {
    plan.index_hashes.push_back(IndexHash::pair(fast.index_hashes[r], slow.index_hashes[r]));
    plan.sign_hashes.push_back(SignHash::pair(fast.sign_hashes[r], slow.sign_hashes[r]));
  }
  return plan;
}

double median_estimate(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("median of empty sequence");
  std::vector<double> v(values.begin(), values.end());
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + mid, v.end());
  const double hi = v[mid];
  if (v.size() % 2 == 1) return hi;
  const double lo = *std::max_element(v.begin(), v.begin() + mid);
  return 0.5 * (lo + hi);
}

CsSketch cs_sketch(std::span<const double> u, std::shared_ptr<const CsPlan> plan) {
  if (u.size() != plan->input_length)
    throw std::invalid_argument("input length does not match plan");
  CsSketch sk;
  sk.table.assign(plan->replicas * plan->buckets, 0.0);
  for (std::size_t r = 0; r < plan->replicas; ++r) {
    const IndexHash& h = plan->index_hashes[r];
    const SignHash& s = plan->sign_hashes[r];
    double* row = sk.table.data() + r * plan->buckets;
    for (std::size_t i = 0; i < u.size(); ++i) row[h(i)] += s(i) * u[i];
  }
  sk.plan = std::move(plan);
  return sk;
}

double cs_recover(const CsSketch& sk, std::size_t i) {
  const CsPlan& plan = *sk.plan;
  if (i >= plan.input_length) throw std::out_of_range("recovery index out of range");
  std::vector<double> est(plan.replicas);
  for (std::size_t r = 0; r < plan.replicas; ++r)
    est[r] = plan.sign_hashes[r](i) * sk.table[r * plan.buckets + plan.index_hashes[r](i)];
  return median_estimate(est);
}

std::vector<double> cs_recover_all(const CsSketch& sk) {
  const CsPlan& plan = *sk.plan;
  std::vector<double> out(plan.input_length);
  std::vector<double> est(plan.replicas);
  for (std::size_t i = 0; i < plan.input_length; ++i) {
    for (std::size_t r = 0; r < plan.replicas; ++r)
      est[r] = plan.sign_hashes[r](i) * sk.table[r * plan.buckets + plan.index_hashes[r](i)];
    out[i] = median_estimate(est);
  }
  return out;
}

CsSketch cs_outer_product(const CsSketch& u, const CsSketch& v) {
  require_same_layout(*u.plan, *v.plan);
  auto plan = std::make_shared<CsPlan>(CsPlan::paired(*u.plan, *v.plan));
  const std::size_t c = plan->buckets;
  CsSketch out;
  out.table.assign(plan->replicas * c, 0.0);
  for (std::size_t r = 0; r < plan->replicas; ++r) {
    const DenseTensor conv =
        circular_convolve(DenseTensor({c}, {u.replica(r).begin(), u.replica(r).end()}),
                          DenseTensor({c}, {v.replica(r).begin(), v.replica(r).end()}));
    std::copy(conv.values().begin(), conv.values().end(), out.table.begin() + r * c);
  }
  out.plan = std::move(plan);
  return out;
}

CsSketch cs_matrix_product(const DenseTensor& a, const DenseTensor& b,
                           std::shared_ptr<const CsPlan> row_plan,
                           std::shared_ptr<const CsPlan> col_plan) {
  if (a.order() != 2 || b.order() != 2)
    throw std::invalid_argument("cs_matrix_product expects matrices");
  const std::size_t rows = a.shape()[0];
  const std::size_t inner = a.shape()[1];
  const std::size_t cols = b.shape()[1];
  if (b.shape()[0] != inner) throw std::invalid_argument("inner dimensions must match");
  if (row_plan->input_length != rows || col_plan->input_length != cols)
    throw std::invalid_argument("factor plans must cover the rows of A and columns of B");
  require_same_layout(*row_plan, *col_plan);

  auto plan = std::make_shared<CsPlan>(CsPlan::paired(*row_plan, *col_plan));
  const std::size_t c = plan->buckets;
  CsSketch out;
  out.table.assign(plan->replicas * c, 0.0);

  std::vector<double> col_sketch(c), row_sketch(c);
  for (std::size_t r = 0; r < plan->replicas; ++r) {
    const IndexHash& hr = row_plan->index_hashes[r];
    const SignHash& sr = row_plan->sign_hashes[r];
    const IndexHash& hc = col_plan->index_hashes[r];
    const SignHash& sc = col_plan->sign_hashes[r];
    double* acc = out.table.data() + r * c;
    for (std::size_t k = 0; k < inner; ++k) {
      std::fill(col_sketch.begin(), col_sketch.end(), 0.0);
      std::fill(row_sketch.begin(), row_sketch.end(), 0.0);
      for (std::size_t i = 0; i < rows; ++i) col_sketch[hr(i)] += sr(i) * a[i + rows * k];
      for (std::size_t j = 0; j < cols; ++j) row_sketch[hc(j)] += sc(j) * b[k + inner * j];
      const DenseTensor conv = circular_convolve(DenseTensor({c}, col_sketch),
                                                 DenseTensor({c}, row_sketch));
      kernels::ops().axpy(1.0, conv.data(), acc, c);
    }
  }
  out.plan = std::move(plan);
  return out;
}

CsSketch cs_tucker(const DenseTensor& core, const DenseTensor& u, const DenseTensor& v,
                   const DenseTensor& w, std::shared_ptr<const CsPlan> pu,
                   std::shared_ptr<const CsPlan> pv, std::shared_ptr<const CsPlan> pw) {
  if (core.order() != 3) throw std::invalid_argument("cs_tucker expects an order-3 core");
  const DenseTensor* factors[3] = {&u, &v, &w};
  const CsPlan* plans[3] = {pu.get(), pv.get(), pw.get()};
  for (int f = 0; f < 3; ++f) {
    if (factors[f]->order() != 2 || factors[f]->shape()[1] != core.shape()[f])
      throw std::invalid_argument("factor shape does not match core");
    if (plans[f]->input_length != factors[f]->shape()[0])
      throw std::invalid_argument("factor plan does not match factor rows");
  }
  require_same_layout(*pu, *pv);
  require_same_layout(*pu, *pw);

  auto plan = std::make_shared<CsPlan>(CsPlan::paired(CsPlan::paired(*pu, *pv), *pw));
  const std::size_t c = plan->buckets;
  const std::size_t d = plan->replicas;
  CsSketch out;
  out.table.assign(d * c, 0.0);

  const std::size_t r1 = core.shape()[0], r2 = core.shape()[1], r3 = core.shape()[2];
  std::vector<double> col(c);
  std::vector<std::complex<double>> acc(c), tmp(c);
  for (std::size_t r = 0; r < d; ++r) {
    // Spectra of every factor-column sketch for this replica.
    std::vector<std::vector<std::complex<double>>> spectra[3];
    for (int f = 0; f < 3; ++f) {
      const std::size_t nf = factors[f]->shape()[0];
      const std::size_t rf = core.shape()[f];
      const IndexHash& h = plans[f]->index_hashes[r];
      const SignHash& s = plans[f]->sign_hashes[r];
      spectra[f].resize(rf);
      for (std::size_t j = 0; j < rf; ++j) {
        std::fill(col.begin(), col.end(), 0.0);
        for (std::size_t i = 0; i < nf; ++i) col[h(i)] += s(i) * (*factors[f])[i + nf * j];
        auto& sp = spectra[f][j];
        sp.assign(c, {0.0, 0.0});
        for (std::size_t i = 0; i < c; ++i) sp[i] = {col[i], 0.0};
        detail::dft_1d(sp.data(), c, false);
      }
    }

    std::fill(acc.begin(), acc.end(), std::complex<double>{0.0, 0.0});
    const auto& k = kernels::ops();
    for (std::size_t ia = 0; ia < r1; ++ia)
      for (std::size_t ib = 0; ib < r2; ++ib) {
        k.cmul(spectra[0][ia].data(), spectra[1][ib].data(), tmp.data(), c);
        for (std::size_t ic = 0; ic < r3; ++ic) {
          const double g = core[ia + r1 * (ib + r2 * ic)];
          if (g == 0.0) continue;
          const auto& sc = spectra[2][ic];
          for (std::size_t i = 0; i < c; ++i) acc[i] += g * tmp[i] * sc[i];
        }
      }
    detail::dft_1d(acc.data(), c, true);
    double* row = out.table.data() + r * c;
    for (std::size_t i = 0; i < c; ++i) row[i] = acc[i].real();
  }
  out.plan = std::move(plan);
  return out;
}

}  // namespace hocs
