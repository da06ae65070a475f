#include "hocs/hcs.hpp"

#include <algorithm>
#include <stdexcept>

#include "hocs/fft.hpp"

namespace hocs {

namespace {

constexpr std::uint64_t kIndexSalt = 0x1d;
constexpr std::uint64_t kSignSalt = 0x2e;

std::vector<std::size_t> strides_of(std::span<const std::size_t> shape) {
  std::vector<std::size_t> s(shape.size(), 1);
  for (std::size_t k = 1; k < shape.size(); ++k) s[k] = s[k - 1] * shape[k - 1];
  return s;
}

void require_plan_matches(const HcsPlan& plan, const DenseTensor& t) {
  if (plan.dims != t.shape()) throw std::invalid_argument("tensor shape does not match plan dims");
}

}  // namespace

std::size_t HcsPlan::input_length() const { return detail::checked_product(dims); }
std::size_t HcsPlan::sketch_length() const { return detail::checked_product(sketch_dims); }

HcsPlan HcsPlan::make(std::vector<std::size_t> dims, std::vector<std::size_t> sketch_dims,
                      std::size_t d, std::uint64_t seed,
                      const std::vector<std::size_t>& identity_modes) {
  if (d == 0) throw std::invalid_argument("replica count must be positive");
  if (dims.size() != sketch_dims.size())
    throw std::invalid_argument("dims and sketch_dims must have equal order");
  const std::size_t l = dims.size();
  HcsPlan plan;
  plan.dims = std::move(dims);
  plan.sketch_dims = std::move(sketch_dims);
  plan.replicas = d;
  plan.identity_mode.assign(l, false);
  for (std::size_t k : identity_modes) {
    if (k >= l) throw std::invalid_argument("identity mode out of range");
    if (plan.sketch_dims[k] != plan.dims[k])
      throw std::invalid_argument("identity modes must keep their extent");
    plan.identity_mode[k] = true;
  }
  plan.index_hashes.resize(d);
  plan.sign_hashes.resize(d);
  for (std::size_t r = 0; r < d; ++r) {
    for (std::size_t k = 0; k < l; ++k) {
      if (plan.identity_mode[k]) {
        plan.index_hashes[r].push_back(IndexHash::identity(plan.dims[k]));
        plan.sign_hashes[r].push_back(SignHash::identity(plan.dims[k]));
      } else {
        const std::uint64_t ms = mix_seed(mix_seed(seed, r), k);
        plan.index_hashes[r].push_back(
            make_index_hash(plan.dims[k], plan.sketch_dims[k], mix_seed(ms, kIndexSalt)));
        plan.sign_hashes[r].push_back(make_sign_hash(plan.dims[k], mix_seed(ms, kSignSalt)));
      }
    }
  }
  return plan;
}

HcsPlan HcsPlan::identity(std::vector<std::size_t> dims, std::size_t d) {
  std::vector<std::size_t> all(dims.size());
  for (std::size_t k = 0; k < dims.size(); ++k) all[k] = k;
  return make(dims, dims, d, 0, all);
}

HcsSketch hcs_sketch_vector(std::span<const double> u, std::shared_ptr<const HcsPlan> plan) {
  if (u.size() != plan->input_length())
    throw std::invalid_argument("input length does not match plan dims");
  DenseTensor t(plan->dims, std::vector<double>(u.begin(), u.end()));
  return hcs_sketch_tensor(t, std::move(plan));
}

HcsSketch hcs_sketch_tensor(const DenseTensor& t, std::shared_ptr<const HcsPlan> plan) {
  require_plan_matches(*plan, t);
  const std::size_t l = plan->order();
  const auto mstride = strides_of(plan->sketch_dims);

  HcsSketch sk;
  sk.tables.reserve(plan->replicas);
  for (std::size_t r = 0; r < plan->replicas; ++r) {
    const auto& h = plan->index_hashes[r];
    const auto& s = plan->sign_hashes[r];
    DenseTensor out(plan->sketch_dims);

    std::vector<std::size_t> idx(l, 0);
    std::vector<std::size_t> hcur(l);
    std::vector<int> scur(l);
    std::size_t target = 0;
    int sign = 1;
    for (std::size_t k = 0; k < l; ++k) {
      hcur[k] = h[k](0);
      scur[k] = s[k](0);
      target += hcur[k] * mstride[k];
      sign *= scur[k];
    }

    const std::size_t total = t.size();
    for (std::size_t flat = 0;; ++flat) {
      out[target] += sign * t[flat];
      if (flat + 1 == total) break;
      // Column-major odometer with incremental bucket/sign updates.
      for (std::size_t k = 0;; ++k) {
        target -= hcur[k] * mstride[k];
        sign *= scur[k];
        if (++idx[k] == plan->dims[k]) idx[k] = 0;
        hcur[k] = h[k](idx[k]);
        scur[k] = s[k](idx[k]);
        target += hcur[k] * mstride[k];
        sign *= scur[k];
        if (idx[k] != 0) break;
      }
    }
    sk.tables.push_back(std::move(out));
  }
  sk.plan = std::move(plan);
  return sk;
}

double hcs_recover_entry(const HcsSketch& sk, std::span<const std::size_t> idx) {
  const HcsPlan& plan = *sk.plan;
  const std::size_t l = plan.order();
  if (idx.size() != l) throw std::invalid_argument("index order mismatch");
  for (std::size_t k = 0; k < l; ++k)
    if (idx[k] >= plan.dims[k]) throw std::out_of_range("recovery index out of range");
  const auto mstride = strides_of(plan.sketch_dims);

  std::vector<double> est(plan.replicas);
  for (std::size_t r = 0; r < plan.replicas; ++r) {
    std::size_t target = 0;
    int sign = 1;
    for (std::size_t k = 0; k < l; ++k) {
      target += plan.index_hashes[r][k](idx[k]) * mstride[k];
      sign *= plan.sign_hashes[r][k](idx[k]);
    }
    est[r] = sign * sk.tables[r][target];
  }
  return median_estimate(est);
}

double hcs_recover_entry(const HcsSketch& sk, std::size_t flat) {
  const HcsPlan& plan = *sk.plan;
  if (flat >= plan.input_length()) throw std::out_of_range("recovery index out of range");
  std::vector<std::size_t> idx(plan.order());
  for (std::size_t k = 0; k < plan.order(); ++k) {
    idx[k] = flat % plan.dims[k];
    flat /= plan.dims[k];
  }
  return hcs_recover_entry(sk, idx);
}

DenseTensor hcs_recover_full(const HcsSketch& sk) {
  const HcsPlan& plan = *sk.plan;
  const std::size_t l = plan.order();
  const std::size_t d = plan.replicas;
  const auto mstride = strides_of(plan.sketch_dims);

  DenseTensor out(plan.dims);
  // Per-replica incremental bucket/sign state, advanced by one odometer.
  std::vector<std::size_t> idx(l, 0);
  std::vector<std::size_t> target(d, 0);
  std::vector<int> sign(d, 1);
  std::vector<std::size_t> hcur(d * l);
  std::vector<int> scur(d * l);
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t k = 0; k < l; ++k) {
      hcur[r * l + k] = plan.index_hashes[r][k](0);
      scur[r * l + k] = plan.sign_hashes[r][k](0);
      target[r] += hcur[r * l + k] * mstride[k];
      sign[r] *= scur[r * l + k];
    }

  std::vector<double> est(d);
  const std::size_t total = out.size();
  for (std::size_t flat = 0;; ++flat) {
    for (std::size_t r = 0; r < d; ++r) est[r] = sign[r] * sk.tables[r][target[r]];
    out[flat] = median_estimate(est);
    if (flat + 1 == total) break;
    for (std::size_t k = 0;; ++k) {
      const bool wrap = (++idx[k] == plan.dims[k]);
      if (wrap) idx[k] = 0;
      for (std::size_t r = 0; r < d; ++r) {
        target[r] -= hcur[r * l + k] * mstride[k];
        sign[r] *= scur[r * l + k];
        hcur[r * l + k] = plan.index_hashes[r][k](idx[k]);
        scur[r * l + k] = plan.sign_hashes[r][k](idx[k]);
        target[r] += hcur[r * l + k] * mstride[k];
        sign[r] *= scur[r * l + k];
      }
      if (!wrap) break;
    }
  }
  return out;
}

namespace {

// Pads a sketch with trailing singleton modes (bucket 0, plus sign) so both
// product operands share an order.
HcsSketch pad_to_order(const HcsSketch& sk, const HcsPlan& reference) {
  const HcsPlan& p = *sk.plan;
  const std::size_t l = reference.order();
  if (p.order() == l) return sk;

  auto padded = std::make_shared<HcsPlan>(p);
  for (std::size_t k = p.order(); k < l; ++k) {
    padded->dims.push_back(1);
    padded->sketch_dims.push_back(reference.sketch_dims[k]);
    padded->identity_mode.push_back(false);
    for (std::size_t r = 0; r < p.replicas; ++r) {
      padded->index_hashes[r].push_back(IndexHash::from_table({0}, reference.sketch_dims[k]));
      padded->sign_hashes[r].push_back(SignHash::identity(1));
    }
  }
  HcsSketch out;
  out.plan = padded;
  for (std::size_t r = 0; r < p.replicas; ++r) {
    DenseTensor t(padded->sketch_dims);
    // Values occupy index 0 on every padded mode, i.e. the leading block.
    std::copy(sk.tables[r].values().begin(), sk.tables[r].values().end(), t.data());
    out.tables.push_back(std::move(t));
  }
  return out;
}

}  // namespace

HcsSketch hcs_tensor_product(const HcsSketch& a_in, const HcsSketch& b_in) {
  HcsSketch padded;
  const HcsSketch* ap = &a_in;
  const HcsSketch* bp = &b_in;
  if (a_in.plan->order() < b_in.plan->order()) {
    padded = pad_to_order(a_in, *b_in.plan);
    ap = &padded;
  } else if (b_in.plan->order() < a_in.plan->order()) {
    padded = pad_to_order(b_in, *a_in.plan);
    bp = &padded;
  }
  const HcsSketch& a = *ap;
  const HcsSketch& b = *bp;

  const HcsPlan& pa = *a.plan;
  const HcsPlan& pb = *b.plan;
  if (pa.replicas != pb.replicas)
    throw std::invalid_argument("product operands must share replica count");
  if (pa.sketch_dims != pb.sketch_dims)
    throw std::invalid_argument("product operands must share sketch dims");

  auto plan = std::make_shared<HcsPlan>();
  plan->replicas = pa.replicas;
  plan->sketch_dims = pa.sketch_dims;
  for (std::size_t k = 0; k < pa.order(); ++k) {
    plan->dims.push_back(pa.dims[k] * pb.dims[k]);
    plan->identity_mode.push_back(false);
  }
  plan->index_hashes.resize(pa.replicas);
  plan->sign_hashes.resize(pa.replicas);
  for (std::size_t r = 0; r < pa.replicas; ++r)
    for (std::size_t k = 0; k < pa.order(); ++k) {
      // Paired index (a_k * nB_k + b_k): B's index is the fast component.
      plan->index_hashes[r].push_back(
          IndexHash::pair(pb.index_hashes[r][k], pa.index_hashes[r][k]));
      plan->sign_hashes[r].push_back(SignHash::pair(pb.sign_hashes[r][k], pa.sign_hashes[r][k]));
    }

  HcsSketch out;
  out.plan = std::move(plan);
  for (std::size_t r = 0; r < pa.replicas; ++r)
    out.tables.push_back(circular_convolve(a.tables[r], b.tables[r]));
  return out;
}

double hcs_kron_recover(const HcsSketch& product, std::span<const std::size_t> idx_a,
                        std::span<const std::size_t> idx_b) {
  const HcsPlan& plan = *product.plan;
  const std::size_t l = plan.order();
  if (idx_a.size() > l || idx_b.size() > l)
    throw std::invalid_argument("factor index order mismatch");
  std::vector<std::size_t> idx(l);
  for (std::size_t k = 0; k < l; ++k) {
    const std::size_t nb = plan.index_hashes[0][k].pair_fast_domain();
    const std::size_t ak = k < idx_a.size() ? idx_a[k] : 0;
    const std::size_t bk = k < idx_b.size() ? idx_b[k] : 0;
    if (bk >= nb || ak >= plan.dims[k] / nb) throw std::out_of_range("factor index out of range");
    idx[k] = ak * nb + bk;
  }
  return hcs_recover_entry(product, idx);
}

HcsSketch hcs_contract(const HcsSketch& a, const HcsSketch& b, const ContractionSpec& spec) {
  const HcsPlan& pa = *a.plan;
  const HcsPlan& pb = *b.plan;
  if (pa.replicas != pb.replicas)
    throw std::invalid_argument("contraction operands must share replica count");
  std::vector<bool> contracted_a(pa.order(), false), contracted_b(pb.order(), false);
  for (const auto& [ma, mb] : spec.pairs) {
    if (ma >= pa.order() || mb >= pb.order())
      throw std::invalid_argument("contracted mode out of range");
    if (!pa.identity_mode[ma] || !pb.identity_mode[mb])
      throw std::invalid_argument("contracted modes must be identity-flagged in both plans");
    if (pa.dims[ma] != pb.dims[mb])
      throw std::invalid_argument("contracted modes must have equal extents");
    contracted_a[ma] = true;
    contracted_b[mb] = true;
  }

  auto plan = std::make_shared<HcsPlan>();
  plan->replicas = pa.replicas;
  plan->index_hashes.resize(pa.replicas);
  plan->sign_hashes.resize(pa.replicas);
  auto take_mode = [&](const HcsPlan& src, std::size_t k) {
    plan->dims.push_back(src.dims[k]);
    plan->sketch_dims.push_back(src.sketch_dims[k]);
    plan->identity_mode.push_back(src.identity_mode[k]);
    for (std::size_t r = 0; r < src.replicas; ++r) {
      plan->index_hashes[r].push_back(src.index_hashes[r][k]);
      plan->sign_hashes[r].push_back(src.sign_hashes[r][k]);
    }
  };
  for (std::size_t k = 0; k < pa.order(); ++k)
    if (!contracted_a[k]) take_mode(pa, k);
  for (std::size_t k = 0; k < pb.order(); ++k)
    if (!contracted_b[k]) take_mode(pb, k);
  if (plan->dims.empty()) {
    // Fully contracted: scalar result with a trivial mode.
    plan->dims.push_back(1);
    plan->sketch_dims.push_back(1);
    plan->identity_mode.push_back(true);
    for (std::size_t r = 0; r < pa.replicas; ++r) {
      plan->index_hashes[r].push_back(IndexHash::identity(1));
      plan->sign_hashes[r].push_back(SignHash::identity(1));
    }
  }

  HcsSketch out;
  out.plan = std::move(plan);
  for (std::size_t r = 0; r < pa.replicas; ++r)
    out.tables.push_back(contract(a.tables[r], b.tables[r], spec));
  return out;
}

HcsSketch hcs_tucker(const DenseTensor& core, const std::vector<DenseTensor>& factors,
                     const std::vector<std::shared_ptr<const HcsPlan>>& factor_plans) {
  const std::size_t order = core.order();
  if (factors.size() != order || factor_plans.size() != order)
    throw std::invalid_argument("one factor and one plan per core mode required");
  for (std::size_t k = 0; k < order; ++k) {
    const DenseTensor& f = factors[k];
    const HcsPlan& p = *factor_plans[k];
    if (f.order() != 2 || f.shape()[1] != core.shape()[k])
      throw std::invalid_argument("factor shape does not match core");
    if (p.order() != 2 || p.dims != f.shape())
      throw std::invalid_argument("factor plan does not match factor shape");
    if (!p.identity_mode[1])
      throw std::invalid_argument("factor plans must keep the rank mode identity");
    if (p.replicas != factor_plans[0]->replicas)
      throw std::invalid_argument("factor plans must share replica count");
  }

  const std::size_t d = factor_plans[0]->replicas;
  std::vector<HcsSketch> sketched;
  sketched.reserve(order);
  for (std::size_t k = 0; k < order; ++k)
    sketched.push_back(hcs_sketch_tensor(factors[k], factor_plans[k]));

  auto plan = std::make_shared<HcsPlan>();
  plan->replicas = d;
  plan->index_hashes.resize(d);
  plan->sign_hashes.resize(d);
  for (std::size_t k = 0; k < order; ++k) {
    const HcsPlan& p = *factor_plans[k];
    plan->dims.push_back(p.dims[0]);
    plan->sketch_dims.push_back(p.sketch_dims[0]);
    plan->identity_mode.push_back(p.identity_mode[0]);
    for (std::size_t r = 0; r < d; ++r) {
      plan->index_hashes[r].push_back(p.index_hashes[r][0]);
      plan->sign_hashes[r].push_back(p.sign_hashes[r][0]);
    }
  }

  HcsSketch out;
  out.plan = std::move(plan);
  for (std::size_t r = 0; r < d; ++r) {
    DenseTensor acc = core;
    for (std::size_t k = 0; k < order; ++k) acc = mode_product(acc, sketched[k].tables[r], k);
    out.tables.push_back(std::move(acc));
  }
  return out;
}

double hcs_variance_bound(const DenseTensor& t, const HcsPlan& plan) {
  require_plan_matches(plan, t);
  const std::size_t m = plan.sketch_dims.empty() ? 1 : plan.sketch_dims[0];
  for (std::size_t mk : plan.sketch_dims)
    if (mk != m) throw std::invalid_argument("variance bound requires a uniform sketch dim");

  double bound = 0.0;
  double mp = 1.0;
  for (std::size_t p = 1; p <= t.order(); ++p) {
    mp *= static_cast<double>(m);
    const double tp = max_subtensor_norm(t, p);
    bound += tp * tp / mp;
  }
  return bound;
}

}  // namespace hocs
