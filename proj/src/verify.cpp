#include <cmath>
#include <functional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "hocs/bench.hpp"
#include "hocs/count_sketch.hpp"
#include "hocs/fft.hpp"
#include "hocs/hashing.hpp"
#include "hocs/hcs.hpp"
#include "hocs/reshuffle.hpp"
#include "hocs/tensor.hpp"

// Quick property battery behind `hocs verify`. The full oracle-driven suites
// live under tests/; this is the smoke check a benchmark run starts with.

namespace hocs {

namespace {

struct Check {
  int checks = 0;
  std::string first_failure;

  void operator()(bool ok, const std::string& what) {
    ++checks;
    if (!ok && first_failure.empty()) first_failure = what;
  }
  void near(double a, double b, double tol, const std::string& what) {
    const double scale = std::max({std::fabs(a), std::fabs(b), 1.0});
    (*this)(std::fabs(a - b) <= tol * scale, what);
  }
};

double rel_gap(const DenseTensor& a, const DenseTensor& b) {
  double num = 0, den = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += (a[i] - b[i]) * (a[i] - b[i]);
    den += b[i] * b[i];
  }
  return den == 0 ? std::sqrt(num) : std::sqrt(num / den);
}

struct Rand {
  std::mt19937_64 eng;
  explicit Rand(std::uint64_t s) : eng(s) {}
  double uniform(double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(eng() >> 11) * 0x1.0p-53);
  }
  std::size_t index(std::size_t n) { return eng() % n; }
  DenseTensor tensor(std::vector<std::size_t> shape, double lo = -1, double hi = 1) {
    DenseTensor t(std::move(shape));
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = uniform(lo, hi);
    return t;
  }
};

void tensor_suite(Check& ck, Rand& rng) {
  // Reshape round trip keeps the value sequence.
  DenseTensor t = rng.tensor({3, 4, 5});
  ck(reshape(t, {60}).values()[17] == t[17] && reshape(t, {60}).size() == 60, "reshape round trip");

  // Paired product of 2x2 matrices against the classical Kronecker layout.
  DenseTensor a = rng.tensor({2, 2}), b = rng.tensor({2, 2});
  DenseTensor k = kron_pairing_product(a, b);
  bool kron_ok = true;
  for (std::size_t p = 0; p < 2; ++p)
    for (std::size_t q = 0; q < 2; ++q)
      for (std::size_t h = 0; h < 2; ++h)
        for (std::size_t g = 0; g < 2; ++g) {
          const std::size_t row = p * 2 + h, col = q * 2 + g;
          if (std::fabs(k[row + 4 * col] - a[p + 2 * q] * b[h + 2 * g]) > 1e-12) kron_ok = false;
        }
  ck(kron_ok, "kron pairing matches classical Kronecker");

  // Contraction against an explicit loop for a 2x3 * 3x2 product.
  DenseTensor ma = rng.tensor({2, 3}), mb = rng.tensor({3, 2});
  DenseTensor mc = contract(ma, mb, {{{1, 0}}});
  bool mm_ok = true;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) {
      double s = 0;
      for (std::size_t r = 0; r < 3; ++r) s += ma[i + 2 * r] * mb[r + 3 * j];
      if (std::fabs(mc[i + 2 * j] - s) > 1e-12) mm_ok = false;
    }
  ck(mm_ok, "contract matches explicit matrix product");

  // Bilinearity in the first argument.
  DenseTensor a2 = rng.tensor({3, 4}), b2 = rng.tensor({4, 2});
  const double alpha = rng.uniform(0.5, 2.0);
  DenseTensor scaled = a2;
  for (std::size_t i = 0; i < scaled.size(); ++i) scaled[i] *= alpha;
  DenseTensor lhs = contract(scaled, b2, {{{1, 0}}});
  DenseTensor rhs = contract(a2, b2, {{{1, 0}}});
  for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] *= alpha;
  ck(rel_gap(lhs, rhs) < 1e-12, "contract is bilinear");

  // Subtensor norms grow with the order.
  DenseTensor t3 = rng.tensor({4, 3, 3});
  double prev = 0;
  bool monotone = true;
  for (std::size_t p = 1; p <= 3; ++p) {
    const double cur = max_subtensor_norm(t3, p);
    if (cur + 1e-12 < prev) monotone = false;
    prev = cur;
  }
  ck(monotone && std::fabs(prev - t3.frobenius_norm()) < 1e-9, "max_subtensor_norm monotone in p");
}

void hashing_suite(Check& ck, Rand& rng) {
  const std::uint64_t seed = rng.eng();
  IndexHash h1 = make_index_hash(1000, 16, seed);
  IndexHash h2 = make_index_hash(1000, 16, seed);
  bool same = true;
  for (std::size_t i = 0; i < 1000; ++i) same &= h1(i) == h2(i);
  ck(same, "same seed reproduces the index map");

  // Bucket occupancy chi-square within 5 sigma of uniform.
  const std::size_t n = 10000, m = 10;
  IndexHash h = make_index_hash(n, m, rng.eng());
  std::vector<double> counts(m, 0.0);
  for (std::size_t i = 0; i < n; ++i) counts[h(i)] += 1.0;
  double chi2 = 0;
  const double expected = double(n) / double(m);
  for (double c : counts) chi2 += (c - expected) * (c - expected) / expected;
  ck(chi2 <= (m - 1) + 5.0 * std::sqrt(2.0 * (m - 1)), "index hash bucket occupancy uniform");

  SignHash s = make_sign_hash(n, rng.eng());
  double mean = 0;
  bool pm = true;
  for (std::size_t i = 0; i < n; ++i) {
    const int v = s(i);
    pm &= (v == 1 || v == -1);
    mean += v;
  }
  mean /= double(n);
  ck(pm && std::fabs(mean) <= 5.0 / std::sqrt(double(n)), "sign hash balanced");

  // Collision probability for a fixed index pair over fresh seeds.
  const std::size_t trials = 10000;
  std::size_t collisions = 0;
  for (std::size_t t = 0; t < trials; ++t)
    if (make_index_hash(97, 10, mix_seed(seed, t))(13) == make_index_hash(97, 10, mix_seed(seed, t))(57))
      ++collisions;
  const double p = 1.0 / 10.0;
  const double sigma = std::sqrt(p * (1 - p) / double(trials));
  ck(std::fabs(double(collisions) / trials - p) <= 3 * sigma, "pairwise collision rate near 1/m");

  // Bucket accumulation equals the explicit hash-matrix route, bit for bit.
  DenseTensor u = rng.tensor({64});
  IndexHash hh = make_index_hash(64, 7, rng.eng());
  SignHash ss = make_sign_hash(64, rng.eng());
  DenseTensor signed_u({64});
  for (std::size_t i = 0; i < 64; ++i) signed_u[i] = ss(i) * u[i];
  DenseTensor via_matrix = mode_product(signed_u, hash_matrix(hh), 0);
  DenseTensor direct({7});
  for (std::size_t i = 0; i < 64; ++i) direct[hh(i)] += ss(i) * u[i];
  ck(via_matrix == direct, "hash-matrix route bit-exact");
}

void fft_suite(Check& ck, Rand& rng) {
  for (auto shape : std::vector<std::vector<std::size_t>>{{7}, {24}, {16}, {3, 5, 7}, {9, 15}}) {
    DenseTensor a = rng.tensor(shape), b = rng.tensor(shape);
    DenseTensor fftc = circular_convolve(a, b);
    DenseTensor direct(shape);
    std::vector<std::size_t> ia(shape.size(), 0);
    do {
      std::vector<std::size_t> ib(shape.size(), 0);
      do {
        std::vector<std::size_t> ic(shape.size());
        for (std::size_t k = 0; k < shape.size(); ++k)
          ic[k] = (ia[k] + ib[k]) % shape[k];
        direct.at(ic) += a.at(ia) * b.at(ib);
      } while (detail::next_index(ib, shape));
    } while (detail::next_index(ia, shape));
    ck(rel_gap(fftc, direct) < 1e-9, "convolution theorem on shape of order " +
                                         std::to_string(shape.size()));

    const ComplexTensor spec = dft_nd(a);
    double lhs = 0;
    for (const auto& v : spec.data) lhs += std::norm(v);
    const double rhs = double(a.size()) * a.frobenius_norm() * a.frobenius_norm();
    ck.near(lhs, rhs, 1e-9, "Parseval identity");
  }
}

void count_sketch_suite(Check& ck, Rand& rng) {
  // Fixed fixture: four values into two buckets with alternating signs.
  auto fixture = std::make_shared<CsPlan>(CsPlan::from_tables({0, 1, 0, 1}, {1, -1, 1, -1}, 2));
  const std::vector<double> u{1, 2, 3, 4};
  CsSketch sk = cs_sketch(u, fixture);
  ck(sk.table[0] == 4 && sk.table[1] == -6, "bucket sums of the fixture sketch");
  ck(cs_recover(sk, 2) == 4, "fixture entry estimate");
  ck(median_estimate(std::vector<double>{2, 2, 2, 9}) == 2, "even-count median");

  // Convolution route equals the sketch of the flattened outer product.
  for (int t = 0; t < 10; ++t) {
    const std::size_t nu = 2 + rng.index(10), nv = 2 + rng.index(10), c = 1 + rng.index(12);
    auto pu = std::make_shared<CsPlan>(CsPlan::make(nu, c, 2, rng.eng()));
    auto pv = std::make_shared<CsPlan>(CsPlan::make(nv, c, 2, rng.eng()));
    DenseTensor uu = rng.tensor({nu}), vv = rng.tensor({nv});
    CsSketch conv = cs_outer_product(cs_sketch(uu.values(), pu), cs_sketch(vv.values(), pv));
    CsSketch direct = cs_sketch(tensor_product(uu, vv).values(), conv.plan);
    double gap = 0;
    for (std::size_t i = 0; i < conv.table.size(); ++i)
      gap = std::max(gap, std::fabs(conv.table[i] - direct.table[i]));
    ck(gap <= 1e-9 * (1 + std::fabs(direct.table[0])), "outer-product sketch equals flat sketch");
  }

  // Matrix product route.
  DenseTensor a = rng.tensor({4, 3}), b = rng.tensor({3, 5});
  auto rp = std::make_shared<CsPlan>(CsPlan::make(4, 6, 2, rng.eng()));
  auto cp = std::make_shared<CsPlan>(CsPlan::make(5, 6, 2, rng.eng()));
  CsSketch mp = cs_matrix_product(a, b, rp, cp);
  CsSketch mp_direct = cs_sketch(contract(a, b, {{{1, 0}}}).values(), mp.plan);
  double gap = 0;
  for (std::size_t i = 0; i < mp.table.size(); ++i)
    gap = std::max(gap, std::fabs(mp.table[i] - mp_direct.table[i]));
  ck(gap < 1e-9, "matrix-product sketch equals flat sketch");

  // Tucker route.
  DenseTensor g = rng.tensor({2, 2, 2});
  DenseTensor fu = rng.tensor({5, 2}), fv = rng.tensor({4, 2}), fw = rng.tensor({3, 2});
  auto tu = std::make_shared<CsPlan>(CsPlan::make(5, 7, 1, rng.eng()));
  auto tv = std::make_shared<CsPlan>(CsPlan::make(4, 7, 1, rng.eng()));
  auto tw = std::make_shared<CsPlan>(CsPlan::make(3, 7, 1, rng.eng()));
  CsSketch tk = cs_tucker(g, fu, fv, fw, tu, tv, tw);
  DenseTensor dense = mode_product(mode_product(mode_product(g, fu, 0), fv, 1), fw, 2);
  CsSketch tk_direct = cs_sketch(dense.values(), tk.plan);
  gap = 0;
  for (std::size_t i = 0; i < tk.table.size(); ++i)
    gap = std::max(gap, std::fabs(tk.table[i] - tk_direct.table[i]));
  ck(gap < 1e-9, "Tucker sketch equals flat sketch");
}

void hcs_suite(Check& ck, Rand& rng) {
  // Identity plans recover exactly.
  DenseTensor t = rng.tensor({4, 5});
  auto ip = std::make_shared<HcsPlan>(HcsPlan::identity({4, 5}, 3));
  ck(rel_gap(hcs_recover_full(hcs_sketch_tensor(t, ip)), t) < 1e-12, "identity plan exactness");

  // Bucket form equals the mode-product form with explicit matrices.
  auto plan = std::make_shared<HcsPlan>(HcsPlan::make({6, 7}, {3, 4}, 2, rng.eng()));
  HcsSketch sk = hcs_sketch_tensor(t = rng.tensor({6, 7}), plan);
  for (std::size_t r = 0; r < 2; ++r) {
    DenseTensor signed_t = t;
    std::vector<std::size_t> idx(2, 0);
    std::size_t flat = 0;
    do {
      signed_t[flat] = t[flat] * plan->sign_hashes[r][0](idx[0]) * plan->sign_hashes[r][1](idx[1]);
      ++flat;
    } while (detail::next_index(idx, t.shape()));
    DenseTensor via = mode_product(signed_t, hash_matrix(plan->index_hashes[r][0]), 0);
    via = mode_product(via, hash_matrix(plan->index_hashes[r][1]), 1);
    ck(rel_gap(sk.tables[r], via) < 1e-9, "bucket form equals mode-product form");
  }

  // Product, contraction and Tucker identities on random instances.
  for (int trial = 0; trial < 5; ++trial) {
    DenseTensor a = rng.tensor({3, 4}), b = rng.tensor({2, 5});
    auto pa = std::make_shared<HcsPlan>(HcsPlan::make({3, 4}, {4, 3}, 2, rng.eng()));
    auto pb = std::make_shared<HcsPlan>(HcsPlan::make({2, 5}, {4, 3}, 2, rng.eng()));
    HcsSketch prod = hcs_tensor_product(hcs_sketch_tensor(a, pa), hcs_sketch_tensor(b, pb));
    HcsSketch direct = hcs_sketch_tensor(kron_pairing_product(a, b), prod.plan);
    double gap = 0;
    for (std::size_t r = 0; r < 2; ++r)
      gap = std::max(gap, rel_gap(prod.tables[r], direct.tables[r]));
    ck(gap < 1e-9, "product sketch equals sketch of paired product");
  }
  for (int trial = 0; trial < 5; ++trial) {
    DenseTensor a = rng.tensor({4, 3}), b = rng.tensor({3, 5});
    auto pa = std::make_shared<HcsPlan>(HcsPlan::make({4, 3}, {2, 3}, 2, rng.eng(), {1}));
    auto pb = std::make_shared<HcsPlan>(HcsPlan::make({3, 5}, {3, 2}, 2, rng.eng(), {0}));
    HcsSketch prod =
        hcs_contract(hcs_sketch_tensor(a, pa), hcs_sketch_tensor(b, pb), {{{1, 0}}});
    HcsSketch direct = hcs_sketch_tensor(contract(a, b, {{{1, 0}}}), prod.plan);
    double gap = 0;
    for (std::size_t r = 0; r < 2; ++r)
      gap = std::max(gap, rel_gap(prod.tables[r], direct.tables[r]));
    ck(gap < 1e-9, "contraction sketch equals sketch of contraction");
  }
  {
    DenseTensor g = rng.tensor({2, 3, 2});
    std::vector<DenseTensor> f{rng.tensor({5, 2}), rng.tensor({4, 3}), rng.tensor({6, 2})};
    std::vector<std::shared_ptr<const HcsPlan>> plans{
        std::make_shared<HcsPlan>(HcsPlan::make({5, 2}, {3, 2}, 2, rng.eng(), {1})),
        std::make_shared<HcsPlan>(HcsPlan::make({4, 3}, {2, 3}, 2, rng.eng(), {1})),
        std::make_shared<HcsPlan>(HcsPlan::make({6, 2}, {4, 2}, 2, rng.eng(), {1}))};
    HcsSketch tuck = hcs_tucker(g, f, plans);
    DenseTensor dense = g;
    for (std::size_t k = 0; k < 3; ++k) dense = mode_product(dense, f[k], k);
    HcsSketch direct = hcs_sketch_tensor(dense, tuck.plan);
    double gap = 0;
    for (std::size_t r = 0; r < 2; ++r)
      gap = std::max(gap, rel_gap(tuck.tables[r], direct.tables[r]));
    ck(gap < 1e-9, "Tucker sketch equals sketch of reconstruction");
  }

  // Variance bound closed form on the all-ones 2x2 input with m = 2.
  DenseTensor ones({2, 2}, {1, 1, 1, 1});
  auto vb = std::make_shared<HcsPlan>(HcsPlan::make({2, 2}, {2, 2}, 1, 7));
  ck.near(hcs_variance_bound(ones, *vb), 2.0, 1e-12, "variance bound closed form");
}

void reshuffle_suite(Check& ck, Rand& rng) {
  const std::vector<double> u{9, 7, 5, 3};
  ReshufflePermutation perm = build_reshuffle(u, {2, 2});
  const std::vector<double> placed = hocs::apply(perm, u);
  ck(placed == std::vector<double>({9, 7, 5, 3}), "zig-zag placement of sorted input");

  DenseTensor r = rng.tensor({6, 8});
  ReshufflePermutation p2 = build_reshuffle(r.values(), {6, 8});
  const std::vector<double> round = hocs::invert(p2, hocs::apply(p2, r.values()));
  bool eq = true;
  for (std::size_t i = 0; i < round.size(); ++i) eq &= round[i] == r[i];
  ck(eq, "round trip exact");

  // Spiked matrix: spreading strictly lowers the worst fiber norm.
  DenseTensor spike({50, 50});
  for (std::size_t i = 0; i < spike.size(); ++i) spike[i] = rng.uniform(-1, 1);
  for (std::size_t i = 0; i < 50; ++i) spike[i + 50] = 100.0;
  ReshufflePermutation p3 = build_reshuffle(spike.values(), {50, 50});
  DenseTensor spread({50, 50}, hocs::apply(p3, spike.values()));
  ck(max_subtensor_norm(spread, 1) < max_subtensor_norm(spike, 1), "spreading lowers fiber norm");
}

}  // namespace

int run_verification(std::ostream& out, std::uint64_t seed) {
  Rand rng(mix_seed(seed, 0xCAFE));
  int failures = 0;
  const std::vector<std::pair<std::string, std::function<void(Check&, Rand&)>>> suites{
      {"tensor_algebra", tensor_suite}, {"hashing", hashing_suite},
      {"fft_convolution", fft_suite},   {"count_sketch", count_sketch_suite},
      {"higher_order_cs", hcs_suite},   {"reshuffle", reshuffle_suite},
  };
  for (const auto& [name, fn] : suites) {
    Check ck;
    fn(ck, rng);
    if (ck.first_failure.empty()) {
      out << "ok   " << name << " (" << ck.checks << " checks)\n";
    } else {
      out << "FAIL " << name << ": " << ck.first_failure << "\n";
      ++failures;
    }
  }
  return failures;
}

}  // namespace hocs
