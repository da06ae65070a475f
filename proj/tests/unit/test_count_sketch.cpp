#include <doctest.h>

#include <cmath>
#include <memory>
#include <stdexcept>
#include <vector>

#include "hocs/count_sketch.hpp"
#include "hocs/hashing.hpp"
#include "hocs/tensor.hpp"
#include "support/oracles.hpp"

using hocs::CsPlan;
using hocs::CsSketch;
using hocs::DenseTensor;

namespace {

std::shared_ptr<CsPlan> fixture_plan() {
  // h = (0,1,0,1), s = (+,-,+,-), two buckets.
  return std::make_shared<CsPlan>(CsPlan::from_tables({0, 1, 0, 1}, {1, -1, 1, -1}, 2));
}

double table_gap(const CsSketch& a, const CsSketch& b) {
  double scale = 0, gap = 0;
  for (std::size_t i = 0; i < a.table.size(); ++i) {
    scale = std::max(scale, std::fabs(b.table[i]));
    gap = std::max(gap, std::fabs(a.table[i] - b.table[i]));
  }
  return gap / (scale > 0 ? scale : 1.0);
}

}  // namespace

TEST_CASE("sketching the worked fixture") {
  const std::vector<double> u{1, 2, 3, 4};
  // Oracle: direct bucket sums per the definition.
  const auto want = oracle::cs_bucket_sums(u, std::vector<std::uint32_t>{0, 1, 0, 1},
                                           std::vector<int>{1, -1, 1, -1}, 2);
  CHECK(want[0] == 4);
  CHECK(want[1] == -6);

  CsSketch sk = hocs::cs_sketch(u, fixture_plan());
  CHECK(sk.table == want);

  CHECK_THROWS_AS(hocs::cs_sketch(std::vector<double>{1, 2}, fixture_plan()),
                  std::invalid_argument);
}

TEST_CASE("identity plan sketches losslessly") {
  const std::vector<double> u{5, -1, 2};
  auto plan = std::make_shared<CsPlan>(CsPlan::identity(3));
  CsSketch sk = hocs::cs_sketch(u, plan);
  CHECK(sk.table == u);
  for (std::size_t i = 0; i < 3; ++i) CHECK(hocs::cs_recover(sk, i) == u[i]);
}

TEST_CASE("zero input gives a zero table and zero estimates") {
  auto plan = std::make_shared<CsPlan>(CsPlan::make(10, 4, 3, 5));
  CsSketch sk = hocs::cs_sketch(std::vector<double>(10, 0.0), plan);
  for (double v : sk.table) CHECK(v == 0.0);
  CHECK(hocs::cs_recover(sk, 7) == 0.0);
}

TEST_CASE("recovery from the fixture carries collision noise") {
  const std::vector<double> u{1, 2, 3, 4};
  CsSketch sk = hocs::cs_sketch(u, fixture_plan());
  // s(2) * table[h(2)] = +1 * 4 (true value 3: index 0 collides into it).
  CHECK(hocs::cs_recover(sk, 2) == 4.0);
  CHECK_THROWS_AS(hocs::cs_recover(sk, 4), std::out_of_range);
}

TEST_CASE("median conventions") {
  CHECK(hocs::median_estimate(std::vector<double>{1, 5, 3}) == 3);
  CHECK(hocs::median_estimate(std::vector<double>{2, 2, 2, 9}) == 2);
  CHECK(hocs::median_estimate(std::vector<double>{-1, 1}) == 0);
  CHECK_THROWS_AS(hocs::median_estimate(std::vector<double>{}), std::invalid_argument);
}

TEST_CASE("outer product fixture: identity hashes, plus signs") {
  // With identity maps into two buckets, the sketch of u (x) v is the
  // circular convolution of u and v: [11, 10] for [1,2] and [3,4].
  auto pu = std::make_shared<CsPlan>(CsPlan::identity(2));
  auto pv = std::make_shared<CsPlan>(CsPlan::identity(2));
  CsSketch sku = hocs::cs_sketch(std::vector<double>{1, 2}, pu);
  CsSketch skv = hocs::cs_sketch(std::vector<double>{3, 4}, pv);
  CsSketch prod = hocs::cs_outer_product(sku, skv);

  // Oracle: bucket sums over all four products with the pair hash (i+j) mod 2.
  DenseTensor outer = hocs::tensor_product(DenseTensor({2}, {1, 2}), DenseTensor({2}, {3, 4}));
  std::vector<double> want(2, 0.0);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) want[(i + j) % 2] += outer[i + 2 * j];
  CHECK(want == std::vector<double>{11, 10});
  CHECK(table_gap(prod, hocs::cs_sketch(outer.values(), prod.plan)) < 1e-12);
  CHECK(prod.table[0] == doctest::Approx(11));
  CHECK(prod.table[1] == doctest::Approx(10));
}

TEST_CASE("outer product with a scalar one is the identity") {
  auto pu = std::make_shared<CsPlan>(CsPlan::make(5, 3, 2, 77));
  auto pv = std::make_shared<CsPlan>(CsPlan::from_tables({0}, {1}, 3));
  // Match replica count by building a two-replica trivial plan.
  auto pv2 = std::make_shared<CsPlan>(*pv);
  pv2->replicas = 2;
  pv2->index_hashes.push_back(pv->index_hashes[0]);
  pv2->sign_hashes.push_back(pv->sign_hashes[0]);

  oracle::Rng rng(41);
  DenseTensor u = rng.tensor({5});
  CsSketch sku = hocs::cs_sketch(u.values(), pu);
  CsSketch skv = hocs::cs_sketch(std::vector<double>{1.0}, pv2);
  CsSketch prod = hocs::cs_outer_product(sku, skv);
  CHECK(table_gap(prod, sku) < 1e-12);

  CsSketch zero = hocs::cs_sketch(std::vector<double>(5, 0.0), pu);
  CsSketch zprod = hocs::cs_outer_product(zero, skv);
  for (double v : zprod.table) CHECK(std::fabs(v) < 1e-12);
}

TEST_CASE("outer product sketch equals the flat sketch under the pair hash") {
  oracle::Rng rng(42);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t nu = 2 + rng.index(12), nv = 2 + rng.index(12);
    const std::size_t c = 1 + rng.index(16), d = 1 + rng.index(3);
    auto pu = std::make_shared<CsPlan>(CsPlan::make(nu, c, d, rng.eng()));
    auto pv = std::make_shared<CsPlan>(CsPlan::make(nv, c, d, rng.eng()));
    DenseTensor u = rng.tensor({nu}), v = rng.tensor({nv});
    CsSketch prod = hocs::cs_outer_product(hocs::cs_sketch(u.values(), pu),
                                           hocs::cs_sketch(v.values(), pv));
    CsSketch direct = hocs::cs_sketch(hocs::tensor_product(u, v).values(), prod.plan);
    CHECK(table_gap(prod, direct) < 1e-9);
  }
  SUBCASE("mismatched layouts are rejected") {
    auto p1 = std::make_shared<CsPlan>(CsPlan::make(4, 3, 1, 1));
    auto p2 = std::make_shared<CsPlan>(CsPlan::make(4, 5, 1, 1));
    CsSketch a = hocs::cs_sketch(std::vector<double>(4, 1.0), p1);
    CsSketch b = hocs::cs_sketch(std::vector<double>(4, 1.0), p2);
    CHECK_THROWS_AS(hocs::cs_outer_product(a, b), std::invalid_argument);
  }
}

TEST_CASE("matrix product fixture: A times identity") {
  // A = [[1,2],[3,4]], B = I, identity hashes, plus signs, two buckets:
  // vec(AB) = [1,3,2,4] under pair hash (i+j) mod 2 -> buckets [5,5].
  DenseTensor a({2, 2}, {1, 3, 2, 4});
  DenseTensor b({2, 2}, {1, 0, 0, 1});
  auto rp = std::make_shared<CsPlan>(CsPlan::identity(2));
  auto cp = std::make_shared<CsPlan>(CsPlan::identity(2));
  CsSketch prod = hocs::cs_matrix_product(a, b, rp, cp);

  std::vector<double> want(2, 0.0);
  const std::vector<double> vec_ab{1, 3, 2, 4};
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) want[(i + j) % 2] += vec_ab[i + 2 * j];
  CHECK(want == std::vector<double>{5, 5});
  CHECK(prod.table[0] == doctest::Approx(5));
  CHECK(prod.table[1] == doctest::Approx(5));
}

TEST_CASE("matrix product scalar and zero cases") {
  auto one = std::make_shared<CsPlan>(CsPlan::identity(1));
  CsSketch prod = hocs::cs_matrix_product(DenseTensor({1, 1}, {2.0}), DenseTensor({1, 1}, {3.0}),
                                          one, one);
  CHECK(prod.table.size() == 1);
  CHECK(prod.table[0] == doctest::Approx(6.0));

  oracle::Rng rng(43);
  DenseTensor a = rng.tensor({3, 2});
  DenseTensor zero({2, 4});
  auto rp = std::make_shared<CsPlan>(CsPlan::make(3, 4, 2, 8));
  auto cp = std::make_shared<CsPlan>(CsPlan::make(4, 4, 2, 9));
  CsSketch zprod = hocs::cs_matrix_product(a, zero, rp, cp);
  for (double v : zprod.table) CHECK(std::fabs(v) < 1e-12);
}

TEST_CASE("matrix product sketch equals the flat sketch of vec(AB)") {
  oracle::Rng rng(44);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n1 = 2 + rng.index(6), k = 1 + rng.index(5), n2 = 2 + rng.index(6);
    const std::size_t c = 2 + rng.index(12), d = 1 + rng.index(3);
    DenseTensor a = rng.tensor({n1, k}), b = rng.tensor({k, n2});
    auto rp = std::make_shared<CsPlan>(CsPlan::make(n1, c, d, rng.eng()));
    auto cp = std::make_shared<CsPlan>(CsPlan::make(n2, c, d, rng.eng()));
    CsSketch prod = hocs::cs_matrix_product(a, b, rp, cp);
    DenseTensor ab = oracle::contract(a, b, hocs::ContractionSpec{{{1, 0}}});
    CsSketch direct = hocs::cs_sketch(ab.values(), prod.plan);
    CHECK(table_gap(prod, direct) < 1e-9);
  }
}

TEST_CASE("tucker fixtures") {
  // Scalar everything.
  auto one = std::make_shared<CsPlan>(CsPlan::identity(1));
  CsSketch scalar = hocs::cs_tucker(DenseTensor({1, 1, 1}, {2.0}), DenseTensor({1, 1}, {1.0}),
                                    DenseTensor({1, 1}, {1.0}), DenseTensor({1, 1}, {1.0}), one,
                                    one, one);
  CHECK(scalar.table.size() == 1);
  CHECK(scalar.table[0] == doctest::Approx(2.0));

  // G=1, U=[1,2], V=[1,0], W=[0,1], two buckets, identity hashes:
  // the two nonzero entries of U(x)V(x)W land in buckets (i+0+1) mod 2.
  auto p2 = std::make_shared<CsPlan>(CsPlan::identity(2));
  CsSketch tk = hocs::cs_tucker(DenseTensor({1, 1, 1}, {1.0}), DenseTensor({2, 1}, {1, 2}),
                                DenseTensor({2, 1}, {1, 0}), DenseTensor({2, 1}, {0, 1}), p2, p2,
                                p2);
  DenseTensor dense = hocs::tensor_product(
      hocs::tensor_product(DenseTensor({2}, {1, 2}), DenseTensor({2}, {1, 0})),
      DenseTensor({2}, {0, 1}));
  std::vector<double> want(2, 0.0);
  std::size_t flat = 0;
  for (std::size_t kk = 0; kk < 2; ++kk)
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t i = 0; i < 2; ++i) want[(i + j + kk) % 2] += dense[flat++];
  CHECK(want == std::vector<double>{2, 1});
  CHECK(tk.table[0] == doctest::Approx(2));
  CHECK(tk.table[1] == doctest::Approx(1));

  // Zero core sketches to zero.
  oracle::Rng rng(45);
  auto pa = std::make_shared<CsPlan>(CsPlan::make(4, 5, 1, 1));
  auto pb = std::make_shared<CsPlan>(CsPlan::make(3, 5, 1, 2));
  auto pc = std::make_shared<CsPlan>(CsPlan::make(2, 5, 1, 3));
  CsSketch z = hocs::cs_tucker(DenseTensor({2, 2, 2}), rng.tensor({4, 2}), rng.tensor({3, 2}),
                               rng.tensor({2, 2}), pa, pb, pc);
  for (double v : z.table) CHECK(std::fabs(v) < 1e-12);
}

TEST_CASE("tucker sketch equals the flat sketch of the dense reconstruction") {
  oracle::Rng rng(46);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n1 = 2 + rng.index(4), n2 = 2 + rng.index(4), n3 = 2 + rng.index(4);
    const std::size_t r1 = 1 + rng.index(3), r2 = 1 + rng.index(3), r3 = 1 + rng.index(3);
    const std::size_t c = 2 + rng.index(10), d = 1 + rng.index(2);
    DenseTensor g = rng.tensor({r1, r2, r3});
    DenseTensor u = rng.tensor({n1, r1}), v = rng.tensor({n2, r2}), w = rng.tensor({n3, r3});
    auto pu = std::make_shared<CsPlan>(CsPlan::make(n1, c, d, rng.eng()));
    auto pv = std::make_shared<CsPlan>(CsPlan::make(n2, c, d, rng.eng()));
    auto pw = std::make_shared<CsPlan>(CsPlan::make(n3, c, d, rng.eng()));
    CsSketch tk = hocs::cs_tucker(g, u, v, w, pu, pv, pw);
    DenseTensor dense =
        hocs::mode_product(hocs::mode_product(hocs::mode_product(g, u, 0), v, 1), w, 2);
    CsSketch direct = hocs::cs_sketch(dense.values(), tk.plan);
    CHECK(table_gap(tk, direct) < 1e-9);
  }
}

TEST_CASE("sketching is linear in the input") {
  oracle::Rng rng(47);
  auto plan = std::make_shared<CsPlan>(CsPlan::make(40, 7, 3, 99));
  DenseTensor u = rng.tensor({40}), v = rng.tensor({40});
  const double alpha = 2.25, beta = -0.5;  // exactly representable
  std::vector<double> mix(40);
  for (std::size_t i = 0; i < 40; ++i) mix[i] = alpha * u[i] + beta * v[i];
  CsSketch sm = hocs::cs_sketch(mix, plan);
  CsSketch su = hocs::cs_sketch(u.values(), plan);
  CsSketch sv = hocs::cs_sketch(v.values(), plan);
  for (std::size_t i = 0; i < sm.table.size(); ++i)
    CHECK(sm.table[i] == doctest::Approx(alpha * su.table[i] + beta * sv.table[i]).epsilon(1e-12));
}

TEST_CASE("single-replica recovery is unbiased over seeds (light)") {
  oracle::Rng rng(48);
  const std::size_t n = 64, c = 8, trials = 4000;
  DenseTensor u = rng.tensor({n});
  const std::size_t target = 13;
  double sum = 0, sum_sq = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    auto plan = std::make_shared<CsPlan>(CsPlan::make(n, c, 1, hocs::mix_seed(4242, t)));
    CsSketch sk = hocs::cs_sketch(u.values(), plan);
    const double est = hocs::cs_recover(sk, target);
    sum += est;
    sum_sq += est * est;
  }
  const double mean = sum / trials;
  const double var = sum_sq / trials - mean * mean;
  const double se = std::sqrt(var / trials);
  CHECK(std::fabs(mean - u[target]) <= 4 * se);

  // Variance within the norm bound (slack 1.2).
  double norm_sq = 0;
  for (std::size_t i = 0; i < n; ++i) norm_sq += u[i] * u[i];
  CHECK(var <= 1.2 * norm_sq / double(c));
}
