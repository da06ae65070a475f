#include "hocs/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>
#include <stdexcept>

#include "hocs/kernels.hpp"
#include "hocs/reshuffle.hpp"

namespace hocs {

namespace {

/// Deterministic uniform doubles. The engine is fully specified by the
/// standard and the transform avoids std::uniform_real_distribution, so the
/// same seed yields the same data everywhere.
struct Uniform {
  std::mt19937_64 eng;
  explicit Uniform(std::uint64_t seed) : eng(seed) {}
  double operator()(double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(eng() >> 11) * 0x1.0p-53);
  }
};

template <class F>
std::int64_t timed(bool measure, F&& f) {
  if (!measure) {
    f();
    return 0;
  }
  const auto t0 = std::chrono::steady_clock::now();
  f();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count();
}

std::string dims_string(std::span<const std::size_t> dims) {
  std::string s;
  for (std::size_t k = 0; k < dims.size(); ++k) {
    if (k) s += 'x';
    s += std::to_string(dims[k]);
  }
  return s;
}

int method_rank(const std::string& m) {
  if (m == "cs") return 0;
  if (m == "hcs") return 1;
  return 2;
}

void sort_rows(std::vector<ExperimentRow>& rows) {
  std::stable_sort(rows.begin(), rows.end(), [](const ExperimentRow& a, const ExperimentRow& b) {
    if (a.compression_ratio != b.compression_ratio)
      return a.compression_ratio < b.compression_ratio;
    return method_rank(a.method) < method_rank(b.method);
  });
}

std::string format_double(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

}  // namespace

double relative_error(const DenseTensor& estimate, const DenseTensor& truth) {
  if (estimate.shape() != truth.shape())
    throw std::invalid_argument("relative_error requires equal shapes");
  const auto& k = kernels::ops();
  const double truth_sq = k.sum_sq(truth.data(), truth.size());
  if (truth_sq == 0.0) throw std::invalid_argument("relative_error undefined for zero truth");
  return std::sqrt(k.sum_sq_diff(estimate.data(), truth.data(), truth.size()) / truth_sq);
}

MemoryAccount memory_account(const CsPlan& plan) {
  return {2 * plan.replicas * plan.input_length, plan.replicas * plan.buckets};
}

MemoryAccount memory_account(const HcsPlan& plan) {
  std::size_t hashed = 0;
  for (std::size_t k = 0; k < plan.order(); ++k)
    if (!plan.identity_mode[k]) hashed += plan.dims[k];
  return {2 * plan.replicas * hashed, plan.replicas * plan.sketch_length()};
}

namespace {

struct RowBuilder {
  const BenchConfig& cfg;
  std::string experiment;
  std::vector<ExperimentRow> rows;

  void add(const std::string& method, double ratio, std::string sketch_dims,
           std::int64_t t_compress, std::int64_t t_recover, const MemoryAccount& mem,
           double err) {
    rows.push_back({experiment, method, ratio, std::move(sketch_dims), cfg.replicas, cfg.seed,
                    t_compress, t_recover, mem.hash_entries, mem.output_entries, err});
  }
};

}  // namespace

std::vector<ExperimentRow> run_spike_experiment(const BenchConfig& cfg) {
  Uniform rng(mix_seed(cfg.seed, 101));
  DenseTensor a({50, 50});
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = rng(-1.0, 1.0);
  for (std::size_t i = 0; i < 50; ++i) a[i + 50 * 1] = 100.0;  // spiked column

  RowBuilder out{cfg, "spike", {}};
  const std::size_t d = cfg.replicas;

  // Uncompressed dims keep the identity map, so a ratio-1 run is lossless.
  auto make_cs_plan = [&](std::size_t c, std::uint64_t cell_seed) {
    return std::make_shared<CsPlan>(c == 2500 ? CsPlan::identity(2500, d)
                                              : CsPlan::make(2500, c, d, cell_seed));
  };
  auto make_hcs_plan = [&](std::size_t m, std::uint64_t cell_seed) {
    const std::vector<std::size_t> ident = m == 50 ? std::vector<std::size_t>{0, 1}
                                                   : std::vector<std::size_t>{};
    return std::make_shared<HcsPlan>(HcsPlan::make({50, 50}, {m, m}, d, cell_seed, ident));
  };

  auto run_cs = [&](std::size_t m, std::uint64_t cell_seed, double ratio, bool record) {
    auto plan = make_cs_plan(m * m, cell_seed);
    CsSketch sk;
    const std::int64_t tc = timed(cfg.measure_time, [&] { sk = cs_sketch(a.values(), plan); });
    DenseTensor rec;
    const std::int64_t tr =
        timed(cfg.measure_time, [&] { rec = DenseTensor({50, 50}, cs_recover_all(sk)); });
    if (record)
      out.add("cs", ratio, std::to_string(m * m), tc, tr, memory_account(*plan),
              relative_error(rec, a));
  };
  auto run_hcs = [&](std::size_t m, std::uint64_t cell_seed, double ratio, bool record) {
    auto plan = make_hcs_plan(m, cell_seed);
    HcsSketch sk;
    const std::int64_t tc = timed(cfg.measure_time, [&] { sk = hcs_sketch_tensor(a, plan); });
    DenseTensor rec;
    const std::int64_t tr = timed(cfg.measure_time, [&] { rec = hcs_recover_full(sk); });
    if (record)
      out.add("hcs", ratio, dims_string(plan->sketch_dims), tc, tr, memory_account(*plan),
              relative_error(rec, a));
  };
  auto run_hcs_reshuffled = [&](std::size_t m, std::uint64_t cell_seed, double ratio,
                                bool record) {
    auto plan = make_hcs_plan(m, cell_seed);
    HcsSketch sk;
    ReshufflePermutation perm;
    const std::int64_t tc = timed(cfg.measure_time, [&] {
      perm = build_reshuffle(a.values(), {50, 50});
      sk = hcs_sketch_vector(hocs::apply(perm, a.values()), plan);
    });
    DenseTensor rec;
    const std::int64_t tr = timed(cfg.measure_time, [&] {
      rec = DenseTensor({50, 50}, hocs::invert(perm, hcs_recover_full(sk).values()));
    });
    if (record)
      out.add("hcs-reshuffled", ratio, dims_string(plan->sketch_dims), tc, tr,
              memory_account(*plan), relative_error(rec, a));
  };

  bool warmed = !cfg.measure_time;
  for (std::size_t ri = 0; ri < cfg.ratios.size(); ++ri) {
    const std::size_t m = std::clamp<std::size_t>(
        static_cast<std::size_t>(std::llround(std::sqrt(2500.0 / cfg.ratios[ri]))), 1, 50);
    const double ratio = 2500.0 / static_cast<double>(m * m);
    const std::uint64_t base = mix_seed(cfg.seed, 0xE0 + 16 * ri);
    if (!warmed) {  // one warm-up iteration, discarded
      run_hcs(m, mix_seed(base, 1), ratio, false);
      warmed = true;
    }
    run_cs(m, mix_seed(base, 0), ratio, true);
    run_hcs(m, mix_seed(base, 1), ratio, true);
    run_hcs_reshuffled(m, mix_seed(base, 2), ratio, true);
  }
  sort_rows(out.rows);
  return out.rows;
}

std::vector<ExperimentRow> run_kron_experiment(const BenchConfig& cfg) {
  Uniform rng(mix_seed(cfg.seed, 202));
  DenseTensor a({30, 30}), b({30, 30});
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = rng(-5.0, 5.0);
  for (std::size_t i = 0; i < b.size(); ++i) b[i] = rng(-5.0, 5.0);

  const DenseTensor flat_a = reshape(a, {900});
  const DenseTensor flat_b = reshape(b, {900});
  const DenseTensor truth_flat = tensor_product(flat_a, flat_b);   // vec(A) (x) vec(B) layout
  const DenseTensor truth_paired = kron_pairing_product(a, b);     // per-mode paired layout

  RowBuilder out{cfg, "kron", {}};
  const std::size_t d = cfg.replicas;
  constexpr double kExact = 900.0 * 900.0;

  auto run_cs = [&](std::size_t m, std::uint64_t cell_seed, double ratio, bool record) {
    const std::size_t c = m * m;
    auto pu = std::make_shared<CsPlan>(CsPlan::make(900, c, d, mix_seed(cell_seed, 10)));
    auto pv = std::make_shared<CsPlan>(CsPlan::make(900, c, d, mix_seed(cell_seed, 11)));
    CsSketch prod;
    const std::int64_t tc = timed(cfg.measure_time, [&] {
      prod = cs_outer_product(cs_sketch(flat_a.values(), pu), cs_sketch(flat_b.values(), pv));
    });
    DenseTensor rec;
    const std::int64_t tr =
        timed(cfg.measure_time, [&] { rec = DenseTensor({900, 900}, cs_recover_all(prod)); });
    if (record)
      out.add("cs", ratio, std::to_string(c), tc, tr, memory_account(*prod.plan),
              relative_error(rec, truth_flat));
  };
  auto run_hcs = [&](std::size_t m, std::uint64_t cell_seed, double ratio, bool record) {
    auto pa = std::make_shared<HcsPlan>(HcsPlan::make({30, 30}, {m, m}, d, mix_seed(cell_seed, 10)));
    auto pb = std::make_shared<HcsPlan>(HcsPlan::make({30, 30}, {m, m}, d, mix_seed(cell_seed, 11)));
    HcsSketch prod;
    const std::int64_t tc = timed(cfg.measure_time, [&] {
      prod = hcs_tensor_product(hcs_sketch_tensor(a, pa), hcs_sketch_tensor(b, pb));
    });
    DenseTensor rec;
    const std::int64_t tr = timed(cfg.measure_time, [&] { rec = hcs_recover_full(prod); });
    if (record) {
      MemoryAccount mem = memory_account(*pa);
      const MemoryAccount mb = memory_account(*pb);
      mem.hash_entries += mb.hash_entries;
      mem.output_entries = d * prod.plan->sketch_length();
      out.add("hcs", ratio, dims_string(pa->sketch_dims), tc, tr, mem,
              relative_error(rec, truth_paired));
    }
  };

  bool warmed = !cfg.measure_time;
  for (std::size_t ri = 0; ri < cfg.ratios.size(); ++ri) {
    const std::size_t m = std::clamp<std::size_t>(
        static_cast<std::size_t>(std::llround(std::sqrt(kExact / cfg.ratios[ri]))), 1, 900);
    const double ratio = kExact / static_cast<double>(m * m);
    const std::uint64_t base = mix_seed(cfg.seed, 0xF0 + 16 * ri);
    if (!warmed) {
      run_hcs(m, mix_seed(base, 1), ratio, false);
      warmed = true;
    }
    run_cs(m, mix_seed(base, 0), ratio, true);
    run_hcs(m, mix_seed(base, 1), ratio, true);
  }
  sort_rows(out.rows);
  return out.rows;
}

std::vector<ExperimentRow> run_contract_experiment(const BenchConfig& cfg) {
  Uniform rng(mix_seed(cfg.seed, 303));
  DenseTensor a({30, 30, 40}), b({40, 30, 30});
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = rng(0.0, 10.0);
  for (std::size_t i = 0; i < b.size(); ++i) b[i] = rng(0.0, 10.0);

  // Group free and contracted indices: the contraction is a 900x40 by 40x900
  // matrix product in the same column-major layout.
  const DenseTensor a_mat = reshape(a, {900, 40});
  const DenseTensor b_mat = reshape(b, {40, 900});
  const ContractionSpec spec{{{1, 0}}};
  const DenseTensor truth = contract(a_mat, b_mat, spec);  // (900, 900)

  RowBuilder out{cfg, "contract", {}};
  const std::size_t d = cfg.replicas;
  constexpr double kExact = 900.0 * 900.0;

  auto run_cs = [&](std::size_t msq, std::uint64_t cell_seed, double ratio, bool record) {
    const std::size_t c = msq * msq;
    auto rowp = std::make_shared<CsPlan>(CsPlan::make(900, c, d, mix_seed(cell_seed, 10)));
    auto colp = std::make_shared<CsPlan>(CsPlan::make(900, c, d, mix_seed(cell_seed, 11)));
    CsSketch prod;
    const std::int64_t tc =
        timed(cfg.measure_time, [&] { prod = cs_matrix_product(a_mat, b_mat, rowp, colp); });
    DenseTensor rec;
    const std::int64_t tr =
        timed(cfg.measure_time, [&] { rec = DenseTensor({900, 900}, cs_recover_all(prod)); });
    if (record)
      out.add("cs", ratio, std::to_string(c), tc, tr, memory_account(*prod.plan),
              relative_error(rec, truth));
  };
  auto run_hcs = [&](std::size_t msq, std::uint64_t cell_seed, double ratio, bool record) {
    auto pa = std::make_shared<HcsPlan>(
        HcsPlan::make({900, 40}, {msq, 40}, d, mix_seed(cell_seed, 10), {1}));
    auto pb = std::make_shared<HcsPlan>(
        HcsPlan::make({40, 900}, {40, msq}, d, mix_seed(cell_seed, 11), {0}));
    HcsSketch prod;
    const std::int64_t tc = timed(cfg.measure_time, [&] {
      prod = hcs_contract(hcs_sketch_tensor(a_mat, pa), hcs_sketch_tensor(b_mat, pb), spec);
    });
    DenseTensor rec;
    const std::int64_t tr = timed(cfg.measure_time, [&] { rec = hcs_recover_full(prod); });
    if (record) {
      MemoryAccount mem = memory_account(*pa);
      const MemoryAccount mb = memory_account(*pb);
      mem.hash_entries += mb.hash_entries;
      mem.output_entries = d * prod.plan->sketch_length();
      out.add("hcs", ratio, dims_string(prod.plan->sketch_dims), tc, tr, mem,
              relative_error(rec, truth));
    }
  };

  bool warmed = !cfg.measure_time;
  for (std::size_t ri = 0; ri < cfg.ratios.size(); ++ri) {
    const std::size_t m4 = std::clamp<std::size_t>(
        static_cast<std::size_t>(std::llround(std::pow(kExact / cfg.ratios[ri], 0.25))), 1, 30);
    const std::size_t msq = m4 * m4;
    const double ratio = kExact / static_cast<double>(msq * msq);
    const std::uint64_t base = mix_seed(cfg.seed, 0x1F0 + 16 * ri);
    if (!warmed) {
      run_hcs(msq, mix_seed(base, 1), ratio, false);
      warmed = true;
    }
    run_cs(msq, mix_seed(base, 0), ratio, true);
    run_hcs(msq, mix_seed(base, 1), ratio, true);
  }
  sort_rows(out.rows);
  return out.rows;
}

void write_csv(std::ostream& out, std::span<const ExperimentRow> rows) {
  out << "experiment,method,compression_ratio,sketch_dims,replicas,seed,"
         "compress_time_ns,recover_time_ns,hash_entries,output_entries,relative_error\n";
  for (const ExperimentRow& r : rows) {
    out << r.experiment << ',' << r.method << ',' << format_double(r.compression_ratio) << ','
        << r.sketch_dims << ',' << r.replicas << ',' << r.seed << ',' << r.compress_time_ns << ','
        << r.recover_time_ns << ',' << r.hash_entries << ',' << r.output_entries << ','
        << format_double(r.relative_error) << '\n';
  }
}

}  // namespace hocs
