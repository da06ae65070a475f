#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "hocs/bench.hpp"
#include "support/oracles.hpp"

using hocs::BenchConfig;
using hocs::CsPlan;
using hocs::DenseTensor;
using hocs::HcsPlan;

TEST_CASE("relative error fixed values and scale invariance") {
  oracle::Rng rng(81);
  DenseTensor a = rng.tensor({4, 4});
  CHECK(hocs::relative_error(a, a) == 0.0);
  CHECK(hocs::relative_error(DenseTensor({4, 4}), a) == doctest::Approx(1.0));

  DenseTensor twice = a;
  for (std::size_t i = 0; i < twice.size(); ++i) twice[i] *= 2.0;
  CHECK(hocs::relative_error(twice, a) == doctest::Approx(1.0));

  // error(alpha*est, alpha*truth) == error(est, truth) for alpha > 0.
  DenseTensor est = rng.tensor({4, 4});
  const double alpha = 3.25;
  DenseTensor se = est, sa = a;
  for (std::size_t i = 0; i < 16; ++i) {
    se[i] *= alpha;
    sa[i] *= alpha;
  }
  CHECK(hocs::relative_error(se, sa) == doctest::Approx(hocs::relative_error(est, a)));

  CHECK_THROWS_AS(hocs::relative_error(a, DenseTensor({4, 4})), std::invalid_argument);
  CHECK_THROWS_AS(hocs::relative_error(a, rng.tensor({2, 2})), std::invalid_argument);
}

TEST_CASE("memory accounting formulas") {
  // Flat vector of 2500 entries versus the same data as a 50x50 reshape.
  const CsPlan cs = CsPlan::make(2500, 625, 1, 1);
  CHECK(hocs::memory_account(cs).hash_entries == 2 * 2500);
  CHECK(hocs::memory_account(cs).output_entries == 625);

  const HcsPlan hcs = HcsPlan::make({50, 50}, {25, 25}, 1, 1);
  CHECK(hocs::memory_account(hcs).hash_entries == 2 * 100);
  CHECK(hocs::memory_account(hcs).output_entries == 625);

  // Identity modes are free.
  const HcsPlan id = HcsPlan::identity({6, 7});
  CHECK(hocs::memory_account(id).hash_entries == 0);

  // Replicas scale both counts linearly.
  const CsPlan cs5 = CsPlan::make(2500, 625, 5, 1);
  CHECK(hocs::memory_account(cs5).hash_entries == 5 * 2 * 2500);
  CHECK(hocs::memory_account(cs5).output_entries == 5 * 625);
  const HcsPlan hcs5 = HcsPlan::make({50, 50}, {25, 25}, 5, 1);
  CHECK(hocs::memory_account(hcs5).hash_entries == 5 * 200);
  CHECK(hocs::memory_account(hcs5).output_entries == 5 * 625);
}

TEST_CASE("spike experiment rows and determinism") {
  BenchConfig cfg;
  cfg.seed = 4242;
  cfg.replicas = 5;
  cfg.ratios = {4.0, 16.0};
  cfg.measure_time = false;

  const auto rows = hocs::run_spike_experiment(cfg);
  CHECK(rows.size() == 3 * cfg.ratios.size());

  for (const auto& r : rows) {
    CHECK(r.experiment == "spike");
    CHECK(r.replicas == 5);
    CHECK(r.seed == 4242);
    CHECK(r.relative_error >= 0.0);
    CHECK(r.hash_entries > 0);
    CHECK(r.output_entries > 0);
    CHECK(r.compress_time_ns == 0);  // timing disabled
  }

  // HCS hash memory strictly beats CS at every matched ratio.
  for (std::size_t i = 0; i < rows.size(); i += 3) {
    CHECK(rows[i].method == "cs");
    CHECK(rows[i + 1].method == "hcs");
    CHECK(rows[i + 2].method == "hcs-reshuffled");
    CHECK(rows[i + 1].hash_entries < rows[i].hash_entries);
    CHECK(rows[i + 1].output_entries == rows[i].output_entries);
  }

  // Byte-identical CSV on a re-run with the same seed.
  std::ostringstream csv1, csv2;
  hocs::write_csv(csv1, rows);
  hocs::write_csv(csv2, hocs::run_spike_experiment(cfg));
  CHECK(csv1.str() == csv2.str());

  // Identity compression (ratio 1) recovers exactly.
  BenchConfig exact = cfg;
  exact.ratios = {1.0};
  const auto exact_rows = hocs::run_spike_experiment(exact);
  for (const auto& r : exact_rows) CHECK(r.relative_error < 1e-9);
}

TEST_CASE("csv header and layout") {
  std::ostringstream out;
  hocs::write_csv(out, std::vector<hocs::ExperimentRow>{});
  CHECK(out.str() ==
        "experiment,method,compression_ratio,sketch_dims,replicas,seed,"
        "compress_time_ns,recover_time_ns,hash_entries,output_entries,relative_error\n");

  hocs::ExperimentRow row{"spike", "cs", 4.0, "625", 20, 42, 10, 20, 100, 50, 0.125};
  std::ostringstream one;
  hocs::write_csv(one, std::vector<hocs::ExperimentRow>{row});
  CHECK(one.str().find("spike,cs,4,625,20,42,10,20,100,50,0.125\n") != std::string::npos);
}

TEST_CASE("plot rendering writes an svg") {
  BenchConfig cfg;
  cfg.replicas = 3;
  cfg.ratios = {4.0};
  cfg.measure_time = false;
  const auto rows = hocs::run_spike_experiment(cfg);
  const std::string path = "test_plot_out.svg";
  hocs::render_plot_svg(path, rows);
  std::ifstream f(path);
  std::stringstream buf;
  buf << f.rdbuf();
  CHECK(buf.str().rfind("<svg", 0) == 0);
  CHECK(buf.str().find("relative error") != std::string::npos);
  std::remove(path.c_str());
}

TEST_CASE("verification battery passes") {
  std::ostringstream log;
  CHECK(hocs::run_verification(log, 42) == 0);
}
