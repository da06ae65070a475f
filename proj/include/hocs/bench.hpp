#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "hocs/count_sketch.hpp"
#include "hocs/hcs.hpp"
#include "hocs/tensor.hpp"

namespace hocs {

/// One CSV row of a benchmark run. Column order in the file matches field
/// order here; times are monotonic-clock nanoseconds (zero when timing is
/// disabled for byte-reproducible output).
struct ExperimentRow {
  std::string experiment;
  std::string method;  // cs | hcs | hcs-reshuffled
  double compression_ratio = 0.0;
  std::string sketch_dims;
  std::size_t replicas = 0;
  std::uint64_t seed = 0;
  std::int64_t compress_time_ns = 0;
  std::int64_t recover_time_ns = 0;
  std::size_t hash_entries = 0;
  std::size_t output_entries = 0;
  double relative_error = 0.0;
};

struct BenchConfig {
  std::uint64_t seed = 42;
  std::size_t replicas = 20;
  std::vector<double> ratios = {2.0, 4.0, 8.0};
  bool measure_time = true;
};

/// ||estimate - truth||_F / ||truth||_F; the truth must be nonzero.
double relative_error(const DenseTensor& estimate, const DenseTensor& truth);

/// Hash-table and sketch-output entry counts under the accounting model: one
/// index plus one sign entry per domain element per replica (identity modes
/// are free), and one output entry per bucket per replica.
struct MemoryAccount {
  std::size_t hash_entries = 0;
  std::size_t output_entries = 0;
};
MemoryAccount memory_account(const CsPlan& plan);
MemoryAccount memory_account(const HcsPlan& plan);

/// 50x50 matrix, uniform [-1,1] except column 1 pinned to 100; compares CS,
/// raw HCS and HCS-after-reshuffle full recovery at each requested ratio.
std::vector<ExperimentRow> run_spike_experiment(const BenchConfig& cfg);

/// 30x30 uniform [-5,5] pair; CS of the flattened outer product (convolution
/// route) versus the sketched per-mode pairing product, matched output sizes.
std::vector<ExperimentRow> run_kron_experiment(const BenchConfig& cfg);

/// 30x30x40 by 40x30x30 contraction over the 40-mode, entries uniform
/// [0,10]; CS sums convolved slice sketches, HCS contracts grouped-matricized
/// sketches with the contracted mode left uncompressed.
std::vector<ExperimentRow> run_contract_experiment(const BenchConfig& cfg);

void write_csv(std::ostream& out, std::span<const ExperimentRow> rows);

/// Minimal static SVG: relative error, total time and total memory entries
/// versus compression ratio, one series per method.
void render_plot_svg(const std::string& path, std::span<const ExperimentRow> rows);

/// Property battery behind the `verify` CLI subcommand; returns the number of
/// failed suites (0 = all good) and reports one line per suite.
int run_verification(std::ostream& out, std::uint64_t seed);

}  // namespace hocs
