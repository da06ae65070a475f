#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hocs/bench.hpp"

namespace {

struct CliOptions {
  hocs::BenchConfig cfg;
  std::string out_path;
  std::string plot_path;
  bool no_timing = false;
};

void add_common_flags(CLI::App* cmd, CliOptions& opt, bool experiment) {
  cmd->add_option("--seed", opt.cfg.seed, "Root seed; every hash and input derives from it")
      ->capture_default_str();
  if (experiment) {
    cmd->add_option("--replicas", opt.cfg.replicas, "Independent sketch replicas (median taken)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--ratios", opt.cfg.ratios, "Compression ratios to sweep")
        ->delimiter(',')
        ->check(CLI::PositiveNumber);
    cmd->add_option("--out", opt.out_path, "CSV output path (stdout when omitted)");
    cmd->add_option("--plot", opt.plot_path, "Optional SVG plot path");
    cmd->add_flag("--no-timing", opt.no_timing,
                  "Zero the timing columns so identical runs are byte-identical");
  }
}

int emit(const CliOptions& opt, const std::vector<hocs::ExperimentRow>& rows) {
  if (opt.out_path.empty()) {
    hocs::write_csv(std::cout, rows);
  } else {
    std::ofstream f(opt.out_path, std::ios::binary);
    if (!f) {
      std::cerr << "error: cannot open " << opt.out_path << "\n";
      return 1;
    }
    hocs::write_csv(f, rows);
  }
  if (!opt.plot_path.empty()) hocs::render_plot_svg(opt.plot_path, rows);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Count sketch and higher-order count sketch benchmarks"};
  app.require_subcommand(1);

  CliOptions opt;
  CLI::App* verify = app.add_subcommand("verify", "Run the property suites");
  CLI::App* spike = app.add_subcommand("spike", "Spiked-matrix compression experiment");
  CLI::App* kron = app.add_subcommand("kron", "Kronecker-product sketching experiment");
  CLI::App* contract = app.add_subcommand("contract", "Tensor-contraction sketching experiment");
  add_common_flags(verify, opt, false);
  for (CLI::App* cmd : {spike, kron, contract}) add_common_flags(cmd, opt, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;  // 2 on usage errors, 0 for --help
  }

  try {
    opt.cfg.measure_time = !opt.no_timing;
    if (verify->parsed()) {
      const int failures = hocs::run_verification(std::cout, opt.cfg.seed);
      if (failures > 0) {
        std::cout << failures << " suite(s) failed\n";
        return 1;
      }
      std::cout << "all property suites passed\n";
      return 0;
    }
    if (spike->parsed()) return emit(opt, hocs::run_spike_experiment(opt.cfg));
    if (kron->parsed()) return emit(opt, hocs::run_kron_experiment(opt.cfg));
    if (contract->parsed()) return emit(opt, hocs::run_contract_experiment(opt.cfg));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
