#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "cachelab/commands.hpp"
#include "cachelab/config.hpp"
#include "cachelab/generators.hpp"

namespace {

std::uint64_t default_scale(cachelab::workload_kind w) {
  switch (w) {
    case cachelab::workload_kind::radix: return 8192;  // keys
    case cachelab::workload_kind::fft: return 64;      // matrix side
    case cachelab::workload_kind::fmm: return 256;     // bodies
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cachelab: trace-driven multicore cache hierarchy simulator"};
  app.require_subcommand(1);

  std::string config_arg, trace_arg, spec_arg, out_arg, workload_arg = "radix";
  std::uint64_t seed = 1, trials = 1000000, scale = 0, n_blocks = 0;
  unsigned cores = 2, iterations = 1, r_requests = 0, k_values = 1;

  auto* sim = app.add_subcommand("simulate", "run one trace through one hierarchy");
  sim->add_option("--config", config_arg, "config file or preset name")->required();
  sim->add_option("--trace", trace_arg, "trace file (v1 grammar)")->required();
  sim->add_option("--out", out_arg, "output CSV path")->required();

  auto* swp = app.add_subcommand("sweep", "simulate a (cores x L2 size) grid");
  swp->add_option("--spec", spec_arg, "sweep spec file, or built-in: mb-grid, small-grid")
      ->required();
  swp->add_option("--out", out_arg, "output CSV path")->required();

  auto* con = app.add_subcommand("contention", "closed-form contention values vs Monte Carlo");
  con->add_option("n", n_blocks, "number of cache blocks")->required();
  con->add_option("r", r_requests, "simultaneous requests (r <= cores)")->required();
  con->add_option("k", k_values, "distinct written values (k < cores)");
  con->add_option("--cores", cores, "cores p (default 2)");
  con->add_option("--trials", trials, "Monte Carlo trials (default 1000000)");
  con->add_option("--seed", seed, "Monte Carlo seed (default 1)");
  con->add_option("--out", out_arg, "write the table here instead of stdout");

  auto* gen = app.add_subcommand("generate", "emit a synthetic workload trace");
  gen->add_option("--workload", workload_arg, "radix, fft or fmm")->required();
  gen->add_option("--cores", cores, "core count (default 2)");
  gen->add_option("--scale", scale, "keys / matrix side / bodies (default per workload)");
  gen->add_option("--iterations", iterations, "repetitions of the pattern (default 1)");
  gen->add_option("--seed", seed, "generator seed (default 1)");
  gen->add_option("--out", out_arg, "output trace path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  }

  if (sim->parsed()) return cachelab::cmd_simulate(config_arg, trace_arg, out_arg, std::cerr);

  if (swp->parsed()) return cachelab::cmd_sweep(spec_arg, out_arg, std::cerr);

  if (con->parsed()) {
    if (!out_arg.empty()) {
      std::ofstream out(out_arg, std::ios::binary);
      if (!out) {
        std::cerr << "config error: cannot open output file '" << out_arg << "'\n";
        return 1;
      }
      return cachelab::cmd_contention(n_blocks, cores, r_requests, k_values, trials, seed, out,
                                      std::cerr);
    }
    return cachelab::cmd_contention(n_blocks, cores, r_requests, k_values, trials, seed, std::cout,
                                    std::cerr);
  }

  if (gen->parsed()) {
    cachelab::generator_params params;
    try {
      params.workload = cachelab::workload_from_name(workload_arg);
    } catch (const std::exception& e) {
      std::cerr << "usage error: " << e.what() << "\n";
      return 1;
    }
    params.cores = cores;
    params.scale = scale ? scale : default_scale(params.workload);
    params.iterations = iterations;
    params.seed = seed;
    return cachelab::cmd_generate(params, out_arg, std::cerr);
  }

  std::cerr << "usage error: no subcommand\n";
  return 1;
}
