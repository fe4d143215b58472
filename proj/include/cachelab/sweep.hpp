#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "cachelab/config.hpp"
#include "cachelab/engine.hpp"
#include "cachelab/generators.hpp"
#include "cachelab/timing.hpp"

namespace cachelab {

/// A grid of (core count, L2 size) simulations sharing one workload
/// template and one base hierarchy; l2 capacity and cores vary per cell.
struct sweep_spec {
  std::vector<std::uint64_t> l2_sizes_bytes;
  std::vector<unsigned> core_counts;
  generator_params workload;
  hit_time_model hit_model;
  hierarchy_config base;
};

struct sweep_row {
  unsigned cores = 0;
  std::uint64_t l2_bytes = 0;
  double miss_rate_l1d = 0.0;
  double miss_rate_l2 = 0.0;
  double avg_miss_latency_ns = 0.0;
  double amat_ns = 0.0;
  double paper_access_time_ns = 0.0;
  double execution_time_s = 0.0;
};

/// "mb-grid": the 0.512-12 MB x {2,4} cores grid. "small-grid": the 8-64 kB
/// alternate grid. Anything else -> config_error.
sweep_spec builtin_sweep(const std::string& name);
std::vector<std::string> builtin_sweep_names();

sweep_spec parse_sweep_spec(const std::string& text);
sweep_spec load_sweep_spec(const std::string& path);

/// Derives one row from a finished simulation.
sweep_row make_row(const hierarchy_config& cfg, const hit_time_model& model, const sim_report& r);

/// Runs every combination, ordered by (cores asc, size asc). A failing
/// combination aborts with the (cores, size) pair named.
std::vector<sweep_row> run_sweep(const sweep_spec& spec);

void write_sweep_csv(const std::vector<sweep_row>& rows, std::ostream& out);

}  // namespace cachelab
