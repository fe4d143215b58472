#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "cachelab/config.hpp"
#include "cachelab/engine.hpp"
#include "cachelab/generators.hpp"

namespace cachelab {

/// One row per cache: l1i/l1d per core, then the shared l2 (core = -1).
void write_report_csv(const sim_report& r, std::ostream& out);

/// --config accepts a file path or a preset name; an existing file wins.
hierarchy_config resolve_config(const std::string& name_or_path);

// Commands return the process exit code and write diagnostics to diag:
// 0 success, 1 configuration/usage problem, 2 malformed input data.
int cmd_simulate(const std::string& config, const std::string& trace, const std::string& out_path,
                 std::ostream& diag);
int cmd_sweep(const std::string& spec, const std::string& out_path, std::ostream& diag);
int cmd_contention(std::uint64_t n, unsigned p, unsigned r, unsigned k, std::uint64_t trials,
                   std::uint64_t seed, std::ostream& out, std::ostream& diag);
int cmd_generate(const generator_params& params, const std::string& out_path, std::ostream& diag);

}  // namespace cachelab
