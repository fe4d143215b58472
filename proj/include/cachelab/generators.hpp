#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cachelab/trace.hpp"
#include "cachelab/types.hpp"

namespace cachelab {

enum class workload_kind { radix, fft, fmm };

workload_kind workload_from_name(const std::string& name);
const char* workload_name(workload_kind w);

/// scale is total work: keys for radix, matrix side n for fft (the n x n
/// point grid each run transposes), bodies for fmm.
struct generator_params {
  workload_kind workload = workload_kind::radix;
  unsigned cores = 2;
  std::uint64_t scale = 8192;
  unsigned iterations = 1;
  std::uint64_t seed = 1;
};

void validate(const generator_params& p);

/// One named address range used by a generator (a core's keys, a shared
/// histogram, a code segment, ...).
struct address_region {
  std::string name;
  std::uint64_t base = 0;
  std::uint64_t size = 0;

  std::uint64_t end() const { return base + size; }
};

/// Places regions at pairwise-disjoint addresses: region i lives under its
/// own GiB so tags never alias, while the 4 kB-aligned running offset keeps
/// the regions' cache-set windows disjoint for any set count whose wrap
/// (sets * block) covers the packed footprint.
std::vector<address_region> plan_regions(
    const std::vector<std::pair<std::string, std::uint64_t>>& sizes);

trace_file generate_radix(const generator_params& p);
trace_file generate_fft(const generator_params& p);
trace_file generate_fmm(const generator_params& p);

/// Dispatch on p.workload.
trace_file generate(const generator_params& p);

/// The regions a given parameter set will touch (exposed for layout tests).
std::vector<address_region> regions_for(const generator_params& p);

}  // namespace cachelab
