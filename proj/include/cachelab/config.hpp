#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "cachelab/types.hpp"

namespace cachelab {

/// Geometry of one set-associative cache level.
struct cache_geometry {
  std::uint64_t capacity_bytes = 0;
  unsigned associativity = 0;
  unsigned block_size_bytes = 0;

  std::uint64_t sets() const;

  bool operator==(const cache_geometry&) const = default;
};

/// Whole-hierarchy configuration: p cores with split L1s over a shared L2.
struct hierarchy_config {
  unsigned core_count = 1;
  cache_geometry l1i;
  cache_geometry l1d;
  cache_geometry l2;
  unsigned l1_hit_cycles = 1;
  unsigned l2_hit_cycles = 10;
  unsigned mem_cycles = 100;
  double clock_hz = 1.0e9;
  // Permit capacities of the form 3*2^k (6 MB class parts); block size and
  // associativity must still divide capacity into a whole number of sets.
  bool allow_non_pow2 = false;

  bool operator==(const hierarchy_config&) const = default;
};

using raw_config = std::vector<std::pair<std::string, std::string>>;

raw_config parse_config_text(const std::string& text);
hierarchy_config validate_config(const raw_config& kv);
std::string serialize_config(const hierarchy_config& cfg);
hierarchy_config load_config_file(const std::string& path);

void validate(const hierarchy_config& cfg);

/// Named machine models. Unknown name -> config_error listing valid names.
hierarchy_config preset(const std::string& name);
std::vector<std::string> preset_names();

}  // namespace cachelab
