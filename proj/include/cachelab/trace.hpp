#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "cachelab/types.hpp"

namespace cachelab {

struct trace_header {
  unsigned core_count = 1;
  std::uint64_t record_count = 0;
  std::string generator = "none";
  std::uint64_t seed = 0;

  bool operator==(const trace_header&) const = default;
};

/// An ordered reference stream. Record order is the global interleaving.
struct trace_file {
  trace_header header;
  std::vector<trace_record> records;

  bool operator==(const trace_file&) const = default;
};

/// Strict v1 grammar. Diagnostics carry 1-based line numbers.
trace_file parse_trace(std::istream& in);

/// Canonical form: single spaces, lowercase hex, LF endings.
void emit_trace(const trace_file& t, std::ostream& out);

trace_file load_trace_file(const std::string& path);
void save_trace_file(const trace_file& t, const std::string& path);

}  // namespace cachelab
