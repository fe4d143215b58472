#pragma once

#include <cstdint>
#include <stdexcept>

namespace cachelab {

enum class access_kind { read, write, ifetch };

/// One memory reference as seen by the hierarchy.
struct trace_record {
  int core = 0;
  access_kind kind = access_kind::read;
  std::uint64_t address = 0;

  bool operator==(const trace_record&) const = default;
};

/// Configuration or usage problem. CLI exit code 1.
struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed or out-of-range input data. CLI exit code 2.
struct trace_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

char kind_letter(access_kind k);

}  // namespace cachelab
