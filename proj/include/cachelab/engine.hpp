#pragma once

#include <cstdint>
#include <vector>

#include "cachelab/config.hpp"
#include "cachelab/types.hpp"

namespace cachelab {

enum class line_state { invalid, clean, dirty };

struct cache_line {
  std::uint64_t tag = 0;
  line_state state = line_state::invalid;
  unsigned lru_rank = 0;  // 0 = most recently used; per-set permutation of 0..ways-1
};

struct cache_stats {
  std::uint64_t read_hits = 0;
  std::uint64_t read_misses = 0;
  std::uint64_t write_hits = 0;
  std::uint64_t write_misses = 0;
  std::uint64_t ifetch_hits = 0;
  std::uint64_t ifetch_misses = 0;
  std::uint64_t evictions = 0;
  std::uint64_t writebacks = 0;
  std::uint64_t invalidations_received = 0;
  std::uint64_t total_miss_latency_cycles = 0;

  std::uint64_t hits() const { return read_hits + write_hits + ifetch_hits; }
  std::uint64_t misses() const { return read_misses + write_misses + ifetch_misses; }
  std::uint64_t accesses() const { return hits() + misses(); }
  double avg_miss_latency_cycles() const {
    return misses() ? double(total_miss_latency_cycles) / double(misses()) : 0.0;
  }

  bool operator==(const cache_stats&) const = default;
};

enum class miss_category { read, write, ifetch, all };

/// misses/accesses in the category; 0 accesses -> 0 by definition.
double miss_rate(const cache_stats& stats, miss_category category);

struct sim_report {
  std::vector<cache_stats> l1i;  // indexed by core
  std::vector<cache_stats> l1d;
  cache_stats l2;
  std::uint64_t instructions_executed = 0;  // = number of ifetch records
  std::uint64_t total_cycles = 0;
  // Writebacks that reached L2 as write accesses. Excludes writebacks merged
  // into a dying L2 line during back-invalidation (those never re-enter L2).
  std::uint64_t l1_writebacks_to_l2 = 0;
  double clock_hz = 0.0;

  double sim_seconds() const { return clock_hz > 0 ? double(total_cycles) / clock_hz : 0.0; }

  bool operator==(const sim_report&) const = default;
};

/// Cross-counter conservation: L2 accesses equal L1 misses plus forwarded
/// writebacks, and per-cache category sums are consistent.
bool counters_match(const sim_report& r);

enum class service_level { l1, l2, memory };

struct access_outcome {
  service_level level_hit = service_level::l1;
  unsigned latency_cycles = 0;
};

/// One set-associative write-back cache with true-LRU replacement.
class cache_array {
 public:
  cache_array() = default;
  explicit cache_array(const cache_geometry& g);

  std::uint64_t sets() const { return sets_; }
  unsigned ways() const { return ways_; }
  std::uint64_t set_of(std::uint64_t block) const { return block % sets_; }

  /// Way index of the block if present (any valid state), -1 otherwise.
  int find(std::uint64_t block) const;
  cache_line& line(std::uint64_t set, unsigned way) { return lines_[set * ways_ + way]; }
  const cache_line& line(std::uint64_t set, unsigned way) const { return lines_[set * ways_ + way]; }

  void touch(std::uint64_t set, unsigned way);  // make way MRU
  /// Way to fill for a new block: an invalid way if any, else the LRU way.
  unsigned victim_way(std::uint64_t set) const;

 private:
  std::uint64_t sets_ = 0;
  unsigned ways_ = 0;
  std::vector<cache_line> lines_;
};

/// Per-core split L1s over one shared inclusive L2 with write-back,
/// write-allocate and write-invalidate coherence (Invalid/Clean/Dirty).
class hierarchy_sim {
 public:
  explicit hierarchy_sim(const hierarchy_config& cfg);

  access_outcome access(const trace_record& rec);
  const sim_report& report() const { return report_; }
  const hierarchy_config& config() const { return cfg_; }

  /// True while no block has two dirty L1 copies (full scan).
  bool single_dirty_owner_ok() const;

  const cache_array& l1i_array(unsigned core) const { return l1i_[core]; }
  const cache_array& l1d_array(unsigned core) const { return l1d_[core]; }
  const cache_array& l2_array() const { return l2_; }

 private:
  unsigned fill_l1(cache_array& arr, cache_stats& st, std::uint64_t block);
  void install_l2(std::uint64_t block, line_state st);
  service_level fetch_through_l2(const trace_record& rec, cache_stats& requester);
  void coherence_scan(const trace_record& rec);
  void forward_writeback(std::uint64_t block);

  hierarchy_config cfg_;
  std::vector<cache_array> l1i_, l1d_;
  cache_array l2_;
  sim_report report_;
};

/// Applies records in order; deterministic. Access errors are rethrown as
/// trace_error carrying the zero-based record index.
sim_report run_trace(const hierarchy_config& cfg, const std::vector<trace_record>& records);

/// As run_trace, but verifies the single-dirty-owner property after every
/// access regardless of build type; violation throws std::logic_error.
sim_report run_trace_checked(const hierarchy_config& cfg, const std::vector<trace_record>& records);

}  // namespace cachelab
