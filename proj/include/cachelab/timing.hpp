#pragma once

#include <cstdint>

namespace cachelab {

/// Every symbol used by the execution-time estimation chain. Times are
/// seconds, latencies cycles; callers convert explicitly.
struct timing_inputs {
  double cpu_clock_cycles = 0.0;
  double instruction_count = 0.0;
  double miss_per_instruction_l1 = 0.0;
  double miss_penalty_l1 = 0.0;  // cycles
  double miss_rate_l1 = 0.0;
  double hit_rate_l2 = 0.0;
  double miss_rate_l2 = 0.0;
  double mem_access_per_inst = 0.0;
  double miss_penalty_l2 = 0.0;  // cycles
  double clock_cycle_time = 0.0;  // seconds
};

/// Inputs of the empirical average-access-time estimator: n1 read hits out
/// of tn1 instructions, execution time e1 (s), write miss rate wr1, average
/// miss latency ml1 (s). n1 > tn1 is possible (several reads per
/// instruction) and reported, not rejected.
struct access_time_inputs {
  double n1 = 0.0;
  double tn1 = 0.0;
  double e1 = 0.0;
  double wr1 = 0.0;
  double ml1 = 0.0;

  bool reads_exceed_instructions() const { return n1 > tn1; }
};

/// hit_time + miss_rate * miss_penalty, all in seconds.
double amat(double hit_time, double miss_rate, double miss_penalty);

/// (n1/tn1)*e1 + wr1*ml1.
double avg_cache_access_time(const access_time_inputs& inp);

/// instruction_count * miss_per_instruction_l1 * miss_penalty_l1.
double memory_stall_cycles(const timing_inputs& inp);

/// miss_rate_l1 + (hit_rate_l2*mem_access_per_inst
///               + miss_rate_l2*mem_access_per_inst*miss_penalty_l2),
/// kept in its source form (the last term carries a cycle weight).
double miss_per_instruction(const timing_inputs& inp);

/// Conventional two-level comparator: misses that reach memory per
/// instruction = mem_access_per_inst * miss_rate_l1 * miss_rate_l2.
double textbook_miss_per_instruction(const timing_inputs& inp);

/// (cpu_clock_cycles + memory_stall_cycles) * clock_cycle_time.
double cpu_execution_time(const timing_inputs& inp);

/// delta access time per instruction * instruction count.
double improvement_in_execution_time(double delta_access_per_inst, double inst_count);

/// Monotone analytical stand-in for a circuit-level access-time model:
/// hit_time(sets) = base + slope * log2(sets). Defaults put a 4096-set
/// (0.512 MB, 2-way, 64 B) cache at 3.215 ns.
struct hit_time_model {
  double base = 0.215e-9;   // seconds
  double slope = 0.250e-9;  // seconds per doubling of set count

  double at_sets(std::uint64_t set_count) const;
};

}  // namespace cachelab
