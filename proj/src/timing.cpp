#include "cachelab/timing.hpp"

#include <cmath>
#include <stdexcept>

namespace cachelab {

double amat(double hit_time, double miss_rate, double miss_penalty) {
  if (!(miss_rate >= 0.0 && miss_rate <= 1.0))
    throw std::invalid_argument("amat: miss_rate must be in [0,1]");
  if (hit_time < 0.0 || miss_penalty < 0.0)
    throw std::invalid_argument("amat: times must be >= 0");
  return hit_time + miss_rate * miss_penalty;
}

double avg_cache_access_time(const access_time_inputs& inp) {
  if (!(inp.tn1 > 0.0)) throw std::invalid_argument("avg_cache_access_time: tn1 must be > 0");
  return (inp.n1 / inp.tn1) * inp.e1 + inp.wr1 * inp.ml1;
}

double memory_stall_cycles(const timing_inputs& inp) {
  return inp.instruction_count * inp.miss_per_instruction_l1 * inp.miss_penalty_l1;
}

double miss_per_instruction(const timing_inputs& inp) {
  return inp.miss_rate_l1 + (inp.hit_rate_l2 * inp.mem_access_per_inst +
                             inp.miss_rate_l2 * inp.mem_access_per_inst * inp.miss_penalty_l2);
}

double textbook_miss_per_instruction(const timing_inputs& inp) {
  return inp.mem_access_per_inst * inp.miss_rate_l1 * inp.miss_rate_l2;
}

double cpu_execution_time(const timing_inputs& inp) {
  return (inp.cpu_clock_cycles + memory_stall_cycles(inp)) * inp.clock_cycle_time;
}

double improvement_in_execution_time(double delta_access_per_inst, double inst_count) {
  if (delta_access_per_inst < 0.0 || inst_count < 0.0)
    throw std::invalid_argument("improvement_in_execution_time: inputs must be >= 0");
  return delta_access_per_inst * inst_count;
}

double hit_time_model::at_sets(std::uint64_t set_count) const {
  if (set_count == 0) throw std::invalid_argument("hit_time_model: set count must be >= 1");
  return base + slope * std::log2(double(set_count));
}

}  // namespace cachelab
